#include "entrywise/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

using namespace entrywise;

// Published Philox4x32-10 answer for zero counter and zero key:
// {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}.
TEST(Philox, KnownAnswerZeroCounterZeroKey) {
  Rng rng(Seed{0, 0});
  EXPECT_EQ(rng.next_u64(), 0xe169c58d6627e8d5ull);
  EXPECT_EQ(rng.next_u64(), 0x9b00dbd8bc57ac4cull);
}

TEST(Philox, FrozenStreamAllOnes) {
  Rng rng(Seed{~0ull, ~0ull});
  EXPECT_EQ(rng.next_u64(), 0x716983d63d3be307ull);
}

TEST(Philox, SameSeedSameSequence) {
  Rng a(Seed{42, 7}), b(Seed{42, 7});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Philox, StreamsDiffer) {
  Rng a(Seed{42, 7}), b(Seed{42, 8}), c(Seed{43, 7});
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(Philox, UniformOpenInterval) {
  Rng rng(Seed{1});
  double sum = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // mean of U(0,1) with standard error sqrt(1/12 / count)
  EXPECT_NEAR(sum / count, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / count));
}

TEST(Philox, NormalMoments) {
  Rng rng(Seed{2});
  const int count = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / count, 0.0, 5.0 / std::sqrt(count));
  EXPECT_NEAR(s2 / count, 1.0, 5.0 * std::sqrt(2.0 / count));
}

TEST(Philox, GeometricMean) {
  Rng rng(Seed{3});
  const double p = 0.05;
  const int count = 100000;
  double sum = 0.0;
  for (int i = 0; i < count; ++i) sum += static_cast<double>(rng.geometric(std::log1p(-p)));
  const double mean = (1 - p) / p;
  const double sd = std::sqrt(1 - p) / p;
  EXPECT_NEAR(sum / count, mean, 5.0 * sd / std::sqrt(count));
}

TEST(Philox, GeometricSaturatesAtZeroProbability) {
  Rng rng(Seed{3});
  EXPECT_EQ(rng.geometric(0.0), std::numeric_limits<std::uint64_t>::max());
}

TEST(Philox, BernoulliEdges) {
  Rng rng(Seed{4});
  for (int i = 0; i < 1000; ++i) {
    ASSERT_FALSE(rng.bernoulli(0.0));
    ASSERT_TRUE(rng.bernoulli(1.0));
  }
}

// Reference values from scipy.stats.norm.ppf.
TEST(NormalQuantile, MatchesReference) {
  struct Case {
    double p, z;
  };
  const std::vector<Case> cases = {{0.975, 1.959963984540054},   {0.001, -3.090232306167813},
                                   {1e-10, -6.361340902404056},  {0.02425, -1.972961051311885},
                                   {0.9, 1.2815515655446004}};
  for (const auto& c : cases) EXPECT_NEAR(normal_quantile(c.p), c.z, 1.2e-9 * std::abs(c.z)) << c.p;
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
}

TEST(NormalQuantile, Antisymmetric) {
  for (double p : {1e-8, 0.01, 0.1, 0.3, 0.45}) EXPECT_NEAR(normal_quantile(p), -normal_quantile(1 - p), 1e-9);
}

TEST(NormalQuantile, RejectsOutsideUnitInterval) {
  EXPECT_THROW(normal_quantile(0.0), std::domain_error);
  EXPECT_THROW(normal_quantile(1.0), std::domain_error);
  EXPECT_THROW(normal_quantile(std::nan("")), std::domain_error);
}

TEST(TrialSeed, DisjointAcrossCoordinates) {
  std::set<std::uint64_t> streams;
  for (std::uint64_t cell = 0; cell < 20; ++cell)
    for (std::uint64_t trial = 0; trial < 20; ++trial)
      for (std::uint32_t purpose = 0; purpose < 3; ++purpose) {
        const Seed s = trial_seed(99, cell, trial, purpose);
        EXPECT_EQ(s.key, 99u);
        streams.insert(s.stream);
      }
  EXPECT_EQ(streams.size(), 20u * 20u * 3u);
}

TEST(TrialSeed, ExtremeCoordinatesStayDistinct) {
  const Seed a = trial_seed(1, (1ull << 32) - 1, (1ull << 24) - 1, 255);
  const Seed b = trial_seed(1, (1ull << 32) - 2, (1ull << 24) - 1, 255);
  const Seed c = trial_seed(1, (1ull << 32) - 1, (1ull << 24) - 2, 255);
  EXPECT_NE(a.stream, b.stream);
  EXPECT_NE(a.stream, c.stream);
  EXPECT_EQ(a.stream, ~0ull);
}

TEST(TrialSeed, RangeErrors) {
  EXPECT_THROW(trial_seed(1, 1ull << 32, 0, 0), std::invalid_argument);
  EXPECT_THROW(trial_seed(1, 0, 1ull << 24, 0), std::invalid_argument);
  EXPECT_THROW(trial_seed(1, 0, 0, 256), std::invalid_argument);
}

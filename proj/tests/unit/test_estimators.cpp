#include "dense_oracle.hpp"
#include "entrywise/diagnostics.hpp"
#include "entrywise/estimators.hpp"
#include "entrywise/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace entrywise;

namespace {

Vector as_vector(const std::vector<int>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

bool equal_up_to_sign(const std::vector<int>& a, const std::vector<int>& b) {
  bool same = true, flipped = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i] == b[i];
    flipped = flipped && a[i] == -b[i];
  }
  return same || flipped;
}

}  // namespace

TEST(Z2Estimate, NoiselessRecoversSignal) {
  const Z2Sync spec = make_z2(50, 0.0);
  const LabelEstimate est = z2_estimate(sample_z2(spec, Seed{1}), spec.x);
  EXPECT_TRUE(equal_up_to_sign(est.labels, spec.x));
  ASSERT_TRUE(est.margin.has_value());
  EXPECT_NEAR(*est.margin, 1.0, 1e-10);
  EXPECT_EQ(est.source_eigen_index, 0u);
  EXPECT_NEAR(est.eigenvalues[0], 50.0, 1e-9);
}

TEST(Z2Estimate, MonteCarloFarFromBoundary) {
  const std::size_t n = 1000;
  const double boundary = z2_boundary(n);
  EXPECT_NEAR(boundary, std::sqrt(1000 / (2 * std::log(1000.0))), 1e-12);
  int low = 0, high = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    for (double factor : {0.5, 2.0}) {
      const Z2Sync spec = make_z2(n, factor * boundary);
      const LabelEstimate est = z2_estimate(sample_z2(spec, trial_seed(3, 0, t, 1)), spec.x);
      const bool ok = misclassification(est.labels, spec.x) == 0.0;
      (factor < 1 ? low : high) += ok;
    }
  }
  EXPECT_GE(low, 99);
  EXPECT_LE(high, 5);
}

TEST(SbmEstimate, PopulationInputSplitsBlocks) {
  const Sbm2 spec = make_sbm2(8, 3, 1);
  const PopulationModel pop = population(spec);
  const SymmetricMatrix a_star = SymmetricMatrix::from_dense(pop.a_star->to_dense());
  const LabelEstimate est = sbm_estimate(a_star, spec.labels);
  EXPECT_TRUE(equal_up_to_sign(est.labels, spec.labels));
  EXPECT_EQ(est.source_eigen_index, 1u);
  EXPECT_NEAR(*est.margin, 1.0, 1e-10);
  EXPECT_FALSE(est.ambiguous);
}

TEST(SbmEstimate, MarginPositiveImpliesExactRecovery) {
  const Sbm2 spec = make_sbm2(300, 25, 4);
  int positive = 0;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const LabelEstimate est = sbm_estimate(sample_sbm2(spec, Seed{t, 5}), spec.labels);
    if (*est.margin > 0) {
      ++positive;
      EXPECT_TRUE(equal_up_to_sign(est.labels, spec.labels));
    }
  }
  EXPECT_GT(positive, 20);
}

TEST(SbmEstimate, TwoClustersNearPlusMinusOne) {
  const Sbm2 spec = make_sbm2(5000, 4.5, 0.25);
  const LabelEstimate est = sbm_estimate(sample_sbm2(spec, Seed{6}), spec.labels);
  const Vector x = std::sqrt(5000.0) * est.vector;
  const double s = x.dot(as_vector(spec.labels)) > 0 ? 1.0 : -1.0;
  double in_j = 0, out_j = 0;
  for (std::size_t i = 0; i < 5000; ++i) (spec.labels[i] == 1 ? in_j : out_j) += s * x[i];
  EXPECT_NEAR(in_j / 2500, 1.0, 0.2);
  EXPECT_NEAR(out_j / 2500, -1.0, 0.2);
}

TEST(SbmEstimate, CenteredModeUsesLeadingVector) {
  const Sbm2 spec = make_sbm2(400, 30, 3);
  const SymmetricMatrix a = sample_sbm2(spec, Seed{7});
  const LabelEstimate raw = sbm_estimate(a, spec.labels);
  const LabelEstimate centered = sbm_estimate(a, spec.labels, SbmOptions{true});
  EXPECT_EQ(centered.source_eigen_index, 0u);
  EXPECT_EQ(misclassification(raw.labels, spec.labels), misclassification(centered.labels, spec.labels));
}

TEST(SbmEstimate, MarginIndependentOfTruthSign) {
  const Sbm2 spec = make_sbm2(200, 20, 4);
  const SymmetricMatrix a = sample_sbm2(spec, Seed{8});
  std::vector<int> neg = spec.labels;
  for (int& v : neg) v = -v;
  EXPECT_EQ(*sbm_estimate(a, spec.labels).margin, *sbm_estimate(a, neg).margin);
  EXPECT_THROW(sbm_estimate(a, std::vector<int>{1, -1}), std::invalid_argument);
}

TEST(Sbm3Embed, PopulationInputHitsCenters) {
  const std::size_t n = 30;
  const Sbm3 spec = make_sbm3(n, 8, 1);
  const PopulationModel pop = population(spec);
  const SymmetricMatrix a_star = SymmetricMatrix::from_dense(pop.a_star->to_dense());
  const Sbm3Embedding emb = sbm3_embed(a_star, spec);
  // Distinct centers sit sqrt(6 / n) apart; every row sits on its own center.
  for (Eigen::Index i = 0; i < emb.separation.size(); ++i)
    EXPECT_NEAR(emb.separation[i], std::sqrt(6.0 / n), 1e-9);
  const Matrix q = emb.alignment;
  EXPECT_LE((q * q.transpose() - Matrix::Identity(2, 2)).norm(), 1e-10);
}

TEST(Sbm3Embed, StrongSignalSeparatesAllNodes) {
  const Sbm3 spec = make_sbm3(600, 30, 2);
  const Sbm3Embedding emb = sbm3_embed(sample_sbm3(spec, Seed{9}), spec);
  EXPECT_GT(emb.separation.minCoeff(), 0.0);
  EXPECT_THROW(sbm3_embed(sample_sbm3(spec, Seed{9}), make_sbm3(300, 30, 2)), std::invalid_argument);
}

TEST(Sbm3Embed, EqualRatesRejected) {
  const Sbm3 spec = make_sbm3(30, 3, 3);
  EXPECT_THROW(validate(spec), std::invalid_argument);
}

TEST(NmcEstimate, FullNoiselessObservationReproducesSignal) {
  const auto signal = std::make_shared<const RectMatrix>(planted_lowrank(60, 3, 1.0, Seed{10}));
  const Nmc spec = make_nmc(signal, 1.0, 0.0, 3);
  const CompletionEstimate est = nmc_estimate(sample_nmc(spec, Seed{11}), 3);
  EXPECT_LE((est.reconstruction() - signal->dense()).cwiseAbs().maxCoeff(), 1e-8);
  const Eigen::VectorXd sv = oracle::gram_singular_values(signal->dense());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(est.values[i], sv[i], 1e-8 * sv[0]);
  EXPECT_NEAR(est.entry(4, 7), signal->dense()(4, 7), 1e-8);
  EXPECT_EQ(est.rank(), 3u);
}

TEST(NmcEstimate, ZeroColumnStillReturns) {
  Matrix m = planted_lowrank(20, 2, 1.0, Seed{12}).dense();
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      if (j != 5) entries.push_back({i, j, m(i, j)});
  const RectMatrix observed = RectMatrix::from_triplets(20, 20, entries);
  const CompletionEstimate est = nmc_estimate(observed, 2);
  Matrix dense = m;
  dense.col(5).setZero();
  const Eigen::VectorXd sv = oracle::gram_singular_values(dense);
  EXPECT_NEAR(est.values[0], sv[0], 1e-9);
  EXPECT_NEAR(est.values[1], sv[1], 1e-9);
  EXPECT_LE(est.right.basis.row(5).norm(), 1e-10);
  // the estimate of the missing column cannot exceed that column of M*
  const Matrix recon = est.reconstruction();
  EXPECT_LE((recon.col(5) - m.col(5)).norm(), m.col(5).norm() + 1e-9);
}

TEST(Linearize, PopulationInputReturnsBasis) {
  const Sbm2 spec = make_sbm2(40, 10, 2);
  const PopulationModel pop = population(spec);
  EXPECT_LE((linearize(*pop.a_star, pop) - pop.subspace.basis).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Linearize, Sbm2RowSumFormula) {
  const Sbm2 spec = make_sbm2(400, 12, 3);
  const PopulationModel pop = population(spec);
  const SymmetricMatrix a = sample_sbm2(spec, Seed{13});
  const Matrix lin = linearize(a, pop);
  const double n = 400, logn = std::log(n);
  const Matrix dense = a.to_dense();
  for (std::size_t i = 0; i < 400; ++i) {
    double diff = 0.0;
    for (std::size_t j = 0; j < 400; ++j) diff += spec.labels[j] * dense(i, j);
    // the population u2 is signed by J, so J plays the + side
    EXPECT_NEAR(lin(i, 0), 2.0 / ((spec.a - spec.b) * std::sqrt(n) * logn) * diff, 1e-12);
  }
}

TEST(Linearize, Z2EqualsSignalPlusScaledNoise) {
  const Z2Sync spec = make_z2(60, 1.7);
  const PopulationModel pop = population(spec);
  const SymmetricMatrix y = sample_z2(spec, Seed{14});
  Vector x(60);
  for (int i = 0; i < 60; ++i) x[i] = spec.x[i];
  const Matrix w = (y.to_dense() - x * x.transpose()) / spec.sigma;
  const Vector u = x / std::sqrt(60.0);
  const Vector expect = u + spec.sigma * w * u / 60.0;
  EXPECT_LE((linearize(y, pop).col(0) - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Linearize, LinearInMatrix) {
  const Sbm2 spec = make_sbm2(200, 15, 3);
  const PopulationModel pop = population(spec);
  const SymmetricMatrix a1 = sample_sbm2(spec, Seed{15}), a2 = sample_sbm2(spec, Seed{16});
  const CombinedOperator sum(a1, 1.0, a2, 1.0);
  const CombinedOperator combo(sum, 1.0, *pop.a_star, -1.0);
  const Matrix lhs = linearize(combo, pop);
  const Matrix rhs = linearize(a1, pop) + linearize(a2, pop) - pop.subspace.basis;
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Linearize, Errors) {
  PopulationModel pop = population(make_sbm2(10, 4, 1));
  EXPECT_THROW(linearize(SymmetricMatrix::from_dense(Matrix::Identity(4, 4)), pop), std::invalid_argument);
  pop.subspace.values[0] = 0.0;
  EXPECT_THROW(linearize(*pop.a_star, pop), std::invalid_argument);
}

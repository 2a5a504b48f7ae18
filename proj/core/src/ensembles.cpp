#include "entrywise/ensembles.hpp"

#include "entrywise/format.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace entrywise {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(Seed{seed, 0x9E3779B97F4A7C15ull});
  for (std::size_t i = n; i > 1; --i) {
    // Unbiased draw from [0, i) by rejection.
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do r = rng.next_u64();
    while (r >= limit);
    std::swap(perm[i - 1], perm[r % bound]);
  }
  return perm;
}

double scaled_probability(double c, std::size_t n) {
  return c * std::log(static_cast<double>(n)) / static_cast<double>(n);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_probability(const std::string& model, const std::string& name, double c, std::size_t n) {
  const double prob = scaled_probability(c, n);
  if (prob > 1.0)
    throw std::invalid_argument(model + ": " + name + " log n / n = " + format_double(prob) +
                                " exceeds 1 (parameter " + name + " = " + format_double(c) + ")");
}

// Emits every success of a Bernoulli(prob) sequence laid over consecutive
// segments, carrying the geometric skip across segment boundaries.
class SkipSampler {
 public:
  SkipSampler(Rng& rng, double prob) : rng_(rng), prob_(prob), log1m_(std::log1p(-prob)) { draw(); }

  template <class Emit>
  void segment(std::size_t length, Emit&& emit) {
    if (prob_ <= 0.0) return;
    std::size_t pos = 0;
    while (skip_ < length - pos) {
      pos += static_cast<std::size_t>(skip_);
      emit(pos);
      ++pos;
      draw();
      if (pos >= length) return;
    }
    skip_ -= length - pos;
  }

 private:
  void draw() { skip_ = prob_ >= 1.0 ? 0 : rng_.geometric(log1m_); }

  Rng& rng_;
  double prob_;
  double log1m_;
  std::uint64_t skip_ = 0;
};

SymmetricMatrix sample_blocks(std::size_t n, const std::vector<int>& labels, int blocks, double p, double q,
                              bool self_loops, Seed seed) {
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(blocks));
  for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

  Rng rng(seed);
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(static_cast<double>(n) * n * std::max(p, q) / 2.0 * 1.2) + 16);
  for (int g = 0; g < blocks; ++g) {
    const auto& rows = members[static_cast<std::size_t>(g)];
    for (int h = g; h < blocks; ++h) {
      const auto& cols = members[static_cast<std::size_t>(h)];
      SkipSampler sampler(rng, g == h ? p : q);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t first = g == h ? (self_loops ? k : k + 1) : 0;
        if (first >= cols.size()) continue;
        sampler.segment(cols.size() - first, [&](std::size_t offset) {
          std::size_t u = rows[k], v = cols[first + offset];
          if (u > v) std::swap(u, v);
          entries.push_back({u, v, 1.0});
        });
      }
    }
  }
  return SymmetricMatrix::from_upper_entries(n, std::move(entries));
}

}  // namespace

double Sbm2::p() const { return scaled_probability(a, n); }
double Sbm2::q() const { return scaled_probability(b, n); }
double Sbm3::p() const { return scaled_probability(a, n); }
double Sbm3::q() const { return scaled_probability(b, n); }

Z2Sync make_z2(std::size_t n, double sigma, std::uint64_t signal_seed) {
  Z2Sync spec;
  spec.n = n;
  spec.sigma = sigma;
  spec.x.resize(n);
  Rng rng(Seed{signal_seed, 0x3C6EF372FE94F82Bull});
  for (std::size_t i = 0; i < n; ++i) spec.x[i] = (rng.next_u64() >> 63) ? 1 : -1;
  return spec;
}

Sbm2 make_sbm2(std::size_t n, double a, double b, std::uint64_t membership_seed) {
  Sbm2 spec;
  spec.n = n;
  spec.a = a;
  spec.b = b;
  spec.labels.assign(n, -1);
  const auto perm = random_permutation(n, membership_seed);
  for (std::size_t i = 0; i < n / 2; ++i) spec.labels[perm[i]] = 1;
  return spec;
}

Sbm3 make_sbm3(std::size_t n, double a, double b, std::uint64_t membership_seed) {
  Sbm3 spec;
  spec.n = n;
  spec.a = a;
  spec.b = b;
  spec.z.assign(n, 3);
  const auto perm = random_permutation(n, membership_seed);
  for (std::size_t i = 0; i < n / 3; ++i) spec.z[perm[i]] = 1;
  for (std::size_t i = n / 3; i < 2 * (n / 3); ++i) spec.z[perm[i]] = 2;
  return spec;
}

Nmc make_nmc(std::shared_ptr<const RectMatrix> signal, double p, double sigma, std::size_t rank) {
  Nmc spec;
  spec.signal = std::move(signal);
  spec.p = p;
  spec.sigma = sigma;
  spec.rank = rank;
  return spec;
}

void validate(const EnsembleSpec& spec) {
  std::visit(
      Overloaded{
          [](const Z2Sync& s) {
            require(s.n >= 1, "z2: n must be positive");
            require(std::isfinite(s.sigma) && s.sigma >= 0.0, "z2: sigma must be finite and nonnegative");
            require(s.x.size() == s.n, "z2: signal x must have n entries");
            for (int v : s.x) require(v == 1 || v == -1, "z2: signal x must be +-1");
          },
          [](const Sbm2& s) {
            require(s.n >= 2 && s.n % 2 == 0, "sbm2: n must be even and at least 2");
            require(s.b > 0.0, "sbm2: b must be positive");
            require(s.a > s.b, "sbm2: a must exceed b");
            check_probability("sbm2", "a", s.a, s.n);
            check_probability("sbm2", "b", s.b, s.n);
            require(s.labels.size() == s.n, "sbm2: labels must have n entries");
            std::size_t in_j = 0;
            for (int v : s.labels) {
              require(v == 1 || v == -1, "sbm2: labels must be +-1");
              in_j += v == 1;
            }
            require(in_j == s.n / 2, "sbm2: J must hold exactly n/2 vertices");
          },
          [](const Sbm3& s) {
            require(s.n >= 3 && s.n % 3 == 0, "sbm3: n must be a positive multiple of 3");
            require(s.b > 0.0, "sbm3: b must be positive");
            require(s.a > s.b, "sbm3: a must exceed b");
            check_probability("sbm3", "a", s.a, s.n);
            check_probability("sbm3", "b", s.b, s.n);
            require(s.z.size() == s.n, "sbm3: labels must have n entries");
            std::size_t counts[3] = {0, 0, 0};
            for (int v : s.z) {
              require(v >= 1 && v <= 3, "sbm3: labels must lie in {1, 2, 3}");
              ++counts[v - 1];
            }
            for (std::size_t c : counts) require(c == s.n / 3, "sbm3: every block must hold n/3 vertices");
          },
          [](const Nmc& s) {
            require(static_cast<bool>(s.signal), "nmc: signal matrix is missing");
            require(s.signal->storage() == RectMatrix::Storage::kDense, "nmc: signal must be stored dense");
            require(s.p > 0.0 && s.p <= 1.0, "nmc: p must lie in (0, 1]");
            require(std::isfinite(s.sigma) && s.sigma >= 0.0, "nmc: sigma must be finite and nonnegative");
            require(s.rank >= 1 && s.rank <= std::min(s.signal->rows(), s.signal->cols()),
                    "nmc: rank must lie in [1, min(n1, n2)]");
          },
      },
      spec);
}

std::string describe(const EnsembleSpec& spec) {
  return std::visit(
      Overloaded{
          [](const Z2Sync& s) { return "z2(n=" + std::to_string(s.n) + ", sigma=" + format_double(s.sigma) + ")"; },
          [](const Sbm2& s) {
            return "sbm2(n=" + std::to_string(s.n) + ", a=" + format_double(s.a) + ", b=" + format_double(s.b) + ")";
          },
          [](const Sbm3& s) {
            return "sbm3(n=" + std::to_string(s.n) + ", a=" + format_double(s.a) + ", b=" + format_double(s.b) + ")";
          },
          [](const Nmc& s) {
            return "nmc(n1=" + std::to_string(s.signal ? s.signal->rows() : 0) +
                   ", n2=" + std::to_string(s.signal ? s.signal->cols() : 0) + ", p=" + format_double(s.p) +
                   ", sigma=" + format_double(s.sigma) + ", r=" + std::to_string(s.rank) + ")";
          },
      },
      spec);
}

SymmetricMatrix sample_z2(const Z2Sync& spec, Seed seed) {
  validate(spec);
  const std::size_t n = spec.n;
  std::vector<double> packed(n * (n + 1) / 2);
  Rng rng(seed);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) packed[k++] = spec.x[i] * spec.x[j] + spec.sigma * rng.normal();
    packed[k++] = 1.0;
  }
  return SymmetricMatrix::from_packed_lower(n, std::move(packed));
}

SymmetricMatrix sample_sbm2(const Sbm2& spec, Seed seed) {
  validate(spec);
  std::vector<int> blocks(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) blocks[i] = spec.labels[i] == 1 ? 0 : 1;
  return sample_blocks(spec.n, blocks, 2, spec.p(), spec.q(), spec.self_loops, seed);
}

SymmetricMatrix sample_sbm3(const Sbm3& spec, Seed seed) {
  validate(spec);
  std::vector<int> blocks(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) blocks[i] = spec.z[i] - 1;
  return sample_blocks(spec.n, blocks, 3, spec.p(), spec.q(), spec.self_loops, seed);
}

RectMatrix sample_nmc(const Nmc& spec, Seed seed) {
  validate(spec);
  const RectMatrix& signal = *spec.signal;
  const std::size_t n1 = signal.rows(), n2 = signal.cols();
  Rng rng(seed);
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(static_cast<double>(n1) * n2 * spec.p * 1.1) + 16);
  SkipSampler sampler(rng, spec.p);
  const Matrix& m = signal.dense();
  for (std::size_t i = 0; i < n1; ++i) {
    sampler.segment(n2, [&](std::size_t j) { entries.push_back({i, j, m(i, j)}); });
  }
  // Noise is drawn after the mask so the mask alone is reproducible across sigma.
  for (Entry& e : entries) e.value = (e.value + spec.sigma * rng.normal()) / spec.p;
  return RectMatrix::from_triplets(n1, n2, std::move(entries));
}

Sample sample(const EnsembleSpec& spec, Seed seed) {
  return std::visit(Overloaded{
                        [&](const Z2Sync& s) { return Sample{sample_z2(s, seed), GroundTruth{s.x, nullptr}}; },
                        [&](const Sbm2& s) { return Sample{sample_sbm2(s, seed), GroundTruth{s.labels, nullptr}}; },
                        [&](const Sbm3& s) { return Sample{sample_sbm3(s, seed), GroundTruth{s.z, nullptr}}; },
                        [&](const Nmc& s) { return Sample{sample_nmc(s, seed), GroundTruth{{}, s.signal}}; },
                    },
                    spec);
}

double planted_scale(std::size_t n) { return std::sqrt(20.0 / std::sqrt(static_cast<double>(n))); }

RectMatrix planted_lowrank(std::size_t n, std::size_t r, double scale, Seed seed) {
  if (r == 0 || r > n) throw std::invalid_argument("planted_lowrank: r must lie in [1, n]");
  Rng rng(seed);
  Matrix left(n, r), right(n, r);
  for (Eigen::Index j = 0; j < left.cols(); ++j)
    for (Eigen::Index i = 0; i < left.rows(); ++i) left(i, j) = scale * rng.normal();
  for (Eigen::Index j = 0; j < right.cols(); ++j)
    for (Eigen::Index i = 0; i < right.rows(); ++i) right(i, j) = scale * rng.normal();
  return RectMatrix::from_dense(left * right.transpose());
}

void write_instance(std::ostream& out, const EnsembleSpec& spec, const Sample& s) {
  const char* name = std::visit(Overloaded{
                                    [](const Z2Sync&) { return "z2"; },
                                    [](const Sbm2&) { return "sbm2"; },
                                    [](const Sbm3&) { return "sbm3"; },
                                    [](const Nmc&) { return "nmc"; },
                                },
                                spec);
  if (std::holds_alternative<RectMatrix>(s.matrix)) {
    const RectMatrix& m = s.rect();
    out << "# n=" << m.rows() << " cols=" << m.cols() << " variant=" << name << '\n';
    if (m.storage() == RectMatrix::Storage::kTriplet) {
      for (const Entry& e : m.triplets()) out << e.row << ' ' << e.col << ' ' << format_double(e.value) << '\n';
    } else {
      for (Eigen::Index i = 0; i < m.dense().rows(); ++i)
        for (Eigen::Index j = 0; j < m.dense().cols(); ++j)
          if (m.dense()(i, j) != 0.0) out << i << ' ' << j << ' ' << format_double(m.dense()(i, j)) << '\n';
    }
    return;
  }
  const SymmetricMatrix& a = s.symmetric();
  out << "# n=" << a.dim() << " variant=" << name << '\n';
  for (const Entry& e : a.upper_entries()) out << e.row << ' ' << e.col << ' ' << format_double(e.value) << '\n';
}

}  // namespace entrywise

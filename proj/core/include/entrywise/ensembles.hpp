#pragma once

#include "entrywise/eigensolver.hpp"
#include "entrywise/matrix.hpp"
#include "entrywise/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace entrywise {

// Fixed seed for the planted labels when none is given, so a spec built from
// (n, a, b) alone always carries the same membership.
inline constexpr std::uint64_t kDefaultMembershipSeed = 0xA4093822299F31D0ull;

// Y = x x^T + sigma W, W symmetric standard Gaussian with zero diagonal.
struct Z2Sync {
  std::size_t n = 0;
  double sigma = 0.0;
  std::vector<int> x;  // +-1
};

// Two equal blocks; P(A_ij = 1) = a log n / n inside a block, b log n / n across.
struct Sbm2 {
  std::size_t n = 0;
  double a = 0.0;
  double b = 0.0;
  std::vector<int> labels;  // +1 on J, -1 on its complement
  bool self_loops = true;

  double p() const;
  double q() const;
};

// Three equal blocks with labels in {1, 2, 3}.
struct Sbm3 {
  std::size_t n = 0;
  double a = 0.0;
  double b = 0.0;
  std::vector<int> z;
  bool self_loops = true;

  double p() const;
  double q() const;
};

// M_ij = (M*_ij + eps_ij) I_ij / p with I_ij ~ Bernoulli(p), eps ~ N(0, sigma^2).
struct Nmc {
  std::shared_ptr<const RectMatrix> signal;
  double p = 1.0;
  double sigma = 0.0;
  std::size_t rank = 1;
};

using EnsembleSpec = std::variant<Z2Sync, Sbm2, Sbm3, Nmc>;

Z2Sync make_z2(std::size_t n, double sigma, std::uint64_t signal_seed = kDefaultMembershipSeed);
// J is {first n/2 indices} relabelled by a random permutation drawn from
// `membership_seed`.
Sbm2 make_sbm2(std::size_t n, double a, double b, std::uint64_t membership_seed = kDefaultMembershipSeed);
Sbm3 make_sbm3(std::size_t n, double a, double b, std::uint64_t membership_seed = kDefaultMembershipSeed);
Nmc make_nmc(std::shared_ptr<const RectMatrix> signal, double p, double sigma, std::size_t rank);

// Throws std::invalid_argument naming the offending parameter.
void validate(const EnsembleSpec& spec);
std::string describe(const EnsembleSpec& spec);

struct GroundTruth {
  std::vector<int> labels;                   // x, +-1 membership of J, or z
  std::shared_ptr<const RectMatrix> signal;  // M* for matrix completion
};

struct Sample {
  std::variant<SymmetricMatrix, RectMatrix> matrix;
  GroundTruth truth;

  const SymmetricMatrix& symmetric() const { return std::get<SymmetricMatrix>(matrix); }
  const RectMatrix& rect() const { return std::get<RectMatrix>(matrix); }
};

SymmetricMatrix sample_z2(const Z2Sync& spec, Seed seed);
SymmetricMatrix sample_sbm2(const Sbm2& spec, Seed seed);
SymmetricMatrix sample_sbm3(const Sbm3& spec, Seed seed);
RectMatrix sample_nmc(const Nmc& spec, Seed seed);
Sample sample(const EnsembleSpec& spec, Seed seed);

// M_L M_R^T with M_L, M_R (n x r) holding independent N(0, scale^2) entries.
RectMatrix planted_lowrank(std::size_t n, std::size_t r, double scale, Seed seed);
// Standard deviation for entries of variance 20 / sqrt(n).
double planted_scale(std::size_t n);

struct PopulationModel {
  std::shared_ptr<const SymmetricOperator> a_star;
  // Full spectrum of A*, descending.
  Vector spectrum;
  // U*, Lambda* for the window the estimator uses.
  SpectralSubspace subspace;
  double gap = 0.0;
  double kappa = 0.0;
  double a_star_two_to_inf = 0.0;
  // Matrix completion: SVD of M*.
  Matrix u_star;
  Matrix v_star;
  Vector sigma_star;

  std::size_t n() const { return subspace.dim(); }
};

PopulationModel population(const EnsembleSpec& spec, const EigenOptions& options = {});

// Smallest separation of the window lambda_{s+1..s+r} from the rest of the
// spectrum and from zero, with lambda_0 = +inf and lambda_{n+1} = -inf.
double eigen_gap(const Vector& spectrum_desc, std::size_t s, std::size_t r);

enum class PhiKind { kLinear, kLogInverse };

struct Phi {
  PhiKind kind = PhiKind::kLinear;
  double scale = 1.0;

  // kLinear: scale * x.  kLogInverse: scale / max(1, log(1/x)), with phi(0) = 0.
  double operator()(double x) const;
};

struct AssumptionAudit {
  double gamma = 0.0;
  Phi phi;
  // Spectral concentration constant c1 used in gamma (SBM only).
  double spectral_constant = 0.0;
  double incoherence_lhs = 0.0;  // ||A*||_{2->inf}
  double incoherence_rhs = 0.0;  // gamma * gap
  bool incoherence_ok = false;
  double scaling_value = 0.0;  // 32 kappa max(gamma, phi(gamma))
  bool scaling_ok = false;
};

// Z2 and two-block SBM only. For the SBM, `spectral_constant` defaults to
// 2 sqrt((a + b) / 2), the bulk edge of A - A* on the log n scale.
AssumptionAudit audit(const EnsembleSpec& spec, std::optional<double> spectral_constant = std::nullopt);

// Text dump: a header line "# n=<n> variant=<name>" (matrix completion adds
// cols=<n2>), then one "i j value" line per upper-triangle entry or observed
// triplet, zero-based.
void write_instance(std::ostream& out, const EnsembleSpec& spec, const Sample& sample);

}  // namespace entrywise

#pragma once

#include "entrywise/eigensolver.hpp"
#include "entrywise/ensembles.hpp"
#include "entrywise/estimators.hpp"
#include "entrywise/matrix.hpp"
#include "entrywise/random.hpp"

#include <span>
#include <string>
#include <vector>

namespace entrywise {

// Entrywise errors of an empirical eigenspace against the population one and
// against the first-order approximation A U* (Lambda*)^{-1}.
struct PerturbationReport {
  // sqrt(n) scaled; rank one uses min over s in {+-1}, higher rank uses sgn(H)
  // and the 2->inf norm.
  double err_raw = 0.0;                     // u vs u*
  double err_linearization_vs_truth = 0.0;  // A u*/lambda* vs u*
  double err_residual = 0.0;                // u vs A u*/lambda*
  double subspace_err_truth = 0.0;          // ||U sgn(H) - U*||_{2->inf}
  double subspace_err_linearization = 0.0;  // ||U sgn(H) - A U* (Lambda*)^{-1}||_{2->inf}
  double u_two_to_inf = 0.0;                // ||U||_{2->inf}
  // sqrt(n) min_i s sgn(u*_i) u_i for rank one, NaN otherwise.
  double margin = 0.0;
  // Sign shared by the decomposition u - s u* = s (A u*/lambda* - u*) + (u - s A u*/lambda*).
  int sign = 1;
  Matrix alignment;  // sgn(U^T U*)
};

PerturbationReport perturbation_report(const SpectralSubspace& subspace, const PopulationModel& pop,
                                       const SymmetricOperator& a);

// min over global sign of the fraction of disagreeing +-1 labels.
double misclassification(std::span<const int> estimate, std::span<const int> truth);

struct NmcReport {
  double max_err = 0.0;       // ||U S V^T - M*||_max
  double frob_err = 0.0;      // ||U S V^T - M*||_F
  double vec_max_err = 0.0;   // max of ||U sgn(H) - U*||_{2->inf}, same for V
  double vec_frob_err = 0.0;  // max of the Frobenius versions
  double eta = 0.0;           // ||U*||_{2->inf} v ||V*||_{2->inf}
  double r_mat = 0.0;
  double r_vec = 0.0;
  // A ratio denominator fell below 1e-14, or an error norm is below 1e-10 of
  // its scale (||M*||_F, sqrt(r)); the ratios are then NaN.
  bool degenerate = false;
  Matrix alignment;  // sgn(H), H = (U^T U* + V^T V*) / 2
};

// `pop` must come from the matrix-completion ensemble holding `signal`.
NmcReport nmc_report(const CompletionEstimate& est, const RectMatrix& signal, const PopulationModel& pop);

struct LeaveOneOutProbe {
  double dist_u = 0.0;         // ||U sgn(U^T U^(m)) - U^(m)||_F
  double subspace_dist = 0.0;  // ||U U^T - U^(m) U^(m)T||_2
  double u_inf = 0.0;          // ||U||_{2->inf}
};

// Zeroes row and column m, re-solves densely (n <= 512) for the population window.
LeaveOneOutProbe leave_one_out_probe(const SymmetricMatrix& a, const PopulationModel& pop, std::size_t m);

struct TailAudit {
  std::string name;
  std::string parameters;
  double bound = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

// empirical <= bound * (1 + 3 * relative standard error) + 3 * standard error.
bool within_slack(double empirical, double std_error, double bound);

// P(sum W - sum Z <= eps log n) with n/2 draws each of Bernoulli(a log n / n)
// and Bernoulli(b log n / n), against n^{-(sqrt a - sqrt b)^2 / 2 + eps log(a/b) / 2}.
TailAudit tail_audit_binom_diff(double a, double b, double epsilon, std::size_t n, std::size_t samples,
                                Seed seed = Seed{0x452821E638D01377ull});

// P(|sum w_i (X_i - p)| >= (2 + alpha) p n / (1 v log(sqrt(n) ||w||_inf / ||w||_2)) ||w||_inf)
// with X_i ~ Bernoulli(p), n = w.size(), against 2 exp(-alpha n p).
TailAudit tail_audit_row_concentration(const Vector& w, double p, double alpha, std::size_t samples,
                                       Seed seed = Seed{0xBE5466CF34E90C6Cull});

// Fraction of vertices with degree >= (1 + eps) mu, mu the expected degree,
// against exp(-eps^2 mu / (2 + eps)).
TailAudit degree_chernoff_audit(const SymmetricMatrix& a, const Sbm2& spec, double epsilon = 1.0);

struct ConcentrationAudit {
  double c1 = 0.0;
  std::vector<double> ratios;  // ||A - A*||_2 / sqrt(log n) per trial
  double max_ratio = 0.0;
  double violation_rate = 0.0;  // fraction of ratios above c1
  bool flagged = false;         // violation_rate > 0.05
};

ConcentrationAudit spectral_concentration_audit(const Sbm2& spec, std::size_t trials, double c1,
                                                std::uint64_t master_seed);

// Shipped tail-audit configurations: "binom-diff-default" (a=6, b=2, eps=0,
// n=2000, 1e5 samples), "row-concentration-default" (w = ones, n=1000,
// p = log n / n, alpha=1) and "row-concentration-spiky" (w = e_1, same p).
std::vector<std::string> tail_audit_presets();
TailAudit run_tail_audit_preset(const std::string& name, std::uint64_t seed);

}  // namespace entrywise

#include "entrywise/diagnostics.hpp"

#include "entrywise/alignment.hpp"
#include "entrywise/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entrywise {

namespace {

double sup_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// argmin over s in {+1, -1} of ||x - s y||_inf, ties to +1.
int best_sign(const Vector& x, const Vector& y) {
  return sup_norm(x - y) <= sup_norm(x + y) ? 1 : -1;
}

double min_sign_distance(const Vector& x, const Vector& y) { return std::min(sup_norm(x - y), sup_norm(x + y)); }

}  // namespace

PerturbationReport perturbation_report(const SpectralSubspace& subspace, const PopulationModel& pop,
                                       const SymmetricOperator& a) {
  const Matrix& u = subspace.basis;
  const Matrix& u_star = pop.subspace.basis;
  if (u.rows() != u_star.rows() || u.cols() != u_star.cols() || static_cast<std::size_t>(u.rows()) != a.dim())
    throw std::invalid_argument("perturbation_report: subspace, population and matrix shapes differ");
  const Matrix lin = linearize(a, pop);
  const double root_n = std::sqrt(static_cast<double>(u.rows()));

  PerturbationReport out;
  out.u_two_to_inf = two_to_inf(u);

  if (u.cols() == 1) {
    const Vector u0 = u.col(0), s0 = u_star.col(0), l0 = lin.col(0);
    out.err_raw = root_n * min_sign_distance(u0, s0);
    out.err_linearization_vs_truth = root_n * min_sign_distance(l0, s0);
    out.err_residual = root_n * min_sign_distance(u0, l0);
    out.sign = best_sign(u0, l0);

    const double h = u0.dot(s0);
    const double align = h >= 0.0 ? 1.0 : -1.0;
    out.alignment = Matrix::Constant(1, 1, align);
    out.subspace_err_truth = sup_norm(align * u0 - s0);
    out.subspace_err_linearization = sup_norm(align * u0 - l0);

    const double s = best_sign(u0, s0);
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < u0.size(); ++i) worst = std::min(worst, s * (s0[i] >= 0.0 ? 1.0 : -1.0) * u0[i]);
    out.margin = root_n * worst;
    return out;
  }

  out.alignment = matrix_sign(u.transpose() * u_star);
  const Matrix aligned = u * out.alignment;
  out.subspace_err_truth = two_to_inf(aligned - u_star);
  out.subspace_err_linearization = two_to_inf(aligned - lin);
  out.err_raw = root_n * out.subspace_err_truth;
  out.err_linearization_vs_truth = root_n * two_to_inf(lin - u_star);
  out.err_residual = root_n * out.subspace_err_linearization;
  out.margin = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double misclassification(std::span<const int> estimate, std::span<const int> truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("misclassification: label vectors differ in length");
  if (estimate.empty()) throw std::invalid_argument("misclassification: empty label vectors");
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    if ((estimate[i] != 1 && estimate[i] != -1) || (truth[i] != 1 && truth[i] != -1))
      throw std::invalid_argument("misclassification: labels must be +1 or -1");
    disagree += estimate[i] != truth[i];
  }
  const std::size_t best = std::min(disagree, estimate.size() - disagree);
  return static_cast<double>(best) / static_cast<double>(estimate.size());
}

NmcReport nmc_report(const CompletionEstimate& est, const RectMatrix& signal, const PopulationModel& pop) {
  const Matrix& u = est.left.basis;
  const Matrix& v = est.right.basis;
  const Matrix& u_star = pop.u_star;
  const Matrix& v_star = pop.v_star;
  const Eigen::Index n1 = static_cast<Eigen::Index>(signal.rows());
  const Eigen::Index n2 = static_cast<Eigen::Index>(signal.cols());
  if (u.rows() != n1 || v.rows() != n2 || u_star.rows() != n1 || v_star.rows() != n2 || u.cols() != u_star.cols() ||
      v.cols() != v_star.cols() || u.cols() != v.cols())
    throw std::invalid_argument("nmc_report: estimate, signal and population shapes differ");

  NmcReport out;
  // U S V^T - M* in row blocks so the full difference is never stored.
  const Matrix us = u * est.values.asDiagonal();
  const Matrix m_dense = signal.storage() == RectMatrix::Storage::kDense ? Matrix() : signal.to_dense();
  const Matrix& m = signal.storage() == RectMatrix::Storage::kDense ? signal.dense() : m_dense;
  constexpr Eigen::Index kBlock = 256;
  double frob_sq = 0.0;
  for (Eigen::Index start = 0; start < n1; start += kBlock) {
    const Eigen::Index rows = std::min(kBlock, n1 - start);
    const Matrix diff = us.middleRows(start, rows) * v.transpose() - m.middleRows(start, rows);
    out.max_err = std::max(out.max_err, diff.cwiseAbs().maxCoeff());
    frob_sq += diff.squaredNorm();
  }
  out.frob_err = std::sqrt(frob_sq);
  const double signal_frob = m.norm();

  out.alignment = matrix_sign(0.5 * (u.transpose() * u_star + v.transpose() * v_star));
  const Matrix du = u * out.alignment - u_star;
  const Matrix dv = v * out.alignment - v_star;
  out.vec_max_err = std::max(two_to_inf(du), two_to_inf(dv));
  out.vec_frob_err = std::max(du.norm(), dv.norm());
  out.eta = std::max(two_to_inf(u_star), two_to_inf(v_star));

  const double log_n = std::log(static_cast<double>(std::max(n1, n2)));
  const double mat_den = out.eta * out.eta * std::sqrt(log_n) * out.frob_err;
  const double vec_den = out.eta * std::sqrt(log_n) * out.vec_frob_err;
  constexpr double kFloor = 1e-14;
  // Errors at rounding level make the ratios meaningless even above the floor.
  constexpr double kRelative = 1e-10;
  out.degenerate = !(mat_den >= kFloor) || !(vec_den >= kFloor) || out.frob_err <= kRelative * signal_frob ||
                   out.vec_frob_err <= kRelative * std::sqrt(static_cast<double>(u.cols()));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.r_mat = out.degenerate ? nan : out.max_err / mat_den;
  out.r_vec = out.degenerate ? nan : out.vec_max_err / vec_den;
  return out;
}

LeaveOneOutProbe leave_one_out_probe(const SymmetricMatrix& a, const PopulationModel& pop, std::size_t m) {
  const std::size_t n = a.dim();
  if (n > 512) throw std::invalid_argument("leave_one_out_probe: dense probe limited to n <= 512");
  if (m >= n) throw std::invalid_argument("leave_one_out_probe: index m outside [0, n)");
  if (pop.n() != n) throw std::invalid_argument("leave_one_out_probe: population and matrix sizes differ");

  EigenOptions dense;
  dense.method = EigenMethod::kDense;
  const std::size_t s = pop.subspace.window_start, r = pop.subspace.rank();
  const Matrix u = top_eigenpairs(a, r, s, dense).basis;
  const Matrix um = top_eigenpairs(a.without_index(m), r, s, dense).basis;

  LeaveOneOutProbe out;
  out.u_inf = two_to_inf(u);
  const Matrix h = u.transpose() * um;
  if (r == 1) {
    out.dist_u = std::min((u - um).norm(), (u + um).norm());
  } else {
    out.dist_u = (u * matrix_sign(h) - um).norm();
  }
  const double smin = Eigen::JacobiSVD<Matrix>(h).singularValues().minCoeff();
  out.subspace_dist = std::sqrt(std::max(0.0, 1.0 - smin * smin));
  return out;
}

TailAudit degree_chernoff_audit(const SymmetricMatrix& a, const Sbm2& spec, double epsilon) {
  validate(spec);
  if (a.dim() != spec.n) throw std::invalid_argument("degree_chernoff_audit: matrix and spec sizes differ");
  if (!(epsilon > 0.0)) throw std::invalid_argument("degree_chernoff_audit: epsilon must be positive");
  const double n = static_cast<double>(spec.n);
  const double mu = (spec.p() + spec.q()) * n / 2.0 - (spec.self_loops ? 0.0 : spec.p());
  const Vector degrees = a * Vector(Vector::Ones(static_cast<Eigen::Index>(spec.n)));
  std::size_t hits = 0;
  for (Eigen::Index i = 0; i < degrees.size(); ++i) hits += degrees[i] >= (1.0 + epsilon) * mu;

  TailAudit out;
  out.name = "degree-chernoff";
  out.parameters = describe(spec) + " eps=" + std::to_string(epsilon);
  out.samples = spec.n;
  out.empirical = static_cast<double>(hits) / n;
  out.std_error = std::sqrt(out.empirical * (1.0 - out.empirical) / n);
  out.bound = std::exp(-epsilon * epsilon * mu / (2.0 + epsilon));
  out.pass = within_slack(out.empirical, out.std_error, out.bound);
  return out;
}

ConcentrationAudit spectral_concentration_audit(const Sbm2& spec, std::size_t trials, double c1,
                                                std::uint64_t master_seed) {
  validate(spec);
  if (trials == 0) throw std::invalid_argument("spectral_concentration_audit: trials must be positive");
  const PopulationModel pop = population(spec);
  const double root_log_n = std::sqrt(std::log(static_cast<double>(spec.n)));

  ConcentrationAudit out;
  out.c1 = c1;
  out.ratios.reserve(trials);
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const SymmetricMatrix a = sample_sbm2(spec, trial_seed(master_seed, 0, t, 0));
    const CombinedOperator e(a, 1.0, *pop.a_star, -1.0);
    const double ratio = symmetric_spectral_norm(e) / root_log_n;
    out.ratios.push_back(ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    violations += ratio > c1;
  }
  out.violation_rate = static_cast<double>(violations) / static_cast<double>(trials);
  out.flagged = out.violation_rate > 0.05;
  return out;
}

}  // namespace entrywise

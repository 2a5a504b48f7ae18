#include "entrywise/estimators.hpp"

#include "entrywise/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entrywise {

namespace {

std::vector<int> signs(const Vector& u) {
  std::vector<int> out(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = u[i] >= 0.0 ? 1 : -1;
  return out;
}

std::optional<double> sign_margin(const Vector& u, const std::vector<int>& labels, std::span<const int> truth) {
  if (truth.empty()) return std::nullopt;
  if (truth.size() != labels.size()) throw std::invalid_argument("truth has the wrong length");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) agree += labels[i] == truth[i];
  const std::size_t disagree = labels.size() - agree;
  double best = -std::numeric_limits<double>::infinity();
  for (int s : {1, -1}) {
    const std::size_t mismatches = s == 1 ? disagree : agree;
    if (mismatches > std::min(agree, disagree)) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < labels.size(); ++i) worst = std::min(worst, s * truth[i] * u[i]);
    best = std::max(best, worst);
  }
  return std::sqrt(static_cast<double>(u.size())) * best;
}

}  // namespace

LabelEstimate z2_estimate(const SymmetricOperator& y, std::span<const int> truth, const EigenOptions& options) {
  const std::size_t k = std::min<std::size_t>(2, y.dim());
  const SpectralSubspace eig = top_eigenpairs(y, k, 0, options);
  LabelEstimate out;
  out.source_eigen_index = 0;
  out.vector = eig.basis.col(0);
  out.eigenvalues = eig.values;
  out.labels = signs(out.vector);
  out.margin = sign_margin(out.vector, out.labels, truth);
  if (k > 1) out.ambiguous = eig.values[0] - eig.values[1] < 1e-8 * std::abs(eig.values[0]);
  return out;
}

LabelEstimate sbm_estimate(const SymmetricOperator& a, std::span<const int> truth, SbmOptions sbm,
                           const EigenOptions& options) {
  const std::size_t n = a.dim();
  LabelEstimate out;
  if (sbm.centered) {
    // Average degree d = sum_ij A_ij / n, then A - d e e^T with e = 1/sqrt(n).
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(n));
    const double d = (a * ones).sum() / static_cast<double>(n);
    const LowRankSymmetric mean(ones / std::sqrt(static_cast<double>(n)), Vector::Constant(1, d));
    const CombinedOperator centered(a, 1.0, mean, -1.0);
    const std::size_t k = std::min<std::size_t>(2, n);
    const SpectralSubspace eig = top_eigenpairs(centered, k, 0, options);
    out.source_eigen_index = 0;
    out.vector = eig.basis.col(0);
    out.eigenvalues = eig.values;
    if (k > 1) out.ambiguous = eig.values[0] - eig.values[1] < 1e-8 * std::abs(eig.values[0]);
  } else {
    if (n < 2) throw std::invalid_argument("sbm_estimate: need at least two vertices");
    const std::size_t k = std::min<std::size_t>(3, n);
    const SpectralSubspace eig = top_eigenpairs(a, k, 0, options);
    out.source_eigen_index = 1;
    out.vector = eig.basis.col(1);
    out.eigenvalues = eig.values;
    if (k > 2) out.ambiguous = eig.values[1] - eig.values[2] < 1e-8 * std::abs(eig.values[0]);
  }
  out.labels = signs(out.vector);
  out.margin = sign_margin(out.vector, out.labels, truth);
  return out;
}

Sbm3Embedding sbm3_embed(const SymmetricOperator& a, const Sbm3& spec, const EigenOptions& options) {
  validate(spec);
  if (a.dim() != spec.n) throw std::invalid_argument("sbm3_embed: matrix and spec sizes differ");
  const PopulationModel pop = population(spec);
  const SpectralSubspace eig = top_eigenpairs(a, 2, 1, options);

  Sbm3Embedding out;
  out.embedding = eig.basis;
  out.eigenvalues = eig.values;
  const Matrix& u_star = pop.subspace.basis;
  out.alignment = matrix_sign(eig.basis.transpose() * u_star).transpose();

  // Block centers are the rows of U* for each label, rotated into U's frame.
  Matrix centers(3, 2);
  for (std::size_t i = 0; i < spec.n; ++i) centers.row(spec.z[i] - 1) = u_star.row(static_cast<Eigen::Index>(i));
  const Matrix rotated = centers * out.alignment;

  out.separation.resize(static_cast<Eigen::Index>(spec.n));
  for (std::size_t i = 0; i < spec.n; ++i) {
    const int own = spec.z[i] - 1;
    double nearest_other = std::numeric_limits<double>::infinity();
    double to_own = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double d = (eig.basis.row(static_cast<Eigen::Index>(i)) - rotated.row(j)).norm();
      if (j == own)
        to_own = d;
      else
        nearest_other = std::min(nearest_other, d);
    }
    out.separation[i] = nearest_other - to_own;
  }
  return out;
}

Matrix CompletionEstimate::reconstruction() const {
  return left.basis * values.asDiagonal() * right.basis.transpose();
}

double CompletionEstimate::entry(std::size_t i, std::size_t j) const {
  return left.basis.row(static_cast<Eigen::Index>(i)).cwiseProduct(values.transpose()).dot(
      right.basis.row(static_cast<Eigen::Index>(j)));
}

CompletionEstimate nmc_estimate(std::shared_ptr<const RectMatrix> m, std::size_t r, const EigenOptions& options) {
  SvdResult svd = truncated_svd(std::move(m), r, options);
  CompletionEstimate out;
  out.left = std::move(svd.left);
  out.right = std::move(svd.right);
  out.values = std::move(svd.values);
  out.rank_deficient = svd.rank_deficient;
  return out;
}

CompletionEstimate nmc_estimate(const RectMatrix& m, std::size_t r, const EigenOptions& options) {
  return nmc_estimate(std::shared_ptr<const RectMatrix>(std::shared_ptr<const RectMatrix>(), &m), r, options);
}

Matrix linearize(const SymmetricOperator& a, const PopulationModel& pop) {
  const Matrix& u_star = pop.subspace.basis;
  if (static_cast<std::size_t>(u_star.rows()) != a.dim())
    throw std::invalid_argument("linearize: population and matrix sizes differ");
  for (Eigen::Index j = 0; j < pop.subspace.values.size(); ++j)
    if (pop.subspace.values[j] == 0.0) throw std::invalid_argument("linearize: population eigenvalue is zero");
  Matrix out = a * u_star;
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) /= pop.subspace.values[j];
  return out;
}

}  // namespace entrywise

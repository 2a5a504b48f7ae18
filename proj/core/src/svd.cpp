#include "entrywise/svd.hpp"

#include <cmath>
#include <stdexcept>

namespace entrywise {

SvdResult truncated_svd(std::shared_ptr<const RectMatrix> m, std::size_t r, const EigenOptions& options) {
  const std::size_t n1 = m->rows();
  const std::size_t n2 = m->cols();
  if (r == 0 || r > std::min(n1, n2)) throw std::invalid_argument("truncated_svd: r must lie in [1, min(n1, n2)]");

  const Dilation dilation(m);
  const SpectralSubspace eig = top_eigenpairs(dilation, r, 0, options);

  SvdResult out;
  out.values = eig.values;
  out.left.values = eig.values;
  out.right.values = eig.values;
  out.left.basis = eig.basis.topRows(static_cast<Eigen::Index>(n1));
  out.right.basis = eig.basis.bottomRows(static_cast<Eigen::Index>(n2));
  for (std::size_t j = 0; j < r; ++j) {
    // Each half carries norm 1/sqrt(2) when sigma_j > 0; rescale to unit length.
    for (Matrix* half : {&out.left.basis, &out.right.basis}) {
      const double norm = half->col(j).norm();
      if (norm > 0.0) half->col(j) /= norm;
    }
  }

  out.left.residuals.resize(static_cast<Eigen::Index>(r));
  out.right.residuals.resize(static_cast<Eigen::Index>(r));
  Vector mv(n1), mtu(n2);
  for (std::size_t j = 0; j < r; ++j) {
    const double s = out.values[j];
    m->apply(out.right.basis.col(j).data(), mv.data());
    m->apply_transpose(out.left.basis.col(j).data(), mtu.data());
    out.left.residuals[j] = (mv - s * out.left.basis.col(j)).norm();
    out.right.residuals[j] = (mtu - s * out.right.basis.col(j)).norm();
  }
  out.left.norm_estimate = out.right.norm_estimate = eig.norm_estimate;
  out.left.has_ties = out.right.has_ties = eig.has_ties;
  out.left.matvecs = out.right.matvecs = eig.matvecs;

  const double top = out.values[0];
  out.rank_deficient = !(out.values[r - 1] >= options.tol * top) || top <= 0.0;
  return out;
}

SvdResult truncated_svd(const RectMatrix& m, std::size_t r, const EigenOptions& options) {
  return truncated_svd(std::shared_ptr<const RectMatrix>(std::shared_ptr<const RectMatrix>(), &m), r, options);
}

}  // namespace entrywise

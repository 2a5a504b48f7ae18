#include "entrywise/ensembles.hpp"

#include "entrywise/svd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace entrywise {

namespace {

// Builds the model for A* = B diag(d) B^T + shift I with orthonormal B.
PopulationModel low_rank_model(Matrix basis, Vector values, double shift, std::size_t s, std::size_t r) {
  const std::size_t n = static_cast<std::size_t>(basis.rows());
  const std::size_t q = static_cast<std::size_t>(basis.cols());

  PopulationModel pop;
  std::vector<double> spectrum(n, shift);
  for (std::size_t i = 0; i < q; ++i) spectrum[i] = values[i] + shift;
  std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
  pop.spectrum = Eigen::Map<Vector>(spectrum.data(), static_cast<Eigen::Index>(n));

  // Window columns: eigenvalues of the low-rank part sorted descending.
  std::vector<std::size_t> order(q);
  for (std::size_t i = 0; i < q; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  pop.subspace.window_start = s;
  pop.subspace.values.resize(static_cast<Eigen::Index>(r));
  pop.subspace.basis.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) {
    pop.subspace.values[i] = values[order[s + i]] + shift;
    pop.subspace.basis.col(i) = basis.col(order[s + i]);
  }
  pop.subspace.residuals = Vector::Zero(static_cast<Eigen::Index>(r));
  pop.subspace.norm_estimate = pop.spectrum.cwiseAbs().maxCoeff();

  // Row i of A* is B D b_i + shift e_i.
  const Matrix scaled = basis * values.asDiagonal();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double quad = scaled.row(i).squaredNorm();
    const double diag = scaled.row(i).dot(basis.row(i));
    worst = std::max(worst, quad + 2.0 * shift * diag + shift * shift);
  }
  pop.a_star_two_to_inf = std::sqrt(std::max(worst, 0.0));

  pop.gap = eigen_gap(pop.spectrum, s, r);
  pop.kappa = pop.subspace.values.cwiseAbs().maxCoeff() / pop.gap;
  pop.a_star = std::make_shared<LowRankSymmetric>(std::move(basis), std::move(values), shift);
  return pop;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double eigen_gap(const Vector& spectrum, std::size_t s, std::size_t r) {
  const std::size_t n = static_cast<std::size_t>(spectrum.size());
  if (r == 0 || s + r > n) throw std::invalid_argument("eigen_gap: window outside the spectrum");
  const double inf = std::numeric_limits<double>::infinity();
  // lambda_k with 1-based k and the +-inf sentinels.
  auto lambda = [&](std::size_t k) { return k == 0 ? inf : (k > n ? -inf : spectrum[k - 1]); };
  double gap = std::min(lambda(s) - lambda(s + 1), lambda(s + r) - lambda(s + r + 1));
  for (std::size_t i = 1; i <= r; ++i) gap = std::min(gap, std::abs(lambda(s + i)));
  return gap;
}

PopulationModel population(const EnsembleSpec& spec, const EigenOptions& options) {
  validate(spec);
  return std::visit(
      Overloaded{
          [](const Z2Sync& z) {
            const double n = static_cast<double>(z.n);
            Matrix basis(z.n, 1);
            for (std::size_t i = 0; i < z.n; ++i) basis(i, 0) = z.x[i] / std::sqrt(n);
            return low_rank_model(std::move(basis), Vector::Constant(1, n), 0.0, 0, 1);
          },
          [](const Sbm2& m) {
            const double n = static_cast<double>(m.n);
            Matrix basis(m.n, 2);
            for (std::size_t i = 0; i < m.n; ++i) {
              basis(i, 0) = 1.0 / std::sqrt(n);
              basis(i, 1) = m.labels[i] / std::sqrt(n);
            }
            Vector values(2);
            values << (m.p() + m.q()) * n / 2.0, (m.p() - m.q()) * n / 2.0;
            // Without self-loops E A loses its diagonal: B - p I.
            const double shift = m.self_loops ? 0.0 : -m.p();
            return low_rank_model(std::move(basis), std::move(values), shift, 1, 1);
          },
          [](const Sbm3& m) {
            const double n = static_cast<double>(m.n);
            Matrix basis(m.n, 3);
            for (std::size_t i = 0; i < m.n; ++i) {
              basis(i, 0) = 1.0 / std::sqrt(n);
              switch (m.z[i]) {
                case 1:
                  basis(i, 1) = 2.0 / std::sqrt(2.0 * n);
                  basis(i, 2) = 0.0;
                  break;
                case 2:
                  basis(i, 1) = -1.0 / std::sqrt(2.0 * n);
                  basis(i, 2) = std::sqrt(3.0 / (2.0 * n));
                  break;
                default:
                  basis(i, 1) = -1.0 / std::sqrt(2.0 * n);
                  basis(i, 2) = -std::sqrt(3.0 / (2.0 * n));
                  break;
              }
            }
            Vector values(3);
            values << (m.p() + 2.0 * m.q()) * n / 3.0, (m.p() - m.q()) * n / 3.0, (m.p() - m.q()) * n / 3.0;
            const double shift = m.self_loops ? 0.0 : -m.p();
            return low_rank_model(std::move(basis), std::move(values), shift, 1, 2);
          },
          [&options](const Nmc& c) {
            const std::size_t r = c.rank;
            const SvdResult svd = truncated_svd(c.signal, r, options);
            const std::size_t n1 = c.signal->rows(), n2 = c.signal->cols();
            PopulationModel pop;
            pop.u_star = svd.left.basis;
            pop.v_star = svd.right.basis;
            pop.sigma_star = svd.values;

            pop.spectrum = Vector::Zero(static_cast<Eigen::Index>(n1 + n2));
            for (std::size_t i = 0; i < r; ++i) {
              pop.spectrum[i] = svd.values[i];
              pop.spectrum[n1 + n2 - 1 - i] = -svd.values[i];
            }
            pop.subspace.window_start = 0;
            pop.subspace.values = svd.values;
            pop.subspace.basis.resize(static_cast<Eigen::Index>(n1 + n2), static_cast<Eigen::Index>(r));
            pop.subspace.basis.topRows(static_cast<Eigen::Index>(n1)) = svd.left.basis / std::sqrt(2.0);
            pop.subspace.basis.bottomRows(static_cast<Eigen::Index>(n2)) = svd.right.basis / std::sqrt(2.0);
            pop.subspace.residuals = (svd.left.residuals.array().square() + svd.right.residuals.array().square())
                                         .sqrt()
                                         .matrix() /
                                     std::sqrt(2.0);
            pop.subspace.norm_estimate = svd.values[0];

            const Matrix& m = c.signal->dense();
            pop.a_star_two_to_inf = std::max(m.rowwise().norm().maxCoeff(), m.colwise().norm().maxCoeff());
            pop.gap = eigen_gap(pop.spectrum, 0, r);
            pop.kappa = svd.values[0] / pop.gap;
            pop.a_star = std::make_shared<Dilation>(c.signal);
            return pop;
          },
      },
      spec);
}

}  // namespace entrywise

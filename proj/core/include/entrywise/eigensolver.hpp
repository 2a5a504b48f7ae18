#pragma once

#include "entrywise/matrix.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entrywise {

// Eigenpairs (or singular pairs) for a window of the spectrum, ranked by
// algebraic value in descending order.
struct SpectralSubspace {
  Vector values;
  Matrix basis;
  std::size_t window_start = 0;
  // ||A v - lambda v||_2 per column.
  Vector residuals;
  bool has_ties = false;
  // Spectral-norm estimate of the operator used for the residual contract.
  double norm_estimate = 0.0;
  std::size_t matvecs = 0;

  std::size_t rank() const { return static_cast<std::size_t>(values.size()); }
  std::size_t dim() const { return static_cast<std::size_t>(basis.rows()); }
};

enum class EigenMethod { kAuto, kLanczos, kDense };

struct EigenOptions {
  double tol = 1e-10;
  // 0 selects 5 * n matrix-vector products.
  std::size_t max_iter = 0;
  EigenMethod method = EigenMethod::kAuto;
  // kAuto uses the dense solver up to this dimension.
  std::size_t dense_threshold = 64;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Vector best_residuals)
      : std::runtime_error(what), best_residuals_(std::move(best_residuals)) {}
  const Vector& best_residuals() const { return best_residuals_; }

 private:
  Vector best_residuals_;
};

// Eigenpairs window_start+1 ... window_start+k of A in descending order.
SpectralSubspace top_eigenpairs(const SymmetricOperator& a, std::size_t k, std::size_t window_start = 0,
                                const EigenOptions& options = {});

// max |lambda| of A, from the extreme eigenvalues on both ends.
double symmetric_spectral_norm(const SymmetricOperator& a, const EigenOptions& options = {});

}  // namespace entrywise

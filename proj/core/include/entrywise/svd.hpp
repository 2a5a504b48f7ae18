#pragma once

#include "entrywise/eigensolver.hpp"
#include "entrywise/matrix.hpp"

#include <memory>

namespace entrywise {

struct SvdResult {
  SpectralSubspace left;
  SpectralSubspace right;
  Vector values;
  // Set when the r-th singular value falls below tol * (largest).
  bool rank_deficient = false;
};

// Top-r singular triplets from the top-r eigenpairs of the symmetric dilation.
SvdResult truncated_svd(std::shared_ptr<const RectMatrix> m, std::size_t r, const EigenOptions& options = {});
// Non-owning convenience overload; `m` must outlive the call.
SvdResult truncated_svd(const RectMatrix& m, std::size_t r, const EigenOptions& options = {});

}  // namespace entrywise

#pragma once

#include "entrywise/matrix.hpp"

#include <stdexcept>

namespace entrywise {

// H had a singular value below the threshold: the two subspaces are close to
// orthogonal and no rotation aligns them.
class DegenerateAlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// U V^T from the SVD H = U S V^T.
Matrix matrix_sign(const Matrix& h, double singular_floor = 1e-12);

struct Aligner {
  Matrix h;     // U^T U_star
  Matrix sign;  // sgn(H)

  static Aligner from_h(Matrix h);
  static Aligner between(const Matrix& u, const Matrix& u_star);
};

}  // namespace entrywise

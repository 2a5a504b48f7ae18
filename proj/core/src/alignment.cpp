#include "entrywise/alignment.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace entrywise {

Matrix matrix_sign(const Matrix& h, double singular_floor) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix_sign: H must be square");
  if (!h.allFinite()) throw std::invalid_argument("matrix_sign: H has non-finite entries");
  if (h.size() == 0) return h;
  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smallest = svd.singularValues().minCoeff();
  if (!(smallest >= singular_floor))
    throw DegenerateAlignmentError("matrix_sign: smallest singular value " + std::to_string(smallest) +
                                   " is below the alignment floor");
  return svd.matrixU() * svd.matrixV().transpose();
}

Aligner Aligner::from_h(Matrix h) {
  Aligner a;
  a.sign = matrix_sign(h);
  a.h = std::move(h);
  return a;
}

Aligner Aligner::between(const Matrix& u, const Matrix& u_star) {
  if (u.rows() != u_star.rows() || u.cols() != u_star.cols())
    throw std::invalid_argument("Aligner: basis shapes differ");
  return from_h(u.transpose() * u_star);
}

}  // namespace entrywise

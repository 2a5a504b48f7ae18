#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <vector>

namespace entrywise {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A real symmetric linear map, applied through matrix-vector products.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;

  virtual std::size_t dim() const = 0;
  // y <- A x; x and y hold dim() entries and do not alias.
  virtual void apply(const double* x, double* y) const = 0;
  // Materializes the operator column by column unless overridden.
  virtual Matrix to_dense() const;

  Vector operator*(const Vector& x) const;
  Matrix operator*(const Matrix& x) const;
};

struct Entry {
  std::size_t row;
  std::size_t col;
  double value;
};

// Symmetric matrix stored as one triangle: either a packed dense lower
// triangle or a compressed-row layout built from upper-triangle entries.
class SymmetricMatrix final : public SymmetricOperator {
 public:
  enum class Storage { kDense, kSparse };

  SymmetricMatrix() = default;

  // Packed lower triangle, row-major: (0,0), (1,0), (1,1), (2,0), ...
  static SymmetricMatrix from_packed_lower(std::size_t n, std::vector<double> packed);
  // Reads the lower triangle of a square matrix.
  static SymmetricMatrix from_dense(const Matrix& a);
  // Entries with row <= col; duplicates are summed.
  static SymmetricMatrix from_upper_entries(std::size_t n, std::vector<Entry> entries);

  std::size_t dim() const override { return n_; }
  void apply(const double* x, double* y) const override;
  Matrix to_dense() const override;

  Storage storage() const { return storage_; }
  double operator()(std::size_t i, std::size_t j) const;
  // Number of stored entries in the full (both-triangle) pattern.
  std::size_t nnz() const;

  SymmetricMatrix to_sparse() const;
  SymmetricMatrix to_dense_storage() const;
  // Copy with row and column m set to zero.
  SymmetricMatrix without_index(std::size_t m) const;
  // Upper-triangle entries in row-major order (zeros skipped).
  std::vector<Entry> upper_entries() const;

 private:
  std::size_t n_ = 0;
  Storage storage_ = Storage::kDense;
  std::vector<double> packed_;

  // Full symmetric pattern in CSR form.
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

class RectMatrix {
 public:
  enum class Storage { kDense, kTriplet };

  RectMatrix() = default;
  static RectMatrix from_dense(Matrix m);
  // Duplicated coordinates are summed; entries are kept sorted row-major.
  static RectMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Storage storage() const { return storage_; }

  // y <- M x (x has cols() entries) and y <- M^T x (x has rows() entries).
  void apply(const double* x, double* y) const;
  void apply_transpose(const double* x, double* y) const;

  Matrix to_dense() const;
  const Matrix& dense() const { return dense_; }
  const std::vector<Entry>& triplets() const { return triplets_; }
  double operator()(std::size_t i, std::size_t j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Storage storage_ = Storage::kDense;
  Matrix dense_;
  std::vector<Entry> triplets_;
};

// [[0, M], [M^T, 0]], applied without forming the block matrix.
class Dilation final : public SymmetricOperator {
 public:
  explicit Dilation(std::shared_ptr<const RectMatrix> m);

  std::size_t dim() const override { return m_->rows() + m_->cols(); }
  void apply(const double* x, double* y) const override;
  Matrix to_dense() const override;
  const RectMatrix& matrix() const { return *m_; }

 private:
  std::shared_ptr<const RectMatrix> m_;
};

// B diag(d) B^T + shift * I.
class LowRankSymmetric final : public SymmetricOperator {
 public:
  LowRankSymmetric(Matrix basis, Vector values, double shift = 0.0);

  std::size_t dim() const override { return static_cast<std::size_t>(basis_.rows()); }
  void apply(const double* x, double* y) const override;
  Matrix to_dense() const override;

  const Matrix& basis() const { return basis_; }
  const Vector& values() const { return values_; }
  double shift() const { return shift_; }

 private:
  Matrix basis_;
  Vector values_;
  double shift_;
};

// alpha * A + beta * B for two operators of equal dimension.
class CombinedOperator final : public SymmetricOperator {
 public:
  CombinedOperator(const SymmetricOperator& a, double alpha, const SymmetricOperator& b, double beta);

  std::size_t dim() const override { return a_.dim(); }
  void apply(const double* x, double* y) const override;

 private:
  const SymmetricOperator& a_;
  const SymmetricOperator& b_;
  double alpha_;
  double beta_;
};

}  // namespace entrywise

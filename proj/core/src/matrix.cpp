#include "entrywise/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace entrywise {

namespace {

inline std::size_t packed_index(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  return i * (i + 1) / 2 + j;
}

void sort_and_merge(std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  std::size_t out = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (out > 0 && entries[out - 1].row == entries[k].row && entries[out - 1].col == entries[k].col) {
      entries[out - 1].value += entries[k].value;
    } else {
      entries[out++] = entries[k];
    }
  }
  entries.resize(out);
}

}  // namespace

Matrix SymmetricOperator::to_dense() const {
  const std::size_t n = dim();
  Matrix out(n, n);
  Vector e = Vector::Zero(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply(e.data(), out.col(j).data());
    e[j] = 0.0;
  }
  return out;
}

Vector SymmetricOperator::operator*(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw std::invalid_argument("operator: dimension mismatch");
  Vector y(x.size());
  apply(x.data(), y.data());
  return y;
}

Matrix SymmetricOperator::operator*(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != dim()) throw std::invalid_argument("operator: dimension mismatch");
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) apply(x.col(j).data(), y.col(j).data());
  return y;
}

SymmetricMatrix SymmetricMatrix::from_packed_lower(std::size_t n, std::vector<double> packed) {
  if (packed.size() != n * (n + 1) / 2) throw std::invalid_argument("packed storage has wrong length");
  SymmetricMatrix m;
  m.n_ = n;
  m.storage_ = Storage::kDense;
  m.packed_ = std::move(packed);
  return m;
}

SymmetricMatrix SymmetricMatrix::from_dense(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("from_dense: matrix is not square");
  const std::size_t n = static_cast<std::size_t>(a.rows());
  std::vector<double> packed(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) packed[packed_index(i, j)] = a(i, j);
  return from_packed_lower(n, std::move(packed));
}

SymmetricMatrix SymmetricMatrix::from_upper_entries(std::size_t n, std::vector<Entry> entries) {
  for (const Entry& e : entries) {
    if (e.row > e.col) throw std::invalid_argument("from_upper_entries: entry below the diagonal");
    if (e.col >= n) throw std::invalid_argument("from_upper_entries: index out of range");
  }
  sort_and_merge(entries);

  SymmetricMatrix m;
  m.n_ = n;
  m.storage_ = Storage::kSparse;
  std::vector<std::size_t> counts(n + 1, 0);
  for (const Entry& e : entries) {
    ++counts[e.row + 1];
    if (e.row != e.col) ++counts[e.col + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  m.row_ptr_ = counts;
  m.col_idx_.resize(counts[n]);
  m.values_.resize(counts[n]);
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  // With entries sorted by (row, col), each row receives its mirrored
  // entries (columns < row) before its own, so every row ends up sorted.
  for (const Entry& e : entries) {
    if (e.row != e.col) {
      const std::size_t k = fill[e.col]++;
      m.col_idx_[k] = e.row;
      m.values_[k] = e.value;
    }
    const std::size_t k = fill[e.row]++;
    m.col_idx_[k] = e.col;
    m.values_[k] = e.value;
  }
  return m;
}

void SymmetricMatrix::apply(const double* x, double* y) const {
  if (storage_ == Storage::kSparse) {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
      y[i] = acc;
    }
    return;
  }
  std::fill(y, y + n_, 0.0);
  const double* row = packed_.data();
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    const double xi = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      acc += row[j] * x[j];
      y[j] += row[j] * xi;
    }
    y[i] += acc + row[i] * xi;
    row += i + 1;
  }
}

Matrix SymmetricMatrix::to_dense() const {
  Matrix out = Matrix::Zero(n_, n_);
  if (storage_ == Storage::kSparse) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out(i, col_idx_[k]) = values_[k];
    return out;
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j) out(i, j) = out(j, i) = packed_[packed_index(i, j)];
  return out;
}

double SymmetricMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("SymmetricMatrix index out of range");
  if (storage_ == Storage::kDense) return packed_[packed_index(i, j)];
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::size_t SymmetricMatrix::nnz() const {
  if (storage_ == Storage::kSparse) return values_.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (packed_[packed_index(i, j)] != 0.0) count += (i == j) ? 1 : 2;
  return count;
}

std::vector<Entry> SymmetricMatrix::upper_entries() const {
  std::vector<Entry> out;
  if (storage_ == Storage::kSparse) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_idx_[k] >= i && values_[k] != 0.0) out.push_back({i, col_idx_[k], values_[k]});
    return out;
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      const double v = packed_[packed_index(i, j)];
      if (v != 0.0) out.push_back({i, j, v});
    }
  return out;
}

SymmetricMatrix SymmetricMatrix::to_sparse() const {
  if (storage_ == Storage::kSparse) return *this;
  return from_upper_entries(n_, upper_entries());
}

SymmetricMatrix SymmetricMatrix::to_dense_storage() const {
  if (storage_ == Storage::kDense) return *this;
  std::vector<double> packed(n_ * (n_ + 1) / 2, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_idx_[k] <= i) packed[packed_index(i, col_idx_[k])] = values_[k];
  return from_packed_lower(n_, std::move(packed));
}

SymmetricMatrix SymmetricMatrix::without_index(std::size_t m) const {
  if (m >= n_) throw std::invalid_argument("index " + std::to_string(m) + " outside [0, n)");
  if (storage_ == Storage::kDense) {
    std::vector<double> packed = packed_;
    for (std::size_t j = 0; j < n_; ++j) packed[packed_index(m, j)] = 0.0;
    return from_packed_lower(n_, std::move(packed));
  }
  std::vector<Entry> entries = upper_entries();
  std::erase_if(entries, [m](const Entry& e) { return e.row == m || e.col == m; });
  return from_upper_entries(n_, std::move(entries));
}

RectMatrix RectMatrix::from_dense(Matrix m) {
  RectMatrix out;
  out.rows_ = static_cast<std::size_t>(m.rows());
  out.cols_ = static_cast<std::size_t>(m.cols());
  out.storage_ = Storage::kDense;
  out.dense_ = std::move(m);
  return out;
}

RectMatrix RectMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Entry> entries) {
  for (const Entry& e : entries)
    if (e.row >= rows || e.col >= cols) throw std::invalid_argument("triplet index out of range");
  sort_and_merge(entries);
  RectMatrix out;
  out.rows_ = rows;
  out.cols_ = cols;
  out.storage_ = Storage::kTriplet;
  out.triplets_ = std::move(entries);
  return out;
}

void RectMatrix::apply(const double* x, double* y) const {
  if (storage_ == Storage::kDense) {
    Eigen::Map<Vector>(y, static_cast<Eigen::Index>(rows_)).noalias() =
        dense_ * Eigen::Map<const Vector>(x, static_cast<Eigen::Index>(cols_));
    return;
  }
  std::fill(y, y + rows_, 0.0);
  for (const Entry& e : triplets_) y[e.row] += e.value * x[e.col];
}

void RectMatrix::apply_transpose(const double* x, double* y) const {
  if (storage_ == Storage::kDense) {
    Eigen::Map<Vector>(y, static_cast<Eigen::Index>(cols_)).noalias() =
        dense_.transpose() * Eigen::Map<const Vector>(x, static_cast<Eigen::Index>(rows_));
    return;
  }
  std::fill(y, y + cols_, 0.0);
  for (const Entry& e : triplets_) y[e.col] += e.value * x[e.row];
}

Matrix RectMatrix::to_dense() const {
  if (storage_ == Storage::kDense) return dense_;
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const Entry& e : triplets_) out(e.row, e.col) = e.value;
  return out;
}

double RectMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("RectMatrix index out of range");
  if (storage_ == Storage::kDense) return dense_(i, j);
  const auto it = std::lower_bound(triplets_.begin(), triplets_.end(), Entry{i, j, 0.0},
                                   [](const Entry& x, const Entry& y) {
                                     return x.row != y.row ? x.row < y.row : x.col < y.col;
                                   });
  if (it == triplets_.end() || it->row != i || it->col != j) return 0.0;
  return it->value;
}

Dilation::Dilation(std::shared_ptr<const RectMatrix> m) : m_(std::move(m)) {
  if (!m_) throw std::invalid_argument("Dilation: null matrix");
}

void Dilation::apply(const double* x, double* y) const {
  const std::size_t n1 = m_->rows();
  m_->apply(x + n1, y);
  m_->apply_transpose(x, y + n1);
}

Matrix Dilation::to_dense() const {
  const auto n1 = static_cast<Eigen::Index>(m_->rows());
  const auto n2 = static_cast<Eigen::Index>(m_->cols());
  Matrix out = Matrix::Zero(n1 + n2, n1 + n2);
  const Matrix m = m_->to_dense();
  out.topRightCorner(n1, n2) = m;
  out.bottomLeftCorner(n2, n1) = m.transpose();
  return out;
}

LowRankSymmetric::LowRankSymmetric(Matrix basis, Vector values, double shift)
    : basis_(std::move(basis)), values_(std::move(values)), shift_(shift) {
  if (basis_.cols() != values_.size()) throw std::invalid_argument("LowRankSymmetric: rank mismatch");
}

void LowRankSymmetric::apply(const double* x, double* y) const {
  const auto n = basis_.rows();
  Eigen::Map<const Vector> xv(x, n);
  Eigen::Map<Vector> yv(y, n);
  Vector coef = values_.cwiseProduct(basis_.transpose() * xv);
  yv.noalias() = basis_ * coef;
  if (shift_ != 0.0) yv += shift_ * xv;
}

Matrix LowRankSymmetric::to_dense() const {
  Matrix out = basis_ * values_.asDiagonal() * basis_.transpose();
  out.diagonal().array() += shift_;
  return out;
}

CombinedOperator::CombinedOperator(const SymmetricOperator& a, double alpha, const SymmetricOperator& b,
                                   double beta)
    : a_(a), b_(b), alpha_(alpha), beta_(beta) {
  if (a.dim() != b.dim()) throw std::invalid_argument("CombinedOperator: dimension mismatch");
}

void CombinedOperator::apply(const double* x, double* y) const {
  const std::size_t n = dim();
  std::vector<double> tmp(n);
  a_.apply(x, y);
  b_.apply(x, tmp.data());
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha_ * y[i] + beta_ * tmp[i];
}

}  // namespace entrywise

#include "entrywise/matrix.hpp"
#include "entrywise/random.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <stdexcept>

using namespace entrywise;

namespace {

Matrix random_symmetric(std::size_t n, double density, Seed seed) {
  Rng rng(seed);
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (rng.uniform() < density) a(i, j) = a(j, i) = rng.normal();
  return a;
}

std::vector<Entry> upper_of(const Matrix& a) {
  std::vector<Entry> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j)
      if (a(i, j) != 0.0) out.push_back({std::size_t(i), std::size_t(j), a(i, j)});
  return out;
}

}  // namespace

TEST(SymmetricMatrix, DenseAndSparseProductsAgree) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 5 + 7 * s;
    const Matrix a = random_symmetric(n, 0.3, Seed{s, 11});
    const SymmetricMatrix dense = SymmetricMatrix::from_dense(a);
    const SymmetricMatrix sparse = SymmetricMatrix::from_upper_entries(n, upper_of(a));
    ASSERT_EQ(dense.storage(), SymmetricMatrix::Storage::kDense);
    ASSERT_EQ(sparse.storage(), SymmetricMatrix::Storage::kSparse);
    Rng rng(Seed{s, 12});
    Vector x(n);
    for (auto& v : x) v = rng.normal();
    const Vector yd = dense * x, ys = sparse * x, ref = a * x;
    EXPECT_LE((yd - ys).norm(), 1e-12 * std::max(1.0, ref.norm()));
    EXPECT_LE((yd - ref).norm(), 1e-12 * std::max(1.0, ref.norm()));
  }
}

TEST(SymmetricMatrix, EntriesAreSymmetric) {
  const Matrix a = random_symmetric(9, 0.5, Seed{3});
  for (const auto& m : {SymmetricMatrix::from_dense(a), SymmetricMatrix::from_upper_entries(9, upper_of(a))})
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = 0; j < 9; ++j) {
        EXPECT_EQ(m(i, j), m(j, i));
        EXPECT_EQ(m(i, j), a(i, j));
      }
}

TEST(SymmetricMatrix, PackedLowerLayout) {
  // [[1,2,4],[2,3,5],[4,5,6]]
  const SymmetricMatrix m = SymmetricMatrix::from_packed_lower(3, {1, 2, 3, 4, 5, 6});
  Matrix expect(3, 3);
  expect << 1, 2, 4, 2, 3, 5, 4, 5, 6;
  EXPECT_EQ(m.to_dense(), expect);
  EXPECT_THROW(SymmetricMatrix::from_packed_lower(3, {1, 2, 3}), std::invalid_argument);
}

TEST(SymmetricMatrix, DuplicateEntriesAreSummed) {
  const SymmetricMatrix m = SymmetricMatrix::from_upper_entries(3, {{0, 1, 1.5}, {0, 1, 2.0}, {2, 2, 1.0}});
  EXPECT_EQ(m(0, 1), 3.5);
  EXPECT_EQ(m(1, 0), 3.5);
  EXPECT_EQ(m(2, 2), 1.0);
  EXPECT_EQ(m.nnz(), 3u);
}

TEST(SymmetricMatrix, RejectsBadEntries) {
  EXPECT_THROW(SymmetricMatrix::from_upper_entries(3, {{2, 1, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SymmetricMatrix::from_upper_entries(3, {{0, 3, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SymmetricMatrix::from_dense(Matrix::Zero(2, 3)), std::invalid_argument);
  const SymmetricMatrix m = SymmetricMatrix::from_dense(Matrix::Identity(2, 2));
  EXPECT_THROW(m(2, 0), std::out_of_range);
  EXPECT_THROW(m * Vector(Vector::Ones(3)), std::invalid_argument);
}

TEST(SymmetricMatrix, StorageConversionsRoundTrip) {
  const Matrix a = random_symmetric(12, 0.4, Seed{5});
  const SymmetricMatrix d = SymmetricMatrix::from_dense(a);
  EXPECT_EQ(d.to_sparse().to_dense(), a);
  EXPECT_EQ(d.to_sparse().to_dense_storage().to_dense(), a);
  EXPECT_EQ(d.to_sparse().storage(), SymmetricMatrix::Storage::kSparse);
}

TEST(SymmetricMatrix, UpperEntriesRowMajorSkippingZeros) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 2) = a(2, 0) = 2.0;
  a(1, 1) = -1.0;
  for (const auto& m : {SymmetricMatrix::from_dense(a), SymmetricMatrix::from_dense(a).to_sparse()}) {
    const auto e = m.upper_entries();
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0].row, 0u);
    EXPECT_EQ(e[0].col, 2u);
    EXPECT_EQ(e[0].value, 2.0);
    EXPECT_EQ(e[1].row, 1u);
    EXPECT_EQ(e[1].col, 1u);
  }
}

TEST(SymmetricMatrix, WithoutIndexZeroesRowAndColumn) {
  const Matrix a = random_symmetric(8, 0.8, Seed{6});
  Matrix expect = a;
  expect.row(3).setZero();
  expect.col(3).setZero();
  EXPECT_EQ(SymmetricMatrix::from_dense(a).without_index(3).to_dense(), expect);
  EXPECT_EQ(SymmetricMatrix::from_dense(a).to_sparse().without_index(3).to_dense(), expect);
  EXPECT_THROW(SymmetricMatrix::from_dense(a).without_index(8), std::invalid_argument);
}

TEST(RectMatrix, TripletsSumAndApply) {
  const RectMatrix m = RectMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 0, 2.0}, {1, 2, 0.5}});
  EXPECT_EQ(m(1, 2), 1.5);
  EXPECT_EQ(m(0, 0), 2.0);
  EXPECT_EQ(m(0, 1), 0.0);
  ASSERT_EQ(m.triplets().size(), 2u);
  EXPECT_EQ(m.triplets()[0].row, 0u);
  const Vector x = Vector::LinSpaced(3, 1, 3);
  Vector y(2);
  m.apply(x.data(), y.data());
  EXPECT_EQ(y, (Vector(2) << 2.0, 4.5).finished());
  const Vector z = Vector::LinSpaced(2, 1, 2);
  Vector w(3);
  m.apply_transpose(z.data(), w.data());
  EXPECT_EQ(w, (Vector(3) << 2.0, 0.0, 3.0).finished());
  EXPECT_THROW(RectMatrix::from_triplets(2, 3, {{2, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(RectMatrix::from_triplets(2, 3, {{0, 3, 1.0}}), std::invalid_argument);
  EXPECT_THROW(m(2, 0), std::out_of_range);
}

TEST(RectMatrix, DenseAndTripletAgree) {
  Rng rng(Seed{7});
  Matrix d = Matrix::Zero(6, 4);
  std::vector<Entry> t;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (rng.uniform() < 0.5) {
        d(i, j) = rng.normal();
        t.push_back({i, j, d(i, j)});
      }
  const RectMatrix a = RectMatrix::from_dense(d), b = RectMatrix::from_triplets(6, 4, t);
  EXPECT_EQ(a.to_dense(), b.to_dense());
  const Vector x = Vector::Random(4), u = Vector::Random(6);
  Vector ya(6), yb(6), wa(4), wb(4);
  a.apply(x.data(), ya.data());
  b.apply(x.data(), yb.data());
  a.apply_transpose(u.data(), wa.data());
  b.apply_transpose(u.data(), wb.data());
  EXPECT_LE((ya - yb).norm(), 1e-12);
  EXPECT_LE((wa - wb).norm(), 1e-12);
}

TEST(Dilation, BlockStructure) {
  Matrix d(2, 3);
  d << 1, 2, 3, 4, 5, 6;
  const Dilation dil(std::make_shared<const RectMatrix>(RectMatrix::from_dense(d)));
  EXPECT_EQ(dil.dim(), 5u);
  Matrix expect = Matrix::Zero(5, 5);
  expect.topRightCorner(2, 3) = d;
  expect.bottomLeftCorner(3, 2) = d.transpose();
  EXPECT_EQ(dil.to_dense(), expect);
  const Vector x = Vector::LinSpaced(5, -2, 2);
  EXPECT_LE((dil * x - expect * x).norm(), 1e-12);
}

TEST(LowRankSymmetric, MatchesDenseForm) {
  const Matrix b = Matrix::Random(7, 2);
  const Vector v = (Vector(2) << 3.0, -1.0).finished();
  const LowRankSymmetric op(b, v, 0.5);
  const Matrix dense = b * v.asDiagonal() * b.transpose() + 0.5 * Matrix::Identity(7, 7);
  EXPECT_LE((op.to_dense() - dense).norm(), 1e-12);
  const Vector x = Vector::Random(7);
  EXPECT_LE((op * x - dense * x).norm(), 1e-12);
  EXPECT_THROW(LowRankSymmetric(b, Vector::Ones(3)), std::invalid_argument);
}

TEST(CombinedOperator, LinearCombination) {
  const Matrix a = random_symmetric(6, 1.0, Seed{8});
  const Matrix b = random_symmetric(6, 1.0, Seed{9});
  const SymmetricMatrix sa = SymmetricMatrix::from_dense(a), sb = SymmetricMatrix::from_dense(b);
  const CombinedOperator c(sa, 2.0, sb, -0.5);
  EXPECT_LE((c.to_dense() - (2.0 * a - 0.5 * b)).norm(), 1e-12);
  const SymmetricMatrix small = SymmetricMatrix::from_dense(Matrix::Identity(3, 3));
  EXPECT_THROW(CombinedOperator(sa, 1.0, small, 1.0), std::invalid_argument);
}

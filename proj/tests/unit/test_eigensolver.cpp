#include "dense_oracle.hpp"
#include "entrywise/eigensolver.hpp"
#include "entrywise/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace entrywise;

namespace {

const EigenOptions kLanczos{1e-10, 0, EigenMethod::kLanczos, 64};
const EigenOptions kDense{1e-10, 0, EigenMethod::kDense, 64};

Matrix random_symmetric(std::size_t n, Seed seed) {
  Rng rng(seed);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
  return a;
}

void expect_orthonormal(const Matrix& u, double tol) {
  const Matrix gram = u.transpose() * u;
  EXPECT_LE((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), tol);
}

}  // namespace

TEST(TopEigenpairs, DiagonalMatrix) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  const SymmetricMatrix a = SymmetricMatrix::from_dense(d);
  for (const auto& opt : {kLanczos, kDense}) {
    const SpectralSubspace s = top_eigenpairs(a, 2, 0, opt);
    ASSERT_EQ(s.rank(), 2u);
    EXPECT_NEAR(s.values[0], 3.0, 1e-12);
    EXPECT_NEAR(s.values[1], 2.0, 1e-12);
    EXPECT_NEAR(std::abs(s.basis(0, 0)), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(s.basis(1, 1)), 1.0, 1e-10);
    EXPECT_FALSE(s.has_ties);
  }
}

TEST(TopEigenpairs, WindowSelectsLaterEigenvalues) {
  Matrix d = Matrix::Zero(5, 5);
  d.diagonal() << -4, 5, 1, 3, 2;
  const SymmetricMatrix a = SymmetricMatrix::from_dense(d);
  for (const auto& opt : {kLanczos, kDense}) {
    const SpectralSubspace s = top_eigenpairs(a, 2, 2, opt);
    EXPECT_EQ(s.window_start, 2u);
    EXPECT_NEAR(s.values[0], 2.0, 1e-10);
    EXPECT_NEAR(s.values[1], 1.0, 1e-10);
    // algebraic order: -4 is last even though it has the second largest magnitude
    EXPECT_NEAR(top_eigenpairs(a, 1, 4, opt).values[0], -4.0, 1e-10);
  }
}

// Population two-block matrix with self-loops: p on the diagonal blocks, q
// across. Nonzero eigenvalues (p+q) n/2 and (p-q) n/2; the second eigenvector
// is +-1/sqrt(n) split by block.
TEST(TopEigenpairs, PopulationTwoBlockMatrix) {
  const double p = 0.7, q = 0.2;
  const std::size_t n = 8;
  const std::vector<int> labels = {1, -1, 1, 1, -1, -1, 1, -1};
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = labels[i] == labels[j] ? p : q;
  for (const auto& opt : {kLanczos, kDense}) {
    const SpectralSubspace s = top_eigenpairs(SymmetricMatrix::from_dense(a), 2, 0, opt);
    EXPECT_NEAR(s.values[0], (p + q) * 4, 1e-10);
    EXPECT_NEAR(s.values[1], (p - q) * 4, 1e-10);
    const double sgn = s.basis(0, 1) > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(sgn * s.basis(i, 1), labels[i] / std::sqrt(8.0), 1e-9);
  }
}

TEST(TopEigenpairs, MatchesOracleOnRandom32) {
  const Matrix m = random_symmetric(32, Seed{32, 1});
  const auto ref = oracle::symmetric_eigen(m);
  const SymmetricMatrix a = SymmetricMatrix::from_dense(m);
  for (const auto& opt : {kLanczos, kDense}) {
    const SpectralSubspace s = top_eigenpairs(a, 3, 0, opt);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.values[i], ref.values[i], 1e-8);
  }
}

TEST(TopEigenpairs, OracleEquivalenceSparseInputs) {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    Rng rng(Seed{trial, 2});
    const std::size_t n = 8 + rng.next_u64() % 57;
    const std::size_t k = 1 + rng.next_u64() % 5;
    Matrix m = Matrix::Zero(n, n);
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (rng.uniform() < 0.2) {
          m(i, j) = m(j, i) = rng.normal();
          entries.push_back({i, j, m(i, j)});
        }
    const SymmetricMatrix a = SymmetricMatrix::from_upper_entries(n, entries);
    const auto ref = oracle::symmetric_eigen(m);
    const SpectralSubspace s = top_eigenpairs(a, k, 0, kLanczos);
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(s.values[i], ref.values[i], 1e-8) << "n=" << n;
    expect_orthonormal(s.basis, 1e-8);
    for (std::size_t i = 0; i < k; ++i) EXPECT_LE(s.residuals[i], kLanczos.tol * s.norm_estimate);
    const double gap = ref.values[k - 1] - ref.values[k];
    if (gap > 1e-3) EXPECT_LE(oracle::projector_distance(s.basis, ref.vectors.leftCols(k)), 1e-6);
  }
}

TEST(TopEigenpairs, ResidualContractOnLargerSparse) {
  Rng rng(Seed{77});
  const std::size_t n = 600;
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (rng.uniform() < 0.02) entries.push_back({i, j, 1.0});
  const SymmetricMatrix a = SymmetricMatrix::from_upper_entries(n, entries);
  const SpectralSubspace s = top_eigenpairs(a, 4, 0);
  expect_orthonormal(s.basis, 1e-8);
  Vector av(n);
  for (std::size_t i = 0; i < 4; ++i) {
    a.apply(s.basis.col(i).data(), av.data());
    const double r = (av - s.values[i] * s.basis.col(i)).norm();
    EXPECT_NEAR(r, s.residuals[i], 1e-12);
    EXPECT_LE(r, 1e-10 * s.norm_estimate);
    if (i > 0) EXPECT_GE(s.values[i - 1], s.values[i]);
  }
  const auto ref = oracle::symmetric_eigen(a.to_dense());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.values[i], ref.values[i], 1e-8);
}

TEST(TopEigenpairs, DeterministicForSameInput) {
  const SymmetricMatrix a = SymmetricMatrix::from_dense(random_symmetric(100, Seed{5}));
  const SpectralSubspace x = top_eigenpairs(a, 3, 0, kLanczos);
  const SpectralSubspace y = top_eigenpairs(a, 3, 0, kLanczos);
  EXPECT_EQ(x.values, y.values);
  EXPECT_EQ(x.basis, y.basis);
}

TEST(TopEigenpairs, RepeatedEigenvaluesAreRecorded) {
  Matrix d = Matrix::Zero(6, 6);
  d.diagonal() << 4, 4, 2, 1, 0, -1;
  for (const auto& opt : {kLanczos, kDense}) {
    const SpectralSubspace s = top_eigenpairs(SymmetricMatrix::from_dense(d), 2, 0, opt);
    EXPECT_NEAR(s.values[0], 4.0, 1e-10);
    EXPECT_NEAR(s.values[1], 4.0, 1e-10);
    EXPECT_TRUE(s.has_ties);
    expect_orthonormal(s.basis, 1e-8);
  }
}

TEST(TopEigenpairs, ArgumentErrors) {
  const SymmetricMatrix a = SymmetricMatrix::from_dense(Matrix::Identity(4, 4));
  EXPECT_THROW(top_eigenpairs(a, 0), std::invalid_argument);
  EXPECT_THROW(top_eigenpairs(a, 5), std::invalid_argument);
  EXPECT_THROW(top_eigenpairs(a, 2, 3), std::invalid_argument);
  EXPECT_THROW(top_eigenpairs(a, 1, 0, EigenOptions{0.0}), std::invalid_argument);
}

TEST(TopEigenpairs, NonConvergenceCarriesResiduals) {
  const SymmetricMatrix a = SymmetricMatrix::from_dense(random_symmetric(200, Seed{9}));
  EigenOptions opt = kLanczos;
  opt.max_iter = 6;
  try {
    top_eigenpairs(a, 3, 0, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.best_residuals().size(), 0);
  }
}

TEST(SpectralNorm, SymmetricMatrixBothEnds) {
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 1, -7, 3, 2;
  EXPECT_NEAR(symmetric_spectral_norm(SymmetricMatrix::from_dense(d), kLanczos), 7.0, 1e-10);
  const Matrix m = random_symmetric(40, Seed{10});
  const auto ref = oracle::symmetric_eigen(m);
  EXPECT_NEAR(symmetric_spectral_norm(SymmetricMatrix::from_dense(m), kLanczos),
              std::max(std::abs(ref.values[0]), std::abs(ref.values[39])), 1e-8);
}

TEST(DenseOracle, SelfCheck) {
  const Matrix m = random_symmetric(20, Seed{11});
  const auto ref = oracle::symmetric_eigen(m);
  EXPECT_LE((m * ref.vectors - ref.vectors * ref.values.asDiagonal()).norm(), 1e-10);
  expect_orthonormal(ref.vectors, 1e-12);
  EXPECT_NEAR(ref.values.sum(), m.trace(), 1e-10);
}

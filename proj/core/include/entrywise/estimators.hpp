#pragma once

#include "entrywise/eigensolver.hpp"
#include "entrywise/ensembles.hpp"
#include "entrywise/matrix.hpp"
#include "entrywise/svd.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace entrywise {

struct LabelEstimate {
  std::vector<int> labels;  // +-1, sign of the eigenvector with sgn(0) = +1
  // sqrt(n) min_i s truth_i u_i, s chosen to minimize disagreements.
  std::optional<double> margin;
  // Zero-based position of the eigenvector in the descending spectrum.
  std::size_t source_eigen_index = 0;
  Vector vector;
  // Eigenvalues computed alongside (leading ones, descending).
  Vector eigenvalues;
  // The eigenvalue used is within 1e-8 * lambda_1 of its lower neighbour.
  bool ambiguous = false;
};

// Signs of the leading eigenvector of Y.
LabelEstimate z2_estimate(const SymmetricOperator& y, std::span<const int> truth = {},
                          const EigenOptions& options = {});

struct SbmOptions {
  // Use A - (d/n) 1 1^T with d the average degree, and its leading eigenvector.
  bool centered = false;
};

// Signs of the eigenvector for the second largest eigenvalue of A.
LabelEstimate sbm_estimate(const SymmetricOperator& a, std::span<const int> truth = {}, SbmOptions sbm = {},
                           const EigenOptions& options = {});

struct Sbm3Embedding {
  Matrix embedding;   // n x 2, eigenvectors 2 and 3
  Vector separation;  // per-node margin to the nearest wrong center
  Matrix alignment;   // Q = sgn(U^T U*)^T
  Vector eigenvalues;
};

// Rows of (u2, u3) compared against the aligned block centers of `spec`.
Sbm3Embedding sbm3_embed(const SymmetricOperator& a, const Sbm3& spec, const EigenOptions& options = {});

struct CompletionEstimate {
  SpectralSubspace left;
  SpectralSubspace right;
  Vector values;
  bool rank_deficient = false;

  // U diag(values) V^T.
  Matrix reconstruction() const;
  double entry(std::size_t i, std::size_t j) const;
  std::size_t rank() const { return static_cast<std::size_t>(values.size()); }
};

CompletionEstimate nmc_estimate(std::shared_ptr<const RectMatrix> m, std::size_t r, const EigenOptions& options = {});
CompletionEstimate nmc_estimate(const RectMatrix& m, std::size_t r, const EigenOptions& options = {});

// A U* (Lambda*)^{-1}, one matrix-vector product per column.
Matrix linearize(const SymmetricOperator& a, const PopulationModel& pop);

}  // namespace entrywise

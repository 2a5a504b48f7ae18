#include "entrywise/eigensolver.hpp"

#include "entrywise/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace entrywise {

namespace {

// Start vectors come from this fixed stream, so results depend only on A.
constexpr std::uint64_t kStartKey = 0x243F6A8885A308D3ull;

Vector random_vector(Rng& rng, std::size_t n) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

struct RitzPairs {
  Vector values;   // descending
  Matrix vectors;  // eigenvectors of T, columns matching values
};

RitzPairs tridiagonal_eigen(const std::vector<double>& alpha, const std::vector<double>& beta, std::size_t m) {
  Vector diag = Eigen::Map<const Vector>(alpha.data(), static_cast<Eigen::Index>(m));
  Vector sub(static_cast<Eigen::Index>(m > 0 ? m - 1 : 0));
  for (std::size_t i = 0; i + 1 < m; ++i) sub[i] = beta[i];
  RitzPairs out;
  if (m == 1) {
    out.values = diag;
    out.vectors = Matrix::Ones(1, 1);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

struct Candidate {
  double value;
  Vector vector;
};

SpectralSubspace assemble(const SymmetricOperator& a, std::vector<Candidate> candidates, std::size_t k,
                          std::size_t window_start, double norm_estimate, std::size_t matvecs) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
  const std::size_t n = a.dim();
  SpectralSubspace out;
  out.window_start = window_start;
  out.values.resize(static_cast<Eigen::Index>(k));
  out.basis.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  out.residuals.resize(static_cast<Eigen::Index>(k));
  Vector av(n);
  for (std::size_t i = 0; i < k; ++i) {
    const Candidate& c = candidates[window_start + i];
    out.values[i] = c.value;
    out.basis.col(i) = c.vector;
    a.apply(c.vector.data(), av.data());
    out.residuals[i] = (av - c.value * c.vector).norm();
  }
  const double tie_tol = 1e-12 * std::max(norm_estimate, std::numeric_limits<double>::min());
  for (std::size_t i = 0; i + 1 < candidates.size() && i < window_start + k; ++i)
    if (i + 1 >= window_start && candidates[i].value - candidates[i + 1].value <= tie_tol) out.has_ties = true;
  out.norm_estimate = norm_estimate;
  out.matvecs = matvecs + k;
  return out;
}

SpectralSubspace dense_solve(const SymmetricOperator& a, std::size_t k, std::size_t window_start) {
  const std::size_t n = a.dim();
  Matrix m = a.to_dense();
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", Vector());
  const Vector& ev = es.eigenvalues();
  const double norm = n == 0 ? 0.0 : std::max(std::abs(ev[0]), std::abs(ev[n - 1]));
  std::vector<Candidate> candidates;
  const std::size_t want = std::min(n, window_start + k + 1);
  candidates.reserve(want);
  for (std::size_t i = 0; i < want; ++i)
    candidates.push_back({ev[n - 1 - i], es.eigenvectors().col(n - 1 - i)});
  return assemble(a, std::move(candidates), k, window_start, norm, n);
}

class Lanczos {
 public:
  Lanczos(const SymmetricOperator& a, std::size_t want, const EigenOptions& options)
      : a_(a),
        n_(a.dim()),
        want_(want),
        tol_(options.tol),
        max_matvecs_(options.max_iter ? options.max_iter : 5 * a.dim()),
        rng_(Seed{kStartKey}),
        locked_(static_cast<Eigen::Index>(a.dim()), 0) {}

  std::vector<Candidate> run();
  double norm_estimate() const { return norm_; }
  std::size_t matvecs() const { return matvecs_; }

 private:
  void orthogonalize(Eigen::Ref<Vector> w, const Matrix& q, std::size_t m) const {
    for (int pass = 0; pass < 2; ++pass) {
      if (locked_.cols() > 0) w -= locked_ * (locked_.transpose() * w);
      if (m > 0) w -= q.leftCols(static_cast<Eigen::Index>(m)) * (q.leftCols(static_cast<Eigen::Index>(m)).transpose() * w);
    }
  }
  void lock(const Vector& value, const Matrix& vectors) {
    const Eigen::Index old = locked_.cols();
    locked_.conservativeResize(Eigen::NoChange, old + vectors.cols());
    locked_.rightCols(vectors.cols()) = vectors;
    for (Eigen::Index i = 0; i < value.size(); ++i) locked_values_.push_back(value[i]);
  }
  double kth_largest_locked(std::size_t kth) const {
    std::vector<double> v = locked_values_;
    std::sort(v.begin(), v.end(), std::greater<>());
    return v[kth - 1];
  }

  const SymmetricOperator& a_;
  std::size_t n_;
  std::size_t want_;
  double tol_;
  std::size_t max_matvecs_;
  Rng rng_;
  Matrix locked_;
  std::vector<double> locked_values_;
  // Number of locked pairs known to lead the spectrum (from capped restarts).
  std::size_t top_locked_ = 0;
  std::size_t matvecs_ = 0;
  double norm_ = 0.0;
};

std::vector<Candidate> Lanczos::run() {
  const std::size_t cap_default = std::max<std::size_t>(3 * want_ + 60, 200);
  Vector start = random_vector(rng_, n_);
  Vector best_residuals;
  bool restart_random = false;

  while (static_cast<std::size_t>(locked_.cols()) < n_) {
    const std::size_t free_dim = n_ - static_cast<std::size_t>(locked_.cols());
    const std::size_t cap = std::min(free_dim, cap_default);
    const std::size_t target = std::max<std::size_t>(want_ - std::min(want_, top_locked_), 1);

    Matrix q(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(cap));
    if (restart_random) start = random_vector(rng_, n_);
    orthogonalize(start, q, 0);
    double start_norm = start.norm();
    for (int attempt = 0; start_norm < 1e-8 && attempt < 8; ++attempt) {
      start = random_vector(rng_, n_);
      orthogonalize(start, q, 0);
      start_norm = start.norm();
    }
    q.col(0) = start / start_norm;

    std::vector<double> alpha, beta;
    double scale = 0.0;
    std::size_t m = 0;
    std::size_t next_check = target;
    Vector w(static_cast<Eigen::Index>(n_));

    for (;;) {
      a_.apply(q.col(static_cast<Eigen::Index>(m)).data(), w.data());
      ++matvecs_;
      const double al = q.col(static_cast<Eigen::Index>(m)).dot(w);
      alpha.push_back(al);
      w -= al * q.col(static_cast<Eigen::Index>(m));
      if (m > 0) w -= beta.back() * q.col(static_cast<Eigen::Index>(m - 1));
      orthogonalize(w, q, m + 1);
      const double b = w.norm();
      scale = std::max(scale, std::abs(al) + b + (beta.empty() ? 0.0 : beta.back()));
      ++m;

      const bool breakdown = b <= 1e-13 * scale || m == free_dim;
      const bool at_cap = m == cap;
      const bool exhausted = matvecs_ >= max_matvecs_;

      if (m >= next_check || breakdown || at_cap || exhausted) {
        const RitzPairs ritz = tridiagonal_eigen(alpha, beta, m);
        norm_ = std::max({norm_, std::abs(ritz.values[0]), std::abs(ritz.values[m - 1])});
        const std::size_t considered = std::min(target, m);
        best_residuals.resize(static_cast<Eigen::Index>(considered));
        std::size_t leading_converged = 0;
        bool all_converged = m >= target;
        for (std::size_t i = 0; i < considered; ++i) {
          const double est = breakdown ? 0.0 : b * std::abs(ritz.vectors(static_cast<Eigen::Index>(m - 1), i));
          best_residuals[i] = est;
          const bool ok = est <= tol_ * norm_;
          if (ok && leading_converged == i) ++leading_converged;
          all_converged &= ok;
        }
        const auto basis = q.leftCols(static_cast<Eigen::Index>(m));

        if (breakdown) {
          // The Krylov space is invariant: every Ritz pair is exact. Lock
          // them all and keep exploring the complement, which may hold
          // further copies of repeated eigenvalues.
          const bool previous_cover =
              locked_values_.size() >= want_ && ritz.values[0] <= kth_largest_locked(want_);
          lock(ritz.values, basis * ritz.vectors);
          if (previous_cover || static_cast<std::size_t>(locked_.cols()) >= n_) {
            std::vector<Candidate> out;
            for (std::size_t i = 0; i < locked_values_.size(); ++i) out.push_back({locked_values_[i], locked_.col(i)});
            return out;
          }
          restart_random = true;
          break;
        }
        if (all_converged) {
          std::vector<Candidate> out;
          for (std::size_t i = 0; i < locked_values_.size(); ++i) out.push_back({locked_values_[i], locked_.col(i)});
          const Matrix ritz_vectors = basis * ritz.vectors.leftCols(static_cast<Eigen::Index>(target));
          for (std::size_t i = 0; i < target; ++i) out.push_back({ritz.values[i], ritz_vectors.col(i)});
          return out;
        }
        if (exhausted) {
          throw ConvergenceError("Lanczos did not converge within " + std::to_string(max_matvecs_) +
                                     " matrix-vector products",
                                 best_residuals);
        }
        if (at_cap) {
          const Matrix ritz_vectors = basis * ritz.vectors.leftCols(static_cast<Eigen::Index>(considered));
          lock(ritz.values.head(static_cast<Eigen::Index>(leading_converged)),
               ritz_vectors.leftCols(static_cast<Eigen::Index>(leading_converged)));
          top_locked_ += leading_converged;
          start = ritz_vectors.rightCols(static_cast<Eigen::Index>(considered - leading_converged)).rowwise().sum();
          restart_random = false;
          break;
        }
        next_check = m + std::max<std::size_t>(4, m / 8);
      }
      beta.push_back(b);
      q.col(static_cast<Eigen::Index>(m)) = w / b;
    }
  }
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < locked_values_.size(); ++i) out.push_back({locked_values_[i], locked_.col(i)});
  return out;
}

class Negated final : public SymmetricOperator {
 public:
  explicit Negated(const SymmetricOperator& a) : a_(a) {}
  std::size_t dim() const override { return a_.dim(); }
  void apply(const double* x, double* y) const override {
    a_.apply(x, y);
    for (std::size_t i = 0; i < dim(); ++i) y[i] = -y[i];
  }

 private:
  const SymmetricOperator& a_;
};

}  // namespace

SpectralSubspace top_eigenpairs(const SymmetricOperator& a, std::size_t k, std::size_t window_start,
                                const EigenOptions& options) {
  const std::size_t n = a.dim();
  if (k == 0) throw std::invalid_argument("top_eigenpairs: k must be positive");
  if (k > n) throw std::invalid_argument("top_eigenpairs: k exceeds the dimension");
  if (window_start + k > n) throw std::invalid_argument("top_eigenpairs: window extends past the dimension");
  if (!(options.tol > 0.0)) throw std::invalid_argument("top_eigenpairs: tolerance must be positive");

  const bool dense = options.method == EigenMethod::kDense ||
                     (options.method == EigenMethod::kAuto && n <= options.dense_threshold);
  if (dense) return dense_solve(a, k, window_start);

  Lanczos solver(a, window_start + k, options);
  std::vector<Candidate> candidates = solver.run();
  if (candidates.size() < window_start + k)
    throw ConvergenceError("Lanczos produced too few eigenpairs", Vector());
  return assemble(a, std::move(candidates), k, window_start, solver.norm_estimate(), solver.matvecs());
}

double symmetric_spectral_norm(const SymmetricOperator& a, const EigenOptions& options) {
  if (a.dim() == 0) return 0.0;
  const double top = top_eigenpairs(a, 1, 0, options).values[0];
  const double bottom = -top_eigenpairs(Negated(a), 1, 0, options).values[0];
  return std::max(std::abs(top), std::abs(bottom));
}

}  // namespace entrywise

#include "entrywise/norms.hpp"

#include "entrywise/random.hpp"

#include <algorithm>
#include <cmath>

namespace entrywise {

double two_to_inf(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  return x.rowwise().norm().maxCoeff();
}

double max_abs(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  return x.cwiseAbs().maxCoeff();
}

NormSummary norms(const Matrix& x) {
  NormSummary out;
  if (x.size() == 0) return out;
  out.frobenius = x.norm();
  out.max_abs = max_abs(x);
  out.two_to_inf = two_to_inf(x);
  if (out.frobenius == 0.0) return out;

  Rng rng(Seed{0x13198A2E03707344ull});
  Vector v(x.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 20000; ++it) {
    const Vector y = x * v;
    out.spectral_lower_bound = std::max(out.spectral_lower_bound, y.norm());
    Vector z = x.transpose() * y;
    const double z_norm = z.norm();
    // ||X^T X v|| <= sigma_1^2 for unit v.
    const double next = std::sqrt(z_norm);
    if (z_norm == 0.0) {
      // v fell into the null space; restart from a fresh direction.
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
      v.normalize();
      continue;
    }
    v = z / z_norm;
    const bool done = std::abs(next - estimate) <= 1e-6 * next;
    estimate = next;
    if (done) break;
  }
  out.spectral_estimate = estimate;
  out.spectral_lower_bound = std::max(out.spectral_lower_bound, (x * v).norm());
  return out;
}

}  // namespace entrywise

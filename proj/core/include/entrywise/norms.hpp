#pragma once

#include "entrywise/matrix.hpp"

namespace entrywise {

struct NormSummary {
  // Power iteration on X^T X, stopped at relative change 1e-6.
  double spectral_estimate = 0.0;
  // ||X v|| for the final unit iterate; never exceeds the true norm.
  double spectral_lower_bound = 0.0;
  double frobenius = 0.0;
  double max_abs = 0.0;
  // Largest row l2 norm.
  double two_to_inf = 0.0;
};

NormSummary norms(const Matrix& x);

double two_to_inf(const Matrix& x);
double max_abs(const Matrix& x);

}  // namespace entrywise

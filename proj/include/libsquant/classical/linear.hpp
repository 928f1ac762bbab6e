#pragma once

#include <span>
#include <vector>

#include "libsquant/numerics/matrix.hpp"

namespace libsquant::classical {

/// y = a0 + sum_j a_j x_j
struct LinearModel {
  std::vector<double> coefficients;
  double intercept = 0.0;

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
};

/// Least squares through the normal equations of the centered problem. A
/// ridge jitter of 1e-10 is added to the Gram diagonal when it is singular.
/// Throws ShapeError when rows(x) != y.size() or x has no rows.
LinearModel fit_ols(const Matrix& x, std::span<const double> y);

/// Solves A z = b in place of b for symmetric positive definite A. Returns
/// false when a pivot is not positive relative to the largest diagonal entry.
bool cholesky_solve(Matrix a, std::span<double> b);

}  // namespace libsquant::classical

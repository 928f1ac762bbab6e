#include "libsquant/numerics/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "libsquant/errors.hpp"

namespace libsquant {

Matrix finite_diff_gradient(const ScalarFunction& f, const Matrix& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: step must be positive");
  Matrix probe = x;
  Matrix grad(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = probe[i];
    probe[i] = original + h;
    const double up = f(probe);
    probe[i] = original - h;
    const double down = f(probe);
    probe[i] = original;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw EvaluationError("finite_diff_gradient: non-finite function value");
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double relative_error(const Matrix& analytic, const Matrix& numeric, double floor) {
  if (!analytic.same_shape(numeric)) throw ShapeError("relative_error: shape mismatch");
  const double diff = (analytic - numeric).frobenius_norm();
  const double scale = analytic.frobenius_norm() + numeric.frobenius_norm();
  return diff / std::max(scale, floor);
}

}  // namespace libsquant

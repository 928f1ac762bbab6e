#pragma once

#include <functional>

#include "libsquant/numerics/matrix.hpp"

namespace libsquant {

using ScalarFunction = std::function<double(const Matrix&)>;

/// Central differences: entry i = (f(x + h e_i) - f(x - h e_i)) / 2h.
/// Throws std::invalid_argument for h <= 0 and EvaluationError if f is non-finite.
Matrix finite_diff_gradient(const ScalarFunction& f, const Matrix& x, double h = 1e-5);

/// ||a - b|| / max(||a|| + ||b||, floor). Zero when both are (near) zero.
double relative_error(const Matrix& analytic, const Matrix& numeric, double floor = 1e-12);

}  // namespace libsquant

#pragma once

#include <optional>
#include <string_view>

#include "libsquant/numerics/matrix.hpp"

namespace libsquant {

/// Transfer functions. LogSigmoid/TanSigmoid/Linear are the grid-search
/// candidates (logsig, tansig, purelin). Softmax acts per row and has no
/// elementwise derivative.
enum class Activation { Linear, LogSigmoid, TanSigmoid, Relu, Softmax };

std::string_view to_string(Activation kind) noexcept;
/// Accepts the canonical names plus purelin/sigmoid/tanh aliases, case-insensitive.
std::optional<Activation> parse_activation(std::string_view name) noexcept;

double sigmoid(double x) noexcept;

/// Scalar forward map. Softmax of a single value is 1.
double activate(Activation kind, double x) noexcept;
/// d activate / dx at pre-activation x. Throws std::logic_error for Softmax.
double activation_derivative(Activation kind, double x);
/// Same derivative expressed through the forward output y = activate(kind, x).
double activation_derivative_from_output(Activation kind, double y);

Matrix apply_activation(Activation kind, const Matrix& x);

}  // namespace libsquant

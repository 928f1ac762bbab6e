#include "libsquant/numerics/activation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace libsquant {

std::string_view to_string(Activation kind) noexcept {
  switch (kind) {
    case Activation::Linear: return "linear";
    case Activation::LogSigmoid: return "logsig";
    case Activation::TanSigmoid: return "tansig";
    case Activation::Relu: return "relu";
    case Activation::Softmax: return "softmax";
  }
  return "unknown";
}

std::optional<Activation> parse_activation(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "linear" || lower == "purelin") return Activation::Linear;
  if (lower == "logsig" || lower == "sigmoid" || lower == "log-sigmoid") {
    return Activation::LogSigmoid;
  }
  if (lower == "tansig" || lower == "tanh" || lower == "tangent-sigmoid") {
    return Activation::TanSigmoid;
  }
  if (lower == "relu") return Activation::Relu;
  if (lower == "softmax") return Activation::Softmax;
  return std::nullopt;
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double activate(Activation kind, double x) noexcept {
  switch (kind) {
    case Activation::Linear: return x;
    case Activation::LogSigmoid: return sigmoid(x);
    case Activation::TanSigmoid: return std::tanh(x);
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Softmax: return 1.0;
  }
  return x;
}

double activation_derivative(Activation kind, double x) {
  switch (kind) {
    case Activation::Linear: return 1.0;
    case Activation::LogSigmoid: {
      const double s = sigmoid(x);
      return s * (1.0 - s);
    }
    case Activation::TanSigmoid: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::Softmax: break;
  }
  throw std::logic_error("softmax has no elementwise derivative");
}

double activation_derivative_from_output(Activation kind, double y) {
  switch (kind) {
    case Activation::Linear: return 1.0;
    case Activation::LogSigmoid: return y * (1.0 - y);
    case Activation::TanSigmoid: return 1.0 - y * y;
    case Activation::Relu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::Softmax: break;
  }
  throw std::logic_error("softmax has no elementwise derivative");
}

Matrix apply_activation(Activation kind, const Matrix& x) {
  Matrix out = x;
  if (kind != Activation::Softmax) {
    for (auto& v : out.values()) v = activate(kind, v);
    return out;
  }
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    if (row.empty()) continue;
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (auto& v : row) {
      v = std::exp(v - peak);
      total += v;
    }
    for (auto& v : row) v /= total;
  }
  return out;
}

}  // namespace libsquant

#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "libsquant/numerics/activation.hpp"
#include "libsquant/numerics/matrix.hpp"

namespace libsquant::neural {

/// Valid (unpadded) 1-D convolution over a scalar signal followed by
/// non-overlapping max pooling. Output row j, column f is
/// max over the j-th pool window of g(kernel_f . x[i : i + width] + bias_f).
struct ConvLayerParams {
  Matrix kernels;  // filters x kernel_width
  Matrix bias;     // filters x 1
  std::size_t pool_width = 1;
  Activation activation = Activation::Relu;

  std::size_t filters() const noexcept { return kernels.rows(); }
  std::size_t kernel_width() const noexcept { return kernels.cols(); }
  /// Pooled length for a signal of `length` samples; throws ShapeError if too short.
  std::size_t output_length(std::size_t length) const;
  void validate() const;

  static constexpr std::array<std::string_view, 2> kTensorNames = {"kernels", "bias"};
  std::array<Matrix*, 2> tensors() noexcept { return {&kernels, &bias}; }
  std::array<const Matrix*, 2> tensors() const noexcept { return {&kernels, &bias}; }
};

struct ConvTrace {
  Matrix activated;                // (length - width + 1) x filters
  Matrix pooled;                   // pooled_length x filters
  std::vector<std::size_t> argmax; // pooled cell -> source row in `activated`
};

ConvTrace forward_conv1d(std::span<const double> signal, const ConvLayerParams& p);
/// Routes d_pooled to each window's argmax. Returns d signal.
std::vector<double> backward_conv1d(std::span<const double> signal, const ConvLayerParams& p,
                                    const ConvTrace& trace, const Matrix& d_pooled,
                                    ConvLayerParams& grads);

/// y = g(W x + b)
struct DenseParams {
  Matrix weights;  // out x in
  Matrix bias;     // out x 1
  Activation activation = Activation::Linear;

  std::size_t inputs() const noexcept { return weights.cols(); }
  std::size_t outputs() const noexcept { return weights.rows(); }
  void validate() const;

  static constexpr std::array<std::string_view, 2> kTensorNames = {"weights", "bias"};
  std::array<Matrix*, 2> tensors() noexcept { return {&weights, &bias}; }
  std::array<const Matrix*, 2> tensors() const noexcept { return {&weights, &bias}; }
};

std::vector<double> forward_dense(std::span<const double> x, const DenseParams& p);
/// Given the layer's input and output and dL/dy, accumulates grads and returns dL/dx.
std::vector<double> backward_dense(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> d_y, const DenseParams& p,
                                   DenseParams& grads);

/// Chained dense layers; returns every layer's output (activations[0] is the input).
std::vector<std::vector<double>> forward_mlp(std::span<const double> x,
                                             std::span<const DenseParams> layers);

}  // namespace libsquant::neural

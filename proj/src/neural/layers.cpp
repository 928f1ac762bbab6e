#include "libsquant/neural/layers.hpp"

#include <string>

#include "libsquant/errors.hpp"

namespace libsquant::neural {

std::size_t ConvLayerParams::output_length(std::size_t length) const {
  if (length < kernel_width()) {
    throw ShapeError("conv1d: sequence of length " + std::to_string(length) +
                     " is shorter than kernel width " + std::to_string(kernel_width()));
  }
  const std::size_t conv_len = length - kernel_width() + 1;
  if (conv_len < pool_width) {
    throw ShapeError("conv1d: pool width " + std::to_string(pool_width) +
                     " exceeds convolved length " + std::to_string(conv_len));
  }
  return conv_len / pool_width;
}

void ConvLayerParams::validate() const {
  if (kernels.rows() == 0 || kernels.cols() == 0) throw ShapeError("conv1d: empty kernel bank");
  if (bias.rows() != kernels.rows() || bias.cols() != 1) {
    throw ShapeError("conv1d: bias must be filters x 1");
  }
  if (pool_width == 0) throw ShapeError("conv1d: pool width must be >= 1");
}

ConvTrace forward_conv1d(std::span<const double> signal, const ConvLayerParams& p) {
  p.validate();
  const std::size_t pooled_len = p.output_length(signal.size());
  const std::size_t width = p.kernel_width();
  const std::size_t conv_len = signal.size() - width + 1;
  const std::size_t filters = p.filters();

  ConvTrace tr;
  tr.activated = Matrix(conv_len, filters);
  for (std::size_t i = 0; i < conv_len; ++i) {
    for (std::size_t f = 0; f < filters; ++f) {
      double s = p.bias[f];
      const auto kernel = p.kernels.row(f);
      for (std::size_t k = 0; k < width; ++k) s += kernel[k] * signal[i + k];
      tr.activated(i, f) = activate(p.activation, s);
    }
  }

  tr.pooled = Matrix(pooled_len, filters);
  tr.argmax.assign(pooled_len * filters, 0);
  for (std::size_t j = 0; j < pooled_len; ++j) {
    for (std::size_t f = 0; f < filters; ++f) {
      std::size_t best = j * p.pool_width;
      for (std::size_t i = best + 1; i < (j + 1) * p.pool_width; ++i) {
        if (tr.activated(i, f) > tr.activated(best, f)) best = i;
      }
      tr.pooled(j, f) = tr.activated(best, f);
      tr.argmax[j * filters + f] = best;
    }
  }
  return tr;
}

std::vector<double> backward_conv1d(std::span<const double> signal, const ConvLayerParams& p,
                                    const ConvTrace& tr, const Matrix& d_pooled,
                                    ConvLayerParams& grads) {
  if (!d_pooled.same_shape(tr.pooled)) throw ShapeError("conv1d: d_pooled shape");
  const std::size_t filters = p.filters();
  const std::size_t width = p.kernel_width();
  std::vector<double> d_signal(signal.size(), 0.0);
  for (std::size_t j = 0; j < tr.pooled.rows(); ++j) {
    for (std::size_t f = 0; f < filters; ++f) {
      const double upstream = d_pooled(j, f);
      if (upstream == 0.0) continue;
      const std::size_t i = tr.argmax[j * filters + f];
      const double d_pre =
          upstream * activation_derivative_from_output(p.activation, tr.activated(i, f));
      if (d_pre == 0.0) continue;
      auto g_kernel = grads.kernels.row(f);
      const auto kernel = p.kernels.row(f);
      for (std::size_t k = 0; k < width; ++k) {
        g_kernel[k] += d_pre * signal[i + k];
        d_signal[i + k] += d_pre * kernel[k];
      }
      grads.bias[f] += d_pre;
    }
  }
  return d_signal;
}

void DenseParams::validate() const {
  if (weights.rows() == 0 || weights.cols() == 0) throw ShapeError("dense: empty weights");
  if (bias.rows() != weights.rows() || bias.cols() != 1) {
    throw ShapeError("dense: bias must be outputs x 1");
  }
}

std::vector<double> forward_dense(std::span<const double> x, const DenseParams& p) {
  p.validate();
  if (x.size() != p.inputs()) {
    throw ShapeError("dense: input width " + std::to_string(x.size()) + " does not match " +
                     std::to_string(p.inputs()));
  }
  std::vector<double> y(p.bias.values().begin(), p.bias.values().end());
  gemv_acc(p.weights, x, y);
  for (auto& v : y) v = activate(p.activation, v);
  return y;
}

std::vector<double> backward_dense(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> d_y, const DenseParams& p,
                                   DenseParams& grads) {
  std::vector<double> d_pre(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    d_pre[k] = d_y[k] * activation_derivative_from_output(p.activation, y[k]);
    grads.bias[k] += d_pre[k];
  }
  ger_acc(grads.weights, d_pre, x);
  std::vector<double> d_x(x.size(), 0.0);
  gemv_t_acc(p.weights, d_pre, d_x);
  return d_x;
}

std::vector<std::vector<double>> forward_mlp(std::span<const double> x,
                                             std::span<const DenseParams> layers) {
  std::vector<std::vector<double>> activations;
  activations.reserve(layers.size() + 1);
  activations.emplace_back(x.begin(), x.end());
  for (const auto& layer : layers) {
    activations.push_back(forward_dense(activations.back(), layer));
  }
  return activations;
}

}  // namespace libsquant::neural

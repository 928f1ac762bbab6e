#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "libsquant/numerics/activation.hpp"
#include "libsquant/numerics/matrix.hpp"

namespace libsquant::neural {

// Sequences are T x width matrices, one row per time step. Traces keep the
// initial state in row 0, so a trace over T steps has T + 1 state rows.
//
// Each backward_* takes d_states (T x hidden): the loss gradient arriving at
// every h_t from outside the cell (usually only the last row is nonzero). It
// accumulates parameter gradients into `grads`, which must have the same
// layout as the parameters, and returns the gradient w.r.t. the inputs.

/// s_t = f(U x_t + W s_{t-1} [+ bias])
struct SimpleRnnParams {
  Matrix input_weights;      // U: hidden x input
  Matrix recurrent_weights;  // W: hidden x hidden
  Matrix bias;               // hidden x 1, used only when use_bias
  Activation activation = Activation::TanSigmoid;
  bool use_bias = false;

  static SimpleRnnParams zeros(std::size_t hidden, std::size_t input,
                               Activation activation = Activation::TanSigmoid);
  std::size_t hidden_size() const noexcept { return recurrent_weights.rows(); }
  std::size_t input_size() const noexcept { return input_weights.cols(); }
  void validate() const;

  static constexpr std::array<std::string_view, 3> kTensorNames = {"U", "W", "bias"};
  std::array<Matrix*, 3> tensors() noexcept { return {&input_weights, &recurrent_weights, &bias}; }
  std::array<const Matrix*, 3> tensors() const noexcept {
    return {&input_weights, &recurrent_weights, &bias};
  }
};

struct SimpleRnnTrace {
  Matrix states;  // (T+1) x hidden
};

SimpleRnnTrace forward_simple_rnn(const Matrix& inputs, const SimpleRnnParams& p,
                                  std::span<const double> initial_state = {});
Matrix backward_simple_rnn(const Matrix& inputs, const SimpleRnnParams& p,
                           const SimpleRnnTrace& trace, const Matrix& d_states,
                           SimpleRnnParams& grads);

/// Gate blocks act on the concatenation [h_{t-1}, x_t]: columns [0, hidden)
/// multiply h, the rest multiply x. `activation` is the candidate/cell-output
/// nonlinearity (tanh by default); gates are always logistic.
struct LstmParams {
  Matrix w_forget, w_input, w_output, w_cell;  // hidden x (hidden + input)
  Matrix b_forget, b_input, b_output, b_cell;  // hidden x 1
  Activation activation = Activation::TanSigmoid;

  static LstmParams zeros(std::size_t hidden, std::size_t input,
                          Activation activation = Activation::TanSigmoid);
  std::size_t hidden_size() const noexcept { return w_forget.rows(); }
  std::size_t input_size() const noexcept { return w_forget.cols() - w_forget.rows(); }
  void validate() const;

  static constexpr std::array<std::string_view, 8> kTensorNames = {
      "w_f", "w_i", "w_o", "w_c", "b_f", "b_i", "b_o", "b_c"};
  std::array<Matrix*, 8> tensors() noexcept {
    return {&w_forget, &w_input, &w_output, &w_cell, &b_forget, &b_input, &b_output, &b_cell};
  }
  std::array<const Matrix*, 8> tensors() const noexcept {
    return {&w_forget, &w_input, &w_output, &w_cell, &b_forget, &b_input, &b_output, &b_cell};
  }
};

struct LstmTrace {
  Matrix hidden;  // (T+1) x H
  Matrix cell;    // (T+1) x H
  Matrix forget, input, output, candidate;  // T x H, post-activation
  Matrix cell_activated;                    // T x H, activation(c_t)
};

LstmTrace forward_lstm(const Matrix& inputs, const LstmParams& p,
                       std::span<const double> initial_hidden = {},
                       std::span<const double> initial_cell = {});
Matrix backward_lstm(const Matrix& inputs, const LstmParams& p, const LstmTrace& trace,
                     const Matrix& d_hidden, LstmParams& grads);

/// r_t = sigma(w_r [h, x] + b_r), z_t = sigma(w_z [h, x] + b_z),
/// h~_t = f(w_h [r_t * h, x] + b_h), h_t = (1 - z_t) * h_{t-1} + z_t * h~_t.
struct GruParams {
  Matrix w_reset, w_update, w_candidate;  // hidden x (hidden + input)
  Matrix b_reset, b_update, b_candidate;  // hidden x 1
  Activation activation = Activation::TanSigmoid;

  static GruParams zeros(std::size_t hidden, std::size_t input,
                         Activation activation = Activation::TanSigmoid);
  std::size_t hidden_size() const noexcept { return w_reset.rows(); }
  std::size_t input_size() const noexcept { return w_reset.cols() - w_reset.rows(); }
  void validate() const;

  static constexpr std::array<std::string_view, 6> kTensorNames = {"w_r", "w_z", "w_h",
                                                                  "b_r", "b_z", "b_h"};
  std::array<Matrix*, 6> tensors() noexcept {
    return {&w_reset, &w_update, &w_candidate, &b_reset, &b_update, &b_candidate};
  }
  std::array<const Matrix*, 6> tensors() const noexcept {
    return {&w_reset, &w_update, &w_candidate, &b_reset, &b_update, &b_candidate};
  }
};

struct GruTrace {
  Matrix hidden;     // (T+1) x H
  Matrix reset;      // T x H
  Matrix update;     // T x H
  Matrix candidate;  // T x H, post-activation
};

GruTrace forward_gru(const Matrix& inputs, const GruParams& p,
                     std::span<const double> initial_hidden = {});
Matrix backward_gru(const Matrix& inputs, const GruParams& p, const GruTrace& trace,
                    const Matrix& d_hidden, GruParams& grads);

}  // namespace libsquant::neural

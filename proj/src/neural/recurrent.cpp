#include "libsquant/neural/recurrent.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "libsquant/errors.hpp"

namespace libsquant::neural {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

void check_gate_block(const Matrix& w, const Matrix& b, std::size_t hidden, std::size_t cols,
                      const char* name) {
  require(w.rows() == hidden && w.cols() == cols,
          std::string(name) + " must be hidden x (hidden + input)");
  require(b.rows() == hidden && b.cols() == 1, std::string(name) + " bias must be hidden x 1");
}

void check_inputs(const Matrix& inputs, std::size_t input_size, const char* cell) {
  require(inputs.cols() == input_size,
          std::string(cell) + ": step width " + std::to_string(inputs.cols()) +
              " does not match input size " + std::to_string(input_size));
}

void seed_state(Matrix& states, std::span<const double> initial, const char* what) {
  if (initial.empty()) return;
  require(initial.size() == states.cols(), std::string(what) + " has wrong length");
  std::copy(initial.begin(), initial.end(), states.row(0).begin());
}

void apply_in_place(Activation kind, std::span<double> v) {
  for (auto& x : v) x = activate(kind, x);
}

}  // namespace

// --- SimpleRNN ---------------------------------------------------------------

SimpleRnnParams SimpleRnnParams::zeros(std::size_t hidden, std::size_t input,
                                       Activation activation) {
  SimpleRnnParams p;
  p.input_weights = Matrix(hidden, input);
  p.recurrent_weights = Matrix(hidden, hidden);
  p.bias = Matrix(hidden, 1);
  p.activation = activation;
  return p;
}

void SimpleRnnParams::validate() const {
  const std::size_t h = recurrent_weights.rows();
  require(h > 0, "SimpleRNN: hidden size must be positive");
  require(recurrent_weights.cols() == h, "SimpleRNN: W must be hidden x hidden");
  require(input_weights.rows() == h, "SimpleRNN: U must have hidden rows");
  require(bias.rows() == h && bias.cols() == 1, "SimpleRNN: bias must be hidden x 1");
}

SimpleRnnTrace forward_simple_rnn(const Matrix& inputs, const SimpleRnnParams& p,
                                  std::span<const double> initial_state) {
  p.validate();
  check_inputs(inputs, p.input_size(), "SimpleRNN");
  const std::size_t steps = inputs.rows();
  SimpleRnnTrace trace{Matrix(steps + 1, p.hidden_size())};
  seed_state(trace.states, initial_state, "SimpleRNN initial state");
  for (std::size_t t = 0; t < steps; ++t) {
    auto out = trace.states.row(t + 1);
    if (p.use_bias) std::copy(p.bias.values().begin(), p.bias.values().end(), out.begin());
    gemv_acc(p.input_weights, inputs.row(t), out);
    gemv_acc(p.recurrent_weights, trace.states.row(t), out);
    apply_in_place(p.activation, out);
  }
  return trace;
}

Matrix backward_simple_rnn(const Matrix& inputs, const SimpleRnnParams& p,
                           const SimpleRnnTrace& trace, const Matrix& d_states,
                           SimpleRnnParams& grads) {
  const std::size_t steps = inputs.rows();
  const std::size_t h = p.hidden_size();
  require(d_states.rows() == steps && d_states.cols() == h, "SimpleRNN: d_states shape");
  Matrix d_inputs(steps, inputs.cols());
  std::vector<double> carry(h, 0.0);
  std::vector<double> d_pre(h);
  for (std::size_t t = steps; t-- > 0;) {
    auto state = trace.states.row(t + 1);
    auto external = d_states.row(t);
    for (std::size_t k = 0; k < h; ++k) {
      d_pre[k] = (external[k] + carry[k]) *
                 activation_derivative_from_output(p.activation, state[k]);
    }
    ger_acc(grads.input_weights, d_pre, inputs.row(t));
    ger_acc(grads.recurrent_weights, d_pre, trace.states.row(t));
    if (p.use_bias) {
      for (std::size_t k = 0; k < h; ++k) grads.bias[k] += d_pre[k];
    }
    std::fill(carry.begin(), carry.end(), 0.0);
    gemv_t_acc(p.recurrent_weights, d_pre, carry);
    gemv_t_acc(p.input_weights, d_pre, d_inputs.row(t));
  }
  return d_inputs;
}

// --- LSTM --------------------------------------------------------------------

LstmParams LstmParams::zeros(std::size_t hidden, std::size_t input, Activation activation) {
  LstmParams p;
  for (Matrix* w : {&p.w_forget, &p.w_input, &p.w_output, &p.w_cell}) {
    *w = Matrix(hidden, hidden + input);
  }
  for (Matrix* b : {&p.b_forget, &p.b_input, &p.b_output, &p.b_cell}) *b = Matrix(hidden, 1);
  p.activation = activation;
  return p;
}

void LstmParams::validate() const {
  const std::size_t h = w_forget.rows();
  require(h > 0 && w_forget.cols() > h, "LSTM: weights must be hidden x (hidden + input)");
  const std::size_t cols = w_forget.cols();
  check_gate_block(w_forget, b_forget, h, cols, "LSTM forget gate");
  check_gate_block(w_input, b_input, h, cols, "LSTM input gate");
  check_gate_block(w_output, b_output, h, cols, "LSTM output gate");
  check_gate_block(w_cell, b_cell, h, cols, "LSTM cell block");
}

LstmTrace forward_lstm(const Matrix& inputs, const LstmParams& p,
                       std::span<const double> initial_hidden,
                       std::span<const double> initial_cell) {
  p.validate();
  check_inputs(inputs, p.input_size(), "LSTM");
  const std::size_t steps = inputs.rows();
  const std::size_t h = p.hidden_size();
  LstmTrace tr;
  tr.hidden = Matrix(steps + 1, h);
  tr.cell = Matrix(steps + 1, h);
  tr.forget = Matrix(steps, h);
  tr.input = Matrix(steps, h);
  tr.output = Matrix(steps, h);
  tr.candidate = Matrix(steps, h);
  tr.cell_activated = Matrix(steps, h);
  seed_state(tr.hidden, initial_hidden, "LSTM initial hidden state");
  seed_state(tr.cell, initial_cell, "LSTM initial cell state");

  auto gate = [&](const Matrix& w, const Matrix& b, std::span<double> out, std::size_t t) {
    std::copy(b.values().begin(), b.values().end(), out.begin());
    gemv_acc(w, tr.hidden.row(t), out, 0);
    gemv_acc(w, inputs.row(t), out, h);
  };

  for (std::size_t t = 0; t < steps; ++t) {
    auto f = tr.forget.row(t);
    auto i = tr.input.row(t);
    auto o = tr.output.row(t);
    auto g = tr.candidate.row(t);
    gate(p.w_forget, p.b_forget, f, t);
    gate(p.w_input, p.b_input, i, t);
    gate(p.w_output, p.b_output, o, t);
    gate(p.w_cell, p.b_cell, g, t);
    auto c_prev = tr.cell.row(t);
    auto c = tr.cell.row(t + 1);
    auto ac = tr.cell_activated.row(t);
    auto hn = tr.hidden.row(t + 1);
    for (std::size_t k = 0; k < h; ++k) {
      f[k] = sigmoid(f[k]);
      i[k] = sigmoid(i[k]);
      o[k] = sigmoid(o[k]);
      g[k] = activate(p.activation, g[k]);
      c[k] = f[k] * c_prev[k] + i[k] * g[k];
      ac[k] = activate(p.activation, c[k]);
      hn[k] = o[k] * ac[k];
    }
  }
  return tr;
}

Matrix backward_lstm(const Matrix& inputs, const LstmParams& p, const LstmTrace& tr,
                     const Matrix& d_hidden, LstmParams& grads) {
  const std::size_t steps = inputs.rows();
  const std::size_t h = p.hidden_size();
  require(d_hidden.rows() == steps && d_hidden.cols() == h, "LSTM: d_hidden shape");
  Matrix d_inputs(steps, inputs.cols());
  std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0);
  std::vector<double> d_f(h), d_i(h), d_o(h), d_g(h);

  for (std::size_t t = steps; t-- > 0;) {
    auto f = tr.forget.row(t);
    auto i = tr.input.row(t);
    auto o = tr.output.row(t);
    auto g = tr.candidate.row(t);
    auto ac = tr.cell_activated.row(t);
    auto c_prev = tr.cell.row(t);
    auto external = d_hidden.row(t);
    for (std::size_t k = 0; k < h; ++k) {
      const double dh = external[k] + dh_next[k];
      const double dc =
          dc_next[k] + dh * o[k] * activation_derivative_from_output(p.activation, ac[k]);
      d_o[k] = dh * ac[k] * o[k] * (1.0 - o[k]);
      d_f[k] = dc * c_prev[k] * f[k] * (1.0 - f[k]);
      d_i[k] = dc * g[k] * i[k] * (1.0 - i[k]);
      d_g[k] = dc * i[k] * activation_derivative_from_output(p.activation, g[k]);
      dc_next[k] = dc * f[k];
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    auto h_prev = tr.hidden.row(t);
    auto x = inputs.row(t);
    auto dx = d_inputs.row(t);
    const std::array<std::tuple<const Matrix*, Matrix*, Matrix*, const std::vector<double>*>, 4>
        blocks = {{{&p.w_forget, &grads.w_forget, &grads.b_forget, &d_f},
                   {&p.w_input, &grads.w_input, &grads.b_input, &d_i},
                   {&p.w_output, &grads.w_output, &grads.b_output, &d_o},
                   {&p.w_cell, &grads.w_cell, &grads.b_cell, &d_g}}};
    for (const auto& [w, gw, gb, d] : blocks) {
      ger_acc(*gw, *d, h_prev, 0);
      ger_acc(*gw, *d, x, h);
      for (std::size_t k = 0; k < h; ++k) (*gb)[k] += (*d)[k];
      gemv_t_acc(*w, *d, dh_next, 0);
      gemv_t_acc(*w, *d, dx, h);
    }
  }
  return d_inputs;
}

// --- GRU ---------------------------------------------------------------------

GruParams GruParams::zeros(std::size_t hidden, std::size_t input, Activation activation) {
  GruParams p;
  for (Matrix* w : {&p.w_reset, &p.w_update, &p.w_candidate}) *w = Matrix(hidden, hidden + input);
  for (Matrix* b : {&p.b_reset, &p.b_update, &p.b_candidate}) *b = Matrix(hidden, 1);
  p.activation = activation;
  return p;
}

void GruParams::validate() const {
  const std::size_t h = w_reset.rows();
  require(h > 0 && w_reset.cols() > h, "GRU: weights must be hidden x (hidden + input)");
  const std::size_t cols = w_reset.cols();
  check_gate_block(w_reset, b_reset, h, cols, "GRU reset gate");
  check_gate_block(w_update, b_update, h, cols, "GRU update gate");
  check_gate_block(w_candidate, b_candidate, h, cols, "GRU candidate block");
}

GruTrace forward_gru(const Matrix& inputs, const GruParams& p,
                     std::span<const double> initial_hidden) {
  p.validate();
  check_inputs(inputs, p.input_size(), "GRU");
  const std::size_t steps = inputs.rows();
  const std::size_t h = p.hidden_size();
  GruTrace tr;
  tr.hidden = Matrix(steps + 1, h);
  tr.reset = Matrix(steps, h);
  tr.update = Matrix(steps, h);
  tr.candidate = Matrix(steps, h);
  seed_state(tr.hidden, initial_hidden, "GRU initial hidden state");

  std::vector<double> gated(h);
  for (std::size_t t = 0; t < steps; ++t) {
    auto h_prev = tr.hidden.row(t);
    auto x = inputs.row(t);
    auto r = tr.reset.row(t);
    auto z = tr.update.row(t);
    auto hc = tr.candidate.row(t);
    std::copy(p.b_reset.values().begin(), p.b_reset.values().end(), r.begin());
    std::copy(p.b_update.values().begin(), p.b_update.values().end(), z.begin());
    std::copy(p.b_candidate.values().begin(), p.b_candidate.values().end(), hc.begin());
    gemv_acc(p.w_reset, h_prev, r, 0);
    gemv_acc(p.w_reset, x, r, h);
    gemv_acc(p.w_update, h_prev, z, 0);
    gemv_acc(p.w_update, x, z, h);
    for (std::size_t k = 0; k < h; ++k) {
      r[k] = sigmoid(r[k]);
      z[k] = sigmoid(z[k]);
      gated[k] = r[k] * h_prev[k];
    }
    gemv_acc(p.w_candidate, gated, hc, 0);
    gemv_acc(p.w_candidate, x, hc, h);
    auto hn = tr.hidden.row(t + 1);
    for (std::size_t k = 0; k < h; ++k) {
      hc[k] = activate(p.activation, hc[k]);
      hn[k] = (1.0 - z[k]) * h_prev[k] + z[k] * hc[k];
    }
  }
  return tr;
}

Matrix backward_gru(const Matrix& inputs, const GruParams& p, const GruTrace& tr,
                    const Matrix& d_hidden, GruParams& grads) {
  const std::size_t steps = inputs.rows();
  const std::size_t h = p.hidden_size();
  require(d_hidden.rows() == steps && d_hidden.cols() == h, "GRU: d_hidden shape");
  Matrix d_inputs(steps, inputs.cols());
  std::vector<double> dh_next(h, 0.0), dh(h);
  std::vector<double> d_cand(h), d_z(h), d_r(h), gated(h), d_gated(h);

  for (std::size_t t = steps; t-- > 0;) {
    auto h_prev = tr.hidden.row(t);
    auto r = tr.reset.row(t);
    auto z = tr.update.row(t);
    auto hc = tr.candidate.row(t);
    auto x = inputs.row(t);
    auto dx = d_inputs.row(t);
    auto external = d_hidden.row(t);
    for (std::size_t k = 0; k < h; ++k) {
      dh[k] = external[k] + dh_next[k];
      d_cand[k] = dh[k] * z[k] * activation_derivative_from_output(p.activation, hc[k]);
      d_z[k] = dh[k] * (hc[k] - h_prev[k]) * z[k] * (1.0 - z[k]);
      gated[k] = r[k] * h_prev[k];
      dh_next[k] = dh[k] * (1.0 - z[k]);
    }
    ger_acc(grads.w_candidate, d_cand, gated, 0);
    ger_acc(grads.w_candidate, d_cand, x, h);
    for (std::size_t k = 0; k < h; ++k) grads.b_candidate[k] += d_cand[k];
    std::fill(d_gated.begin(), d_gated.end(), 0.0);
    gemv_t_acc(p.w_candidate, d_cand, d_gated, 0);
    gemv_t_acc(p.w_candidate, d_cand, dx, h);
    for (std::size_t k = 0; k < h; ++k) {
      d_r[k] = d_gated[k] * h_prev[k] * r[k] * (1.0 - r[k]);
      dh_next[k] += d_gated[k] * r[k];
    }
    for (const auto& [w, gw, gb, d] :
         {std::tuple{&p.w_update, &grads.w_update, &grads.b_update, &d_z},
          std::tuple{&p.w_reset, &grads.w_reset, &grads.b_reset, &d_r}}) {
      ger_acc(*gw, *d, h_prev, 0);
      ger_acc(*gw, *d, x, h);
      for (std::size_t k = 0; k < h; ++k) (*gb)[k] += (*d)[k];
      gemv_t_acc(*w, *d, dh_next, 0);
      gemv_t_acc(*w, *d, dx, h);
    }
  }
  return d_inputs;
}

}  // namespace libsquant::neural

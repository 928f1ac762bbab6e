#include "libsquant/neural/network.hpp"

#include <cmath>
#include <stdexcept>

#include "libsquant/errors.hpp"

namespace libsquant::neural {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

DenseParams make_dense(std::size_t in, std::size_t out, Activation act, SeededRng& rng) {
  DenseParams d;
  d.weights = init_weights(out, in, rng);
  d.bias = Matrix(out, 1);
  d.activation = act;
  return d;
}

std::span<const double> one_hot_block(const Matrix& steps) {
  return steps.row(0).subspan(1, kElementCount);
}

std::vector<double> mlp_input(const Matrix& steps) {
  std::vector<double> x;
  x.reserve(steps.rows() + kElementCount);
  for (std::size_t t = 0; t < steps.rows(); ++t) x.push_back(steps(t, 0));
  const auto hot = one_hot_block(steps);
  x.insert(x.end(), hot.begin(), hot.end());
  return x;
}

std::vector<double> column0(const Matrix& steps) {
  std::vector<double> s(steps.rows());
  for (std::size_t t = 0; t < steps.rows(); ++t) s[t] = steps(t, 0);
  return s;
}

/// Convolved-and-pooled intensity features with the one-hot block appended per step.
Matrix conv_cell_inputs(const ConvTrace& trace, const Matrix& steps) {
  const std::size_t filters = trace.pooled.cols();
  Matrix out(trace.pooled.rows(), filters + kElementCount);
  const auto hot = one_hot_block(steps);
  for (std::size_t j = 0; j < out.rows(); ++j) {
    auto row = out.row(j);
    const auto pooled = trace.pooled.row(j);
    std::copy(pooled.begin(), pooled.end(), row.begin());
    std::copy(hot.begin(), hot.end(), row.begin() + static_cast<std::ptrdiff_t>(filters));
  }
  return out;
}

struct CellRun {
  std::variant<std::monostate, SimpleRnnTrace, LstmTrace, GruTrace> trace;
  std::vector<double> last_hidden;
};

CellRun run_cell(const CellParams& cell, const Matrix& inputs) {
  CellRun run;
  auto take_last = [&](const Matrix& states) {
    const auto last = states.row(states.rows() - 1);
    run.last_hidden.assign(last.begin(), last.end());
  };
  std::visit(overloaded{
                 [](const std::monostate&) { throw std::logic_error("network has no cell"); },
                 [&](const SimpleRnnParams& p) {
                   auto tr = forward_simple_rnn(inputs, p);
                   take_last(tr.states);
                   run.trace = std::move(tr);
                 },
                 [&](const LstmParams& p) {
                   auto tr = forward_lstm(inputs, p);
                   take_last(tr.hidden);
                   run.trace = std::move(tr);
                 },
                 [&](const GruParams& p) {
                   auto tr = forward_gru(inputs, p);
                   take_last(tr.hidden);
                   run.trace = std::move(tr);
                 }},
             cell);
  return run;
}

Matrix backprop_cell(const CellParams& cell, const Matrix& inputs, const CellRun& run,
                     const Matrix& d_states, CellParams& grads) {
  return std::visit(
      overloaded{[](const std::monostate&) -> Matrix {
                   throw std::logic_error("network has no cell");
                 },
                 [&](const SimpleRnnParams& p) {
                   return backward_simple_rnn(inputs, p, std::get<SimpleRnnTrace>(run.trace),
                                              d_states, std::get<SimpleRnnParams>(grads));
                 },
                 [&](const LstmParams& p) {
                   return backward_lstm(inputs, p, std::get<LstmTrace>(run.trace), d_states,
                                        std::get<LstmParams>(grads));
                 },
                 [&](const GruParams& p) {
                   return backward_gru(inputs, p, std::get<GruTrace>(run.trace), d_states,
                                       std::get<GruParams>(grads));
                 }},
      cell);
}

template <class F>
void for_each_tensor(const NetworkParams& p, F&& visit) {
  if (p.conv) {
    for (std::size_t i = 0; i < p.conv->tensors().size(); ++i) {
      visit(std::string("conv.") + std::string(ConvLayerParams::kTensorNames[i]),
            p.conv->tensors()[i]);
    }
  }
  std::visit(overloaded{[](const std::monostate&) {},
                        [&](const auto& c) {
                          const auto ts = c.tensors();
                          for (std::size_t i = 0; i < ts.size(); ++i) {
                            visit("cell." + std::string(std::decay_t<decltype(c)>::kTensorNames[i]),
                                  ts[i]);
                          }
                        }},
             p.cell);
  for (std::size_t l = 0; l < p.hidden.size(); ++l) {
    const auto ts = p.hidden[l].tensors();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      visit("hidden" + std::to_string(l) + "." + std::string(DenseParams::kTensorNames[i]), ts[i]);
    }
  }
  const auto ts = p.head.tensors();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    visit("head." + std::string(DenseParams::kTensorNames[i]), ts[i]);
  }
}

}  // namespace

std::string_view to_string(Architecture a) noexcept {
  switch (a) {
    case Architecture::SimpleRnn: return "simplernn";
    case Architecture::Lstm: return "lstm";
    case Architecture::Gru: return "gru";
    case Architecture::ConvSimpleRnn: return "conv-simplernn";
    case Architecture::ConvLstm: return "conv-lstm";
    case Architecture::ConvGru: return "conv-gru";
    case Architecture::Mlp: return "mlp";
  }
  return "unknown";
}

std::optional<Architecture> parse_architecture(std::string_view name) noexcept {
  for (auto a : kAllArchitectures) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

bool is_convolutional(Architecture a) noexcept {
  return a == Architecture::ConvSimpleRnn || a == Architecture::ConvLstm ||
         a == Architecture::ConvGru;
}

bool is_recurrent(Architecture a) noexcept { return a != Architecture::Mlp; }

ModelSpec ModelSpec::defaults(Architecture a) {
  ModelSpec spec;
  spec.architecture = a;
  if (is_convolutional(a)) spec.conv = ConvConfig{};
  return spec;
}

void ModelSpec::validate() const {
  if (hidden_size == 0) throw std::invalid_argument("hidden size must be positive");
  if (conv.has_value() != is_convolutional(architecture)) {
    throw std::invalid_argument("conv config must be present exactly for Conv- architectures");
  }
  if (conv) {
    if (conv->filters == 0 || conv->kernel_width == 0 || conv->pool_width == 0) {
      throw std::invalid_argument("conv filters, kernel width and pool width must be positive");
    }
    if (conv->kernel_width > kIntensityCount) {
      throw std::invalid_argument("conv kernel width exceeds sequence length");
    }
    if (kIntensityCount - conv->kernel_width + 1 < conv->pool_width) {
      throw std::invalid_argument("conv pool width exceeds convolved length");
    }
    if (conv->activation == Activation::Softmax) {
      throw std::invalid_argument("softmax is not a valid conv activation");
    }
  }
  if (activation == Activation::Softmax) {
    throw std::invalid_argument("softmax is reserved for classification heads");
  }
  if (architecture == Architecture::Mlp) {
    for (auto width : mlp_hidden) {
      if (width == 0) throw std::invalid_argument("MLP layer widths must be positive");
    }
  }
  if (!(training.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (training.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (!(training.momentum >= 0.0 && training.momentum < 1.0)) {
    throw std::invalid_argument("momentum must lie in [0, 1)");
  }
}

std::vector<Matrix*> NetworkParams::tensors() {
  std::vector<Matrix*> out;
  for_each_tensor(*this, [&](const std::string&, const Matrix* m) {
    out.push_back(const_cast<Matrix*>(m));
  });
  return out;
}

std::vector<const Matrix*> NetworkParams::tensors() const {
  std::vector<const Matrix*> out;
  for_each_tensor(*this, [&](const std::string&, const Matrix* m) { out.push_back(m); });
  return out;
}

std::vector<std::string> NetworkParams::tensor_names() const {
  std::vector<std::string> out;
  for_each_tensor(*this, [&](const std::string& name, const Matrix*) { out.push_back(name); });
  return out;
}

NetworkParams NetworkParams::zeros_like() const {
  NetworkParams z = *this;
  for (Matrix* m : z.tensors()) m->fill(0.0);
  return z;
}

bool NetworkParams::all_finite() const {
  for (const Matrix* m : tensors()) {
    if (!m->all_finite()) return false;
  }
  return true;
}

std::size_t cell_input_size(const ModelSpec& spec) {
  return spec.conv ? spec.conv->filters + kElementCount : kStepWidth;
}

NetworkParams initialize(const ModelSpec& spec, SeededRng& rng) {
  spec.validate();
  NetworkParams p;
  const std::size_t h = spec.hidden_size;
  if (spec.conv) {
    ConvLayerParams conv;
    conv.kernels = init_weights(spec.conv->filters, spec.conv->kernel_width, rng);
    conv.bias = Matrix(spec.conv->filters, 1);
    conv.pool_width = spec.conv->pool_width;
    conv.activation = spec.conv->activation;
    p.conv = std::move(conv);
  }
  const std::size_t in = cell_input_size(spec);
  switch (spec.architecture) {
    case Architecture::SimpleRnn:
    case Architecture::ConvSimpleRnn: {
      auto c = SimpleRnnParams::zeros(h, in, spec.activation);
      c.input_weights = init_weights(h, in, rng);
      c.recurrent_weights = init_weights(h, h, rng);
      c.use_bias = spec.recurrent_bias;
      p.cell = std::move(c);
      break;
    }
    case Architecture::Lstm:
    case Architecture::ConvLstm: {
      auto c = LstmParams::zeros(h, in, spec.activation);
      for (Matrix* w : {&c.w_forget, &c.w_input, &c.w_output, &c.w_cell}) {
        *w = init_weights(h, h + in, rng);
      }
      c.b_forget.fill(spec.forget_bias);
      p.cell = std::move(c);
      break;
    }
    case Architecture::Gru:
    case Architecture::ConvGru: {
      auto c = GruParams::zeros(h, in, spec.activation);
      for (Matrix* w : {&c.w_reset, &c.w_update, &c.w_candidate}) {
        *w = init_weights(h, h + in, rng);
      }
      p.cell = std::move(c);
      break;
    }
    case Architecture::Mlp: {
      std::size_t width = kFeatureCount;
      for (auto next : spec.mlp_hidden) {
        p.hidden.push_back(make_dense(width, next, spec.activation, rng));
        width = next;
      }
      p.head = make_dense(width, 1, Activation::Linear, rng);
      return p;
    }
  }
  p.head = make_dense(h, 1, Activation::Linear, rng);
  return p;
}

double forward(const NetworkParams& params, const Matrix& steps) {
  if (std::holds_alternative<std::monostate>(params.cell)) {
    const auto acts = forward_mlp(mlp_input(steps), params.hidden);
    return forward_dense(acts.back(), params.head)[0];
  }
  CellRun run;
  if (params.conv) {
    const auto signal = column0(steps);
    const auto conv = forward_conv1d(signal, *params.conv);
    run = run_cell(params.cell, conv_cell_inputs(conv, steps));
  } else {
    run = run_cell(params.cell, steps);
  }
  return forward_dense(run.last_hidden, params.head)[0];
}

double accumulate_gradients(const NetworkParams& params, std::span<const EncodedSequence> batch,
                            NetworkParams& grads, double loss_scale) {
  if (batch.empty()) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const auto& sample : batch) {
    const Matrix& steps = sample.steps;
    if (std::holds_alternative<std::monostate>(params.cell)) {
      const auto acts = forward_mlp(mlp_input(steps), params.hidden);
      const auto y = forward_dense(acts.back(), params.head);
      const double err = y[0] - sample.target;
      loss += loss_scale * err * err * inv_n;
      const double d_y = loss_scale * 2.0 * err * inv_n;
      auto d = backward_dense(acts.back(), y, std::span<const double>(&d_y, 1), params.head,
                              grads.head);
      for (std::size_t l = params.hidden.size(); l-- > 0;) {
        d = backward_dense(acts[l], acts[l + 1], d, params.hidden[l], grads.hidden[l]);
      }
      continue;
    }

    std::vector<double> signal;
    ConvTrace conv;
    Matrix inputs;
    if (params.conv) {
      signal = column0(steps);
      conv = forward_conv1d(signal, *params.conv);
      inputs = conv_cell_inputs(conv, steps);
    }
    const Matrix& cell_in = params.conv ? inputs : steps;
    const CellRun run = run_cell(params.cell, cell_in);
    const auto y = forward_dense(run.last_hidden, params.head);
    const double err = y[0] - sample.target;
    loss += loss_scale * err * err * inv_n;
    const double d_y = loss_scale * 2.0 * err * inv_n;
    const auto d_h = backward_dense(run.last_hidden, y, std::span<const double>(&d_y, 1),
                                    params.head, grads.head);
    Matrix d_states(cell_in.rows(), run.last_hidden.size());
    std::copy(d_h.begin(), d_h.end(), d_states.row(d_states.rows() - 1).begin());
    const Matrix d_inputs = backprop_cell(params.cell, cell_in, run, d_states, grads.cell);
    if (params.conv) {
      Matrix d_pooled(conv.pooled.rows(), conv.pooled.cols());
      for (std::size_t j = 0; j < d_pooled.rows(); ++j) {
        for (std::size_t f = 0; f < d_pooled.cols(); ++f) d_pooled(j, f) = d_inputs(j, f);
      }
      backward_conv1d(signal, *params.conv, conv, d_pooled, *grads.conv);
    }
  }
  return loss;
}

BatchGradient backward(const NetworkParams& params, std::span<const EncodedSequence> batch,
                       double loss_scale) {
  BatchGradient out;
  out.gradients = params.zeros_like();
  out.loss = accumulate_gradients(params, batch, out.gradients, loss_scale);
  return out;
}

}  // namespace libsquant::neural

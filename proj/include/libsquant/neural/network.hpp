#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "libsquant/dataset/scaler.hpp"
#include "libsquant/neural/layers.hpp"
#include "libsquant/neural/recurrent.hpp"
#include "libsquant/numerics/rng.hpp"

namespace libsquant::neural {

enum class Architecture { SimpleRnn, Lstm, Gru, ConvSimpleRnn, ConvLstm, ConvGru, Mlp };

inline constexpr std::array<Architecture, 7> kAllArchitectures = {
    Architecture::SimpleRnn,     Architecture::Lstm,     Architecture::Gru,
    Architecture::ConvSimpleRnn, Architecture::ConvLstm, Architecture::ConvGru,
    Architecture::Mlp};

/// CLI names: simplernn, lstm, gru, conv-simplernn, conv-lstm, conv-gru, mlp.
std::string_view to_string(Architecture a) noexcept;
std::optional<Architecture> parse_architecture(std::string_view name) noexcept;
bool is_convolutional(Architecture a) noexcept;
bool is_recurrent(Architecture a) noexcept;

struct ConvConfig {
  std::size_t filters = 8;
  std::size_t kernel_width = 3;
  std::size_t pool_width = 2;
  Activation activation = Activation::Relu;

  friend bool operator==(const ConvConfig&, const ConvConfig&) = default;
};

struct TrainingConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 500;
  std::size_t batch_size = 4;
  std::uint64_t seed = 42;
  double momentum = 0.0;  // 0 = plain SGD

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

struct ModelSpec {
  Architecture architecture = Architecture::SimpleRnn;
  std::size_t hidden_size = 16;
  std::optional<ConvConfig> conv;  // present iff architecture is a Conv- variant
  /// Recurrent candidate/state nonlinearity, or MLP hidden-layer transfer function.
  Activation activation = Activation::TanSigmoid;
  std::vector<std::size_t> mlp_hidden = {16};
  /// SimpleRNN only: add a bias inside f(U x + W s). Off reproduces the bare recurrence.
  bool recurrent_bias = false;
  /// Initial LSTM forget-gate bias.
  double forget_bias = 1.0;
  TrainingConfig training;

  static ModelSpec defaults(Architecture a);
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

using CellParams = std::variant<std::monostate, SimpleRnnParams, LstmParams, GruParams>;

/// Every trainable tensor of one network. The same layout doubles as the
/// gradient container.
struct NetworkParams {
  std::optional<ConvLayerParams> conv;
  CellParams cell;
  std::vector<DenseParams> hidden;  // MLP hidden layers
  DenseParams head;                 // linear, 1 unit

  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;
  /// Dotted names aligned with tensors(), e.g. "cell.w_f", "head.weights".
  std::vector<std::string> tensor_names() const;
  NetworkParams zeros_like() const;
  bool all_finite() const;
};

/// Uniform-scaled weights, zero biases (LSTM forget bias from the spec).
NetworkParams initialize(const ModelSpec& spec, SeededRng& rng);

/// Width of the recurrent cell's input for a spec (7, or filters + 6 after the conv front-end).
std::size_t cell_input_size(const ModelSpec& spec);

/// Normalized prediction for one encoded sequence (kIntensityCount x kStepWidth).
double forward(const NetworkParams& params, const Matrix& steps);

struct BatchGradient {
  double loss = 0.0;  // loss_scale * mean squared error over the batch
  NetworkParams gradients;
};

/// Exact reverse-mode gradient of loss_scale * mean((prediction - target)^2).
BatchGradient backward(const NetworkParams& params, std::span<const EncodedSequence> batch,
                       double loss_scale = 1.0);
/// Same, accumulating into an existing zeroed gradient container.
double accumulate_gradients(const NetworkParams& params, std::span<const EncodedSequence> batch,
                            NetworkParams& grads, double loss_scale = 1.0);

}  // namespace libsquant::neural

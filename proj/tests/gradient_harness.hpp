#pragma once

#include <array>
#include <vector>

#include "libsquant/dataset/scaler.hpp"
#include "libsquant/neural/network.hpp"
#include "libsquant/numerics/gradient_check.hpp"

namespace libsquant::testkit {

/// Small random encoded sequences: column 0 uniform in [-2, 2], one random
/// element hot, targets in [0, 1].
inline std::vector<EncodedSequence> random_batch(std::size_t count, SeededRng& rng) {
  std::vector<EncodedSequence> batch;
  for (std::size_t b = 0; b < count; ++b) {
    EncodedSequence s;
    s.steps = Matrix(kIntensityCount, kStepWidth, 0.0);
    s.element = kAllElements[rng.index(kElementCount)];
    for (std::size_t t = 0; t < kIntensityCount; ++t) {
      s.steps(t, 0) = rng.uniform(-2.0, 2.0);
      s.steps(t, 1 + ordinal(s.element)) = 1.0;
    }
    s.target = rng.uniform01();
    batch.push_back(std::move(s));
  }
  return batch;
}

/// Compact architecture variant for gradient checks. The draw index cycles
/// the transfer function and, for SimpleRNN, the optional bias.
inline neural::ModelSpec gradient_spec(neural::Architecture a, std::size_t draw) {
  using neural::Architecture;
  neural::ModelSpec spec = neural::ModelSpec::defaults(a);
  spec.hidden_size = 4;
  constexpr std::array<Activation, 3> acts = {Activation::TanSigmoid, Activation::LogSigmoid,
                                              Activation::Linear};
  spec.activation = acts[draw % acts.size()];
  spec.recurrent_bias = draw % 2 == 1;
  spec.forget_bias = 0.5;
  if (spec.conv) {
    spec.conv->filters = 3;
    spec.conv->kernel_width = 3;
    spec.conv->pool_width = 2;
    spec.conv->activation = draw % 2 == 0 ? Activation::Relu : Activation::TanSigmoid;
  }
  if (a == Architecture::Mlp) spec.mlp_hidden = {5, 3};
  spec.training.seed = draw;
  return spec;
}

struct GradientCheckResult {
  double relative_error = 0.0;
  std::size_t parameters = 0;
};

/// Compares backward() with central differences of the batch loss over every
/// parameter, flattened into one vector.
inline GradientCheckResult check_gradients(neural::Architecture a, std::size_t draw) {
  const neural::ModelSpec spec = gradient_spec(a, draw);
  SeededRng rng(SeededRng::derive(1000 + draw, static_cast<std::uint64_t>(a)));
  neural::NetworkParams params = neural::initialize(spec, rng);
  // Move every tensor (biases included) off its zero initialization.
  for (Matrix* t : params.tensors()) {
    for (double& v : t->values()) v += rng.uniform(-0.3, 0.3);
  }
  const auto batch = random_batch(3, rng);

  const neural::BatchGradient analytic = neural::backward(params, batch);
  std::vector<double> an;
  std::vector<double> fd;
  const auto tensors = params.tensors();
  const auto grads = analytic.gradients.tensors();
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    const Matrix original = *tensors[k];
    auto loss_at = [&](const Matrix& value) {
      neural::NetworkParams probe = params;
      *probe.tensors()[k] = value;
      double loss = 0.0;
      for (const auto& s : batch) {
        const double e = neural::forward(probe, s.steps) - s.target;
        loss += e * e;
      }
      return loss / static_cast<double>(batch.size());
    };
    const Matrix numeric = finite_diff_gradient(loss_at, original, 1e-6);
    an.insert(an.end(), grads[k]->values().begin(), grads[k]->values().end());
    fd.insert(fd.end(), numeric.values().begin(), numeric.values().end());
  }
  const std::size_t n = an.size();
  return {relative_error(Matrix(n, 1, an), Matrix(n, 1, fd)), n};
}

}  // namespace libsquant::testkit

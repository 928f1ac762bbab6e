#pragma once

#include <span>
#include <vector>

#include "libsquant/dataset/dataset.hpp"
#include "libsquant/dataset/scaler.hpp"
#include "libsquant/neural/network.hpp"

namespace libsquant::neural {

struct EpochLoss {
  std::size_t epoch = 0;  // 1-based
  double train_mse = 0.0;
  double valid_mse = 0.0;  // NaN when no validation set was given
};

/// A fitted network together with the scaler it was trained under.
struct TrainedModel {
  ModelSpec spec;
  NetworkParams params;
  Scaler scaler;
  std::vector<EpochLoss> history;
  std::size_t best_epoch = 0;  // 0 = initial parameters

  double predict_normalized(const Matrix& steps) const { return forward(params, steps); }
  /// Concentration in weight-percent.
  double predict(const SpectralRecord& record) const;
  std::vector<double> predict(const Dataset& dataset) const;
};

/// Minibatch SGD on mean squared error. Returns the parameters of the epoch
/// with the lowest validation MSE (training MSE when `valid` is empty).
/// Throws TrainingDivergedError if a loss becomes non-finite.
TrainedModel train(const ModelSpec& spec, const Scaler& scaler,
                   std::span<const EncodedSequence> train_set,
                   std::span<const EncodedSequence> valid_set);
/// Fits the scaler on `train_set`, encodes both sets, then trains.
TrainedModel train(const ModelSpec& spec, const Dataset& train_set, const Dataset& valid_set);

double evaluate_mse(const NetworkParams& params, std::span<const EncodedSequence> data);

struct ActivationScore {
  Activation activation;
  double valid_mse;
};

struct GridSearchResult {
  ModelSpec best;
  std::vector<ActivationScore> scores;  // candidate order
  TrainedModel model;                   // the winning candidate's trained model
};

/// Trains one model per candidate transfer function and keeps the lowest
/// validation MSE; ties go to the earlier candidate. A candidate that
/// diverges scores +inf; TrainingDivergedError is rethrown only if all do.
/// Throws std::invalid_argument on an empty candidate list.
GridSearchResult grid_search_activation(const ModelSpec& spec,
                                        std::span<const Activation> candidates,
                                        const Scaler& scaler,
                                        std::span<const EncodedSequence> train_set,
                                        std::span<const EncodedSequence> valid_set);

inline constexpr std::array<Activation, 3> kTransferCandidates = {
    Activation::Linear, Activation::LogSigmoid, Activation::TanSigmoid};

}  // namespace libsquant::neural

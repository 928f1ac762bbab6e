#include "libsquant/neural/trainer.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "libsquant/errors.hpp"

namespace libsquant::neural {

double TrainedModel::predict(const SpectralRecord& record) const {
  return scaler.denormalize_target(predict_normalized(encode(record, scaler).steps));
}

std::vector<double> TrainedModel::predict(const Dataset& dataset) const {
  std::vector<double> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.records) out.push_back(predict(r));
  return out;
}

double evaluate_mse(const NetworkParams& params, std::span<const EncodedSequence> data) {
  if (data.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (const auto& s : data) {
    const double err = forward(params, s.steps) - s.target;
    total += err * err;
  }
  return total / static_cast<double>(data.size());
}

TrainedModel train(const ModelSpec& spec, const Scaler& scaler,
                   std::span<const EncodedSequence> train_set,
                   std::span<const EncodedSequence> valid_set) {
  spec.validate();
  if (train_set.empty()) throw std::invalid_argument("train: empty training set");
  const auto& cfg = spec.training;

  SeededRng init_rng(SeededRng::derive(cfg.seed, 0));
  SeededRng order_rng(SeededRng::derive(cfg.seed, 1));

  TrainedModel model;
  model.spec = spec;
  model.scaler = scaler;
  model.params = initialize(spec, init_rng);
  if (cfg.epochs == 0) return model;

  NetworkParams current = model.params;
  NetworkParams grads = current.zeros_like();
  NetworkParams velocity = current.zeros_like();
  const auto params = current.tensors();
  const auto grad_tensors = grads.tensors();
  const auto vel_tensors = velocity.tensors();

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<EncodedSequence> batch;
  batch.reserve(cfg.batch_size);

  double best_score = std::numeric_limits<double>::infinity();
  const bool has_valid = !valid_set.empty();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(train_set[order[k]]);
      for (Matrix* g : grad_tensors) g->fill(0.0);
      const double loss = accumulate_gradients(current, batch, grads);
      if (!std::isfinite(loss)) {
        throw TrainingDivergedError(
            "training diverged at epoch " + std::to_string(epoch) + " (non-finite loss)", epoch);
      }
      for (std::size_t t = 0; t < params.size(); ++t) {
        auto p = params[t]->values();
        auto g = grad_tensors[t]->values();
        if (cfg.momentum > 0.0) {
          auto v = vel_tensors[t]->values();
          for (std::size_t i = 0; i < p.size(); ++i) {
            v[i] = cfg.momentum * v[i] - cfg.learning_rate * g[i];
            p[i] += v[i];
          }
        } else {
          for (std::size_t i = 0; i < p.size(); ++i) p[i] -= cfg.learning_rate * g[i];
        }
      }
    }

    EpochLoss record{epoch, evaluate_mse(current, train_set),
                     has_valid ? evaluate_mse(current, valid_set)
                               : std::numeric_limits<double>::quiet_NaN()};
    if (!std::isfinite(record.train_mse) || (has_valid && !std::isfinite(record.valid_mse))) {
      throw TrainingDivergedError(
          "training diverged at epoch " + std::to_string(epoch) + " (non-finite loss)", epoch);
    }
    model.history.push_back(record);
    const double score = has_valid ? record.valid_mse : record.train_mse;
    if (score < best_score) {
      best_score = score;
      model.best_epoch = epoch;
      model.params = current;
    }
  }
  return model;
}

TrainedModel train(const ModelSpec& spec, const Dataset& train_set, const Dataset& valid_set) {
  const Scaler scaler = Scaler::fit(train_set);
  const auto train_seq = encode_all(train_set, scaler);
  const auto valid_seq = encode_all(valid_set, scaler);
  return train(spec, scaler, train_seq, valid_seq);
}

GridSearchResult grid_search_activation(const ModelSpec& spec,
                                        std::span<const Activation> candidates,
                                        const Scaler& scaler,
                                        std::span<const EncodedSequence> train_set,
                                        std::span<const EncodedSequence> valid_set) {
  if (candidates.empty()) throw std::invalid_argument("grid search needs at least one candidate");
  std::optional<GridSearchResult> result;
  std::optional<TrainingDivergedError> last_failure;
  std::vector<ActivationScore> scores;
  double best = std::numeric_limits<double>::infinity();
  for (Activation candidate : candidates) {
    ModelSpec trial = spec;
    trial.activation = candidate;
    try {
      TrainedModel model = train(trial, scaler, train_set, valid_set);
      const double score = valid_set.empty() ? evaluate_mse(model.params, train_set)
                                             : evaluate_mse(model.params, valid_set);
      scores.push_back({candidate, score});
      if (!result || score < best) {
        best = score;
        result = GridSearchResult{trial, {}, std::move(model)};
      }
    } catch (const TrainingDivergedError& e) {
      scores.push_back({candidate, std::numeric_limits<double>::infinity()});
      last_failure = e;
    }
  }
  if (!result) throw *last_failure;
  result->scores = std::move(scores);
  return std::move(*result);
}

}  // namespace libsquant::neural

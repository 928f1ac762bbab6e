#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "libsquant/classical/ensemble.hpp"
#include "libsquant/classical/knn.hpp"
#include "libsquant/classical/svr.hpp"
#include "libsquant/classical/tree.hpp"
#include "libsquant/dataset/dataset.hpp"
#include "libsquant/dataset/scaler.hpp"
#include "libsquant/neural/network.hpp"
#include "libsquant/neural/trainer.hpp"

namespace libsquant::evaluation {

/// The 13-model default suite: six recurrent/conv-recurrent networks, MLP,
/// then linear, svr, tree, forest, gbr, knn.
const std::vector<std::string>& default_suite();
/// default_suite() plus the kernel variants svr-rbf and svr-poly.
const std::vector<std::string>& known_models();
bool is_known_model(std::string_view name);

/// Hyperparameters for every model in the registry. Unset neural overrides
/// keep the architecture defaults.
struct ModelSettings {
  std::optional<std::size_t> epochs;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> hidden_size;
  std::optional<double> momentum;

  double svr_c = 10.0;
  double svr_epsilon = 0.01;
  double svr_gamma = 0.0;  // 0 = 1 / n_features
  int svr_degree = 3;
  double svr_coef = 1.0;

  classical::TreeOptions tree{6, 1, 0};
  classical::ForestOptions forest{};
  classical::GbrOptions gbr{};

  std::size_t knn_k = 3;
  classical::KnnWeighting knn_weighting = classical::KnnWeighting::InverseDistance;
};

/// Neural spec for a registry name with overrides applied and the training
/// seed set. Throws std::invalid_argument for a non-neural name.
neural::ModelSpec neural_spec(std::string_view name, const ModelSettings& settings,
                              std::uint64_t seed);

/// A model fitted on one training partition. Predictions are in weight-percent.
class FittedModel {
 public:
  virtual ~FittedModel() = default;

  virtual const std::string& name() const = 0;
  virtual double predict(const SpectralRecord& record) const = 0;
  std::vector<double> predict(const Dataset& data) const;

  virtual const Scaler& scaler() const = 0;
  /// Per-epoch losses on the normalized scale; one row for closed-form fits.
  virtual std::vector<neural::EpochLoss> history() const = 0;
  virtual nlohmann::json hyperparameters() const = 0;
  /// Self-describing model file contents.
  virtual nlohmann::json to_json() const = 0;
};

/// Fits the scaler on `train` and then the named model. `seed` drives
/// weight initialization, batch order and forest resampling. Throws
/// std::invalid_argument for an unknown name.
std::unique_ptr<FittedModel> fit_model(std::string_view name, const Dataset& train,
                                       const ModelSettings& settings, std::uint64_t seed);

}  // namespace libsquant::evaluation

#pragma once

#include <string>

#include "json.hpp"
#include "libsquant/neural/trainer.hpp"

namespace libsquant::neural {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const nlohmann::json& j);

nlohmann::json scaler_to_json(const Scaler& scaler);
Scaler scaler_from_json(const nlohmann::json& j);

/// {"format": "libsquant-model", "version": 1, "spec", "params", "scaler", "history", ...}.
/// Doubles are written with round-trip precision.
nlohmann::json model_to_json(const TrainedModel& model);
/// Throws std::runtime_error on a wrong format/version or mismatched tensor shapes.
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace libsquant::neural

#include "libsquant/neural/serialization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace libsquant::neural {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Activation activation_from(const json& j) {
  const auto name = j.get<std::string>();
  const auto a = parse_activation(name);
  if (!a) throw std::runtime_error("unknown activation '" + name + "'");
  return *a;
}

json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()},
          {"data", std::vector<double>(m.values().begin(), m.values().end())}};
}

}  // namespace

json spec_to_json(const ModelSpec& spec) {
  json j;
  j["architecture"] = std::string(to_string(spec.architecture));
  j["hidden_size"] = spec.hidden_size;
  j["activation"] = std::string(to_string(spec.activation));
  if (spec.conv) {
    j["conv"] = {{"filters", spec.conv->filters},
                 {"kernel_width", spec.conv->kernel_width},
                 {"pool_width", spec.conv->pool_width},
                 {"activation", std::string(to_string(spec.conv->activation))}};
  } else {
    j["conv"] = nullptr;
  }
  j["mlp_hidden"] = spec.mlp_hidden;
  j["recurrent_bias"] = spec.recurrent_bias;
  j["forget_bias"] = spec.forget_bias;
  j["training"] = {{"learning_rate", spec.training.learning_rate},
                   {"epochs", spec.training.epochs},
                   {"batch_size", spec.training.batch_size},
                   {"seed", spec.training.seed},
                   {"momentum", spec.training.momentum}};
  return j;
}

ModelSpec spec_from_json(const json& j) {
  const auto name = j.at("architecture").get<std::string>();
  const auto arch = parse_architecture(name);
  if (!arch) throw std::runtime_error("unknown architecture '" + name + "'");
  ModelSpec spec = ModelSpec::defaults(*arch);
  spec.hidden_size = j.at("hidden_size").get<std::size_t>();
  spec.activation = activation_from(j.at("activation"));
  if (j.at("conv").is_null()) {
    spec.conv.reset();
  } else {
    const auto& c = j.at("conv");
    spec.conv = ConvConfig{c.at("filters").get<std::size_t>(), c.at("kernel_width").get<std::size_t>(),
                           c.at("pool_width").get<std::size_t>(), activation_from(c.at("activation"))};
  }
  spec.mlp_hidden = j.at("mlp_hidden").get<std::vector<std::size_t>>();
  spec.recurrent_bias = j.at("recurrent_bias").get<bool>();
  spec.forget_bias = j.at("forget_bias").get<double>();
  const auto& t = j.at("training");
  spec.training.learning_rate = t.at("learning_rate").get<double>();
  spec.training.epochs = t.at("epochs").get<std::size_t>();
  spec.training.batch_size = t.at("batch_size").get<std::size_t>();
  spec.training.seed = t.at("seed").get<std::uint64_t>();
  spec.training.momentum = t.at("momentum").get<double>();
  spec.validate();
  return spec;
}

json scaler_to_json(const Scaler& scaler) {
  return {{"intensity_means", scaler.means()},
          {"intensity_stds", scaler.stds()},
          {"target_min", scaler.target_min()},
          {"target_max", scaler.target_max()}};
}

Scaler scaler_from_json(const json& j) {
  return Scaler(j.at("intensity_means").get<std::array<double, kIntensityCount>>(),
                j.at("intensity_stds").get<std::array<double, kIntensityCount>>(),
                j.at("target_min").get<double>(), j.at("target_max").get<double>());
}

json model_to_json(const TrainedModel& model) {
  json j;
  j["format"] = "libsquant-model";
  j["version"] = kModelFormatVersion;
  j["spec"] = spec_to_json(model.spec);
  json params = json::object();
  const auto names = model.params.tensor_names();
  const auto tensors = model.params.tensors();
  for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = matrix_to_json(*tensors[i]);
  j["params"] = std::move(params);
  j["scaler"] = scaler_to_json(model.scaler);
  json history = json::array();
  for (const auto& h : model.history) {
    history.push_back({{"epoch", h.epoch},
                       {"train_mse", number_or_null(h.train_mse)},
                       {"valid_mse", number_or_null(h.valid_mse)}});
  }
  j["history"] = std::move(history);
  j["best_epoch"] = model.best_epoch;
  return j;
}

TrainedModel model_from_json(const json& j) {
  if (j.value("format", "") != "libsquant-model") throw std::runtime_error("not a libsquant model");
  if (j.value("version", 0) != kModelFormatVersion) {
    throw std::runtime_error("unsupported model format version");
  }
  TrainedModel model;
  model.spec = spec_from_json(j.at("spec"));
  SeededRng shape_rng(0);
  model.params = initialize(model.spec, shape_rng);
  const auto names = model.params.tensor_names();
  const auto tensors = model.params.tensors();
  const auto& params = j.at("params");
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& t = params.at(names[i]);
    Matrix m(t.at("rows").get<std::size_t>(), t.at("cols").get<std::size_t>(),
             t.at("data").get<std::vector<double>>());
    if (!m.same_shape(*tensors[i])) {
      throw std::runtime_error("tensor '" + names[i] + "' has the wrong shape");
    }
    *tensors[i] = std::move(m);
  }
  model.scaler = scaler_from_json(j.at("scaler"));
  for (const auto& h : j.at("history")) {
    model.history.push_back({h.at("epoch").get<std::size_t>(), number_or_nan(h.at("train_mse")),
                             number_or_nan(h.at("valid_mse"))});
  }
  model.best_epoch = j.at("best_epoch").get<std::size_t>();
  return model;
}

}  // namespace libsquant::neural

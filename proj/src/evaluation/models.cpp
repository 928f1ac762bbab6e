#include "libsquant/evaluation/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "libsquant/classical/linear.hpp"
#include "libsquant/neural/serialization.hpp"

namespace libsquant::evaluation {

using nlohmann::json;
namespace nn = libsquant::neural;
namespace cl = libsquant::classical;

const std::vector<std::string>& default_suite() {
  static const std::vector<std::string> names = {
      "simplernn", "lstm",   "gru",  "conv-simplernn", "conv-lstm", "conv-gru", "mlp",
      "linear",    "svr",    "tree", "forest",         "gbr",       "knn"};
  return names;
}

const std::vector<std::string>& known_models() {
  static const std::vector<std::string> names = [] {
    auto v = default_suite();
    v.push_back("svr-rbf");
    v.push_back("svr-poly");
    return v;
  }();
  return names;
}

bool is_known_model(std::string_view name) {
  const auto& k = known_models();
  return std::find(k.begin(), k.end(), name) != k.end();
}

std::vector<double> FittedModel::predict(const Dataset& data) const {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& r : data.records) out.push_back(predict(r));
  return out;
}

nn::ModelSpec neural_spec(std::string_view name, const ModelSettings& settings, std::uint64_t seed) {
  const auto arch = nn::parse_architecture(name);
  if (!arch) throw std::invalid_argument("not a neural model: " + std::string(name));
  nn::ModelSpec spec = nn::ModelSpec::defaults(*arch);
  if (settings.epochs) spec.training.epochs = *settings.epochs;
  if (settings.learning_rate) spec.training.learning_rate = *settings.learning_rate;
  if (settings.batch_size) spec.training.batch_size = *settings.batch_size;
  if (settings.momentum) spec.training.momentum = *settings.momentum;
  if (settings.hidden_size) {
    spec.hidden_size = *settings.hidden_size;
    if (*arch == nn::Architecture::Mlp) spec.mlp_hidden = {*settings.hidden_size};
  }
  spec.training.seed = seed;
  spec.validate();
  return spec;
}

namespace {

json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()},
          {"data", std::vector<double>(m.values().begin(), m.values().end())}};
}

json tree_json(const cl::RegressionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    if (n.is_leaf()) {
      nodes.push_back({{"value", n.value}, {"samples", n.samples}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"value", n.value},
                       {"samples", n.samples}});
    }
  }
  return nodes;
}

json classical_header(const std::string& name, const Scaler& scaler, const json& hyper) {
  return {{"format", "libsquant-model"},
          {"version", nn::kModelFormatVersion},
          {"model", name},
          {"features", feature_names()},
          {"scaler", nn::scaler_to_json(scaler)},
          {"hyperparameters", hyper}};
}

class NeuralModel final : public FittedModel {
 public:
  NeuralModel(std::string name, nn::TrainedModel model)
      : name_(std::move(name)), model_(std::move(model)) {}

  const std::string& name() const override { return name_; }
  double predict(const SpectralRecord& r) const override { return model_.predict(r); }
  const Scaler& scaler() const override { return model_.scaler; }
  std::vector<nn::EpochLoss> history() const override { return model_.history; }
  json hyperparameters() const override { return nn::spec_to_json(model_.spec); }
  json to_json() const override {
    json j = nn::model_to_json(model_);
    j["model"] = name_;
    return j;
  }

 private:
  std::string name_;
  nn::TrainedModel model_;
};

/// Classical regressor on the 16-column scaled feature vector with a
/// normalized target.
template <typename Impl>
class ClassicalModel final : public FittedModel {
 public:
  ClassicalModel(std::string name, Scaler scaler, Impl impl, json hyper, double train_mse)
      : name_(std::move(name)),
        scaler_(std::move(scaler)),
        impl_(std::move(impl)),
        hyper_(std::move(hyper)),
        train_mse_(train_mse) {}

  const std::string& name() const override { return name_; }
  double predict(const SpectralRecord& r) const override {
    const auto x = feature_row(r, scaler_);
    return scaler_.denormalize_target(impl_.predict(x));
  }
  const Scaler& scaler() const override { return scaler_; }
  std::vector<nn::EpochLoss> history() const override {
    return {{1, train_mse_, std::numeric_limits<double>::quiet_NaN()}};
  }
  json hyperparameters() const override { return hyper_; }
  json to_json() const override {
    json j = classical_header(name_, scaler_, hyper_);
    j["params"] = params_json(impl_);
    return j;
  }

 private:
  static json params_json(const cl::LinearModel& m) {
    return {{"coefficients", m.coefficients}, {"intercept", m.intercept}};
  }
  static json params_json(const cl::SvrModel& m) {
    return {{"kernel", std::string(cl::to_string(m.kernel.kind))},
            {"gamma", m.kernel.gamma},
            {"degree", m.kernel.degree},
            {"coef", m.kernel.coef},
            {"bias", m.bias},
            {"dual", m.dual},
            {"support_indices", m.support_indices},
            {"support_vectors", matrix_json(m.support_vectors)},
            {"iterations", m.iterations},
            {"kkt_violation", m.kkt_violation}};
  }
  static json params_json(const cl::RegressionTree& t) { return {{"nodes", tree_json(t)}}; }
  static json params_json(const cl::ForestModel& f) {
    json trees = json::array();
    for (const auto& t : f.trees) trees.push_back(tree_json(t));
    return {{"trees", trees}};
  }
  static json params_json(const cl::GbrModel& g) {
    json stages = json::array();
    for (const auto& t : g.stages) stages.push_back(tree_json(t));
    return {{"init", g.init}, {"learning_rate", g.learning_rate}, {"stages", stages}};
  }
  static json params_json(const cl::KnnModel& k) {
    return {{"k", k.k},
            {"weighting", std::string(cl::to_string(k.weighting))},
            {"x", matrix_json(k.x)},
            {"y", k.y}};
  }

  std::string name_;
  Scaler scaler_;
  Impl impl_;
  json hyper_;
  double train_mse_;
};

template <typename Impl>
std::unique_ptr<FittedModel> wrap(std::string name, const Scaler& scaler, const ScaledData& data,
                                  Impl impl, json hyper) {
  const auto fitted = impl.predict(data.features);
  double s = 0.0;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    s += (fitted[i] - data.targets[i]) * (fitted[i] - data.targets[i]);
  }
  const double train_mse = fitted.empty() ? 0.0 : s / static_cast<double>(fitted.size());
  return std::make_unique<ClassicalModel<Impl>>(std::move(name), scaler, std::move(impl),
                                                std::move(hyper), train_mse);
}

std::unique_ptr<FittedModel> fit_svr_variant(const std::string& name, cl::KernelKind kind,
                                             const Scaler& scaler, const ScaledData& data,
                                             const ModelSettings& s) {
  cl::SvrOptions o;
  o.c = s.svr_c;
  o.epsilon = s.svr_epsilon;
  o.kernel.kind = kind;
  o.kernel.gamma = s.svr_gamma;
  o.kernel.degree = s.svr_degree;
  o.kernel.coef = s.svr_coef;
  cl::SvrModel m = cl::fit_svr(data.features, data.targets, o);
  json hyper = {{"kernel", std::string(cl::to_string(kind))}, {"C", o.c}, {"epsilon", o.epsilon}};
  if (kind == cl::KernelKind::Rbf) hyper["gamma"] = m.kernel.gamma;
  if (kind == cl::KernelKind::Polynomial) {
    hyper["degree"] = o.kernel.degree;
    hyper["coef"] = o.kernel.coef;
  }
  return wrap(name, scaler, data, std::move(m), std::move(hyper));
}

}  // namespace

std::unique_ptr<FittedModel> fit_model(std::string_view name_view, const Dataset& train,
                                       const ModelSettings& settings, std::uint64_t seed) {
  const std::string name(name_view);
  if (!is_known_model(name)) throw std::invalid_argument("unknown model '" + name + "'");

  if (nn::parse_architecture(name)) {
    const nn::ModelSpec spec = neural_spec(name, settings, seed);
    return std::make_unique<NeuralModel>(name, nn::train(spec, train, Dataset{}));
  }

  const Scaler scaler = Scaler::fit(train);
  const ScaledData data = transform(scaler, train);

  if (name == "linear") {
    return wrap(name, scaler, data, cl::fit_ols(data.features, data.targets),
                json{{"solver", "normal-equations"}});
  }
  if (name == "svr") return fit_svr_variant(name, cl::KernelKind::Linear, scaler, data, settings);
  if (name == "svr-rbf") return fit_svr_variant(name, cl::KernelKind::Rbf, scaler, data, settings);
  if (name == "svr-poly") {
    return fit_svr_variant(name, cl::KernelKind::Polynomial, scaler, data, settings);
  }
  if (name == "tree") {
    const auto& o = settings.tree;
    return wrap(name, scaler, data, cl::fit_tree(data.features, data.targets, o),
                json{{"max_depth", o.max_depth}, {"min_leaf", o.min_leaf}});
  }
  if (name == "forest") {
    cl::ForestOptions o = settings.forest;
    o.seed = seed;
    return wrap(name, scaler, data, cl::fit_forest(data.features, data.targets, o),
                json{{"n_trees", o.n_trees},
                     {"max_depth", o.max_depth},
                     {"min_leaf", o.min_leaf},
                     {"max_features", o.max_features},
                     {"bootstrap", o.bootstrap},
                     {"seed", o.seed}});
  }
  if (name == "gbr") {
    const auto& o = settings.gbr;
    return wrap(name, scaler, data, cl::fit_gbr(data.features, data.targets, o),
                json{{"n_stages", o.n_stages},
                     {"learning_rate", o.learning_rate},
                     {"max_depth", o.max_depth},
                     {"min_leaf", o.min_leaf}});
  }
  // knn
  cl::KnnModel knn{data.features, data.targets, std::min(settings.knn_k, data.targets.size()),
                   settings.knn_weighting};
  if (knn.k == 0) throw std::invalid_argument("knn: k must be >= 1");
  json hyper{{"k", knn.k}, {"weighting", std::string(cl::to_string(knn.weighting))},
             {"metric", "euclidean"}};
  return wrap(name, scaler, data, std::move(knn), std::move(hyper));
}

}  // namespace libsquant::evaluation

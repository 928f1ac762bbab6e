#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "libsquant/dataset/dataset.hpp"
#include "libsquant/evaluation/metrics.hpp"
#include "libsquant/evaluation/models.hpp"

namespace libsquant::evaluation {

struct Prediction {
  Element element = Element::Si;
  double nominal = 0.0;    // weight-percent
  double predicted = 0.0;  // weight-percent
};

struct ModelResult {
  std::string name;
  std::optional<std::string> error;  // set when fitting or evaluation failed
  MetricBreakdown metrics;
  std::optional<LineFit> fit;  // predicted vs nominal, weight-percent
  std::vector<Prediction> predictions;
  nlohmann::json hyperparameters;
  double seconds = 0.0;  // wall clock, excluded from the JSON report

  bool ok() const noexcept { return !error.has_value(); }
};

struct RepeatResult {
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<ModelResult> models;  // suite order
};

/// Median of each headline metric over the repeats in which the model succeeded.
struct ModelSummary {
  std::string name;
  std::size_t succeeded = 0;
  MetricSet median;  // pooled metrics; n = median test size
  double slope = 0.0;
};

struct EvaluationReport {
  std::vector<std::string> suite;
  std::uint64_t seed = 0;
  double test_fraction = 0.0;
  std::string data;
  std::size_t n_records = 0;
  std::vector<RepeatResult> repeats;
  std::vector<ModelSummary> summary;  // suite order
};

struct BenchmarkOptions {
  std::vector<std::string> suite = default_suite();
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  std::size_t repeats = 1;  // repeat r splits and trains with seed + r
  ModelSettings settings;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

/// Fits and scores every model on one fixed partition. Model failures are
/// recorded in the result rather than thrown.
RepeatResult evaluate_suite(const std::vector<std::string>& suite, const Dataset& train,
                            const Dataset& test, const ModelSettings& settings, std::uint64_t seed,
                            std::size_t threads = 0);

/// Throws std::invalid_argument on an empty suite, an unknown model name,
/// zero repeats or a split that leaves a partition empty.
EvaluationReport run_benchmark(const Dataset& data, const BenchmarkOptions& options);

std::vector<ModelSummary> summarize(const std::vector<std::string>& suite,
                                    const std::vector<RepeatResult>& repeats);

}  // namespace libsquant::evaluation

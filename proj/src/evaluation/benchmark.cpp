#include "libsquant/evaluation/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace libsquant::evaluation {

namespace {

ModelResult evaluate_one(const std::string& name, const Dataset& train, const Dataset& test,
                         const ModelSettings& settings, std::uint64_t seed) {
  ModelResult result;
  result.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto model = fit_model(name, train, settings, seed);
    result.hyperparameters = model->hyperparameters();
    const auto predicted = model->predict(test);
    std::vector<double> nominal;
    std::vector<Element> elements;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto& r = test.records[i];
      nominal.push_back(r.concentration);
      elements.push_back(r.element);
      result.predictions.push_back({r.element, r.concentration, predicted[i]});
    }
    if (!std::all_of(predicted.begin(), predicted.end(), [](double v) { return std::isfinite(v); })) {
      throw std::runtime_error("non-finite prediction");
    }
    result.metrics = compute_breakdown(nominal, predicted, elements, model->scaler());
    try {
      result.fit = correlation_slope(nominal, predicted);
    } catch (const std::exception&) {
      result.fit.reset();
    }
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t n = requested == 0 ? std::thread::hardware_concurrency() : requested;
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(1, tasks));
}

/// Runs task(i) for i in [0, count) on a small pool. Each task writes only its
/// own slot, so the outcome matches a sequential loop.
template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task task) {
  const std::size_t workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Median of the non-NaN values.
double median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void check_suite(const std::vector<std::string>& suite) {
  if (suite.empty()) throw std::invalid_argument("benchmark: empty model suite");
  for (const auto& name : suite) {
    if (!is_known_model(name)) throw std::invalid_argument("benchmark: unknown model '" + name + "'");
  }
}

}  // namespace

RepeatResult evaluate_suite(const std::vector<std::string>& suite, const Dataset& train,
                            const Dataset& test, const ModelSettings& settings, std::uint64_t seed,
                            std::size_t threads) {
  check_suite(suite);
  if (train.empty() || test.empty()) throw std::invalid_argument("benchmark: empty partition");
  RepeatResult repeat;
  repeat.seed = seed;
  repeat.n_train = train.size();
  repeat.n_test = test.size();
  repeat.models.resize(suite.size());
  parallel_for(suite.size(), threads, [&](std::size_t i) {
    repeat.models[i] = evaluate_one(suite[i], train, test, settings, seed);
  });
  return repeat;
}

EvaluationReport run_benchmark(const Dataset& data, const BenchmarkOptions& options) {
  check_suite(options.suite);
  if (options.repeats == 0) throw std::invalid_argument("benchmark: repeats must be >= 1");

  EvaluationReport report;
  report.suite = options.suite;
  report.seed = options.seed;
  report.test_fraction = options.test_fraction;
  report.data = data.provenance;
  report.n_records = data.size();

  std::vector<DatasetSplit> splits;
  for (std::size_t r = 0; r < options.repeats; ++r) {
    splits.push_back(split(data, options.test_fraction, options.seed + r));
    if (splits.back().train.empty() || splits.back().test.empty()) {
      throw std::invalid_argument("benchmark: the split leaves a partition empty");
    }
  }

  const std::size_t per_repeat = options.suite.size();
  report.repeats.resize(options.repeats);
  for (std::size_t r = 0; r < options.repeats; ++r) {
    auto& rep = report.repeats[r];
    rep.seed = options.seed + r;
    rep.n_train = splits[r].train.size();
    rep.n_test = splits[r].test.size();
    rep.models.resize(per_repeat);
  }
  parallel_for(options.repeats * per_repeat, options.threads, [&](std::size_t task) {
    const std::size_t r = task / per_repeat;
    const std::size_t m = task % per_repeat;
    report.repeats[r].models[m] = evaluate_one(options.suite[m], splits[r].train, splits[r].test,
                                               options.settings, options.seed + r);
  });
  report.summary = summarize(options.suite, report.repeats);
  return report;
}

std::vector<ModelSummary> summarize(const std::vector<std::string>& suite,
                                    const std::vector<RepeatResult>& repeats) {
  std::vector<ModelSummary> out;
  for (std::size_t m = 0; m < suite.size(); ++m) {
    ModelSummary s;
    s.name = suite[m];
    std::vector<double> fields[7];
    std::vector<double> sizes;
    for (const auto& rep : repeats) {
      const ModelResult& res = rep.models.at(m);
      if (!res.ok()) continue;
      ++s.succeeded;
      const auto& p = res.metrics.pooled;
      fields[0].push_back(p.normalized.mse);
      fields[1].push_back(p.normalized.mae);
      fields[2].push_back(p.normalized.mape);
      fields[3].push_back(p.raw.mse);
      fields[4].push_back(p.raw.mae);
      fields[5].push_back(p.raw.mape);
      fields[6].push_back(res.fit ? res.fit->slope : std::numeric_limits<double>::quiet_NaN());
      sizes.push_back(static_cast<double>(p.n));
    }
    s.median.normalized = {median(fields[0]), median(fields[1]), median(fields[2])};
    s.median.raw = {median(fields[3]), median(fields[4]), median(fields[5])};
    s.median.n = sizes.empty() ? 0 : static_cast<std::size_t>(median(sizes));
    s.slope = median(fields[6]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace libsquant::evaluation

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "libsquant/classical/linear.hpp"
#include "libsquant/errors.hpp"
#include "libsquant/evaluation/benchmark.hpp"
#include "libsquant/evaluation/metrics.hpp"
#include "libsquant/evaluation/models.hpp"
#include "libsquant/evaluation/report.hpp"
#include "libsquant/evaluation/svg.hpp"

using namespace libsquant;
using namespace libsquant::evaluation;

namespace {

std::vector<double> random_vector(std::size_t n, SeededRng& rng, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

ModelSettings quick_settings() {
  ModelSettings s;
  s.epochs = 5;
  s.hidden_size = 4;
  s.forest.n_trees = 10;
  s.gbr.n_stages = 10;
  return s;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

// ---- metrics ----------------------------------------------------------------

TEST(Metrics, HandOracles) {
  const std::vector<double> y = {1, 2, 3}, yhat = {2, 2, 2};
  EXPECT_DOUBLE_EQ(mse(y, yhat), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(mae(y, yhat), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(mse(std::vector<double>{0, 0}, std::vector<double>{1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(mape(std::vector<double>{2}, std::vector<double>{1}), 0.5);
  EXPECT_EQ(mse(y, y), 0.0);
  EXPECT_EQ(mae(y, y), 0.0);
  EXPECT_EQ(mape(y, y), 0.0);
}

TEST(Metrics, Errors) {
  const std::vector<double> a = {1, 2}, b = {1};
  EXPECT_THROW(mse(a, b), ShapeError);
  EXPECT_THROW(mae(std::vector<double>{}, std::vector<double>{}), ShapeError);
  EXPECT_THROW(mape(a, b), ShapeError);
  EXPECT_THROW(mape(std::vector<double>{0.0, 1.0}, a), DomainError);
  EXPECT_TRUE(std::isnan(compute(std::vector<double>{0.0, 1.0}, a).mape));
}

TEST(Metrics, MatchBruteForce) {
  SeededRng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.index(50);
    const auto y = random_vector(n, rng, 0.01, 5.0);
    const auto yhat = random_vector(n, rng, -1.0, 6.0);
    double s2 = 0, s1 = 0, sp = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - yhat[i];
      s2 += e * e;
      s1 += std::abs(e);
      sp += std::abs(e / y[i]);
    }
    const double dn = static_cast<double>(n);
    EXPECT_NEAR(mse(y, yhat), s2 / dn, 1e-12);
    EXPECT_NEAR(mae(y, yhat), s1 / dn, 1e-12);
    EXPECT_NEAR(mape(y, yhat), sp / dn, 1e-12);
  }
}

TEST(Metrics, SymmetryAndScaleInvariance) {
  SeededRng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = random_vector(10, rng, 0.1, 3.0);
    const auto yhat = random_vector(10, rng, 0.1, 3.0);
    EXPECT_DOUBLE_EQ(mae(y, yhat), mae(yhat, y));
    EXPECT_DOUBLE_EQ(mse(y, yhat), mse(yhat, y));
    const double k = rng.uniform(0.1, 10.0);
    std::vector<double> ky(y), kyhat(yhat);
    for (double& v : ky) v *= k;
    for (double& v : kyhat) v *= k;
    EXPECT_NEAR(mape(ky, kyhat), mape(y, yhat), 1e-12);
  }
}

TEST(Metrics, CorrelationSlope) {
  const std::vector<double> x = {0.1, 0.5, 2.0, 3.5};
  auto fit = correlation_slope(x, x);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  std::vector<double> doubled(x);
  for (double& v : doubled) v *= 2.0;
  EXPECT_NEAR(correlation_slope(x, doubled).slope, 2.0, 1e-12);
  EXPECT_THROW(correlation_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
  EXPECT_THROW(correlation_slope(std::vector<double>{1, 1}, std::vector<double>{1, 2}), DomainError);
}

TEST(Metrics, CorrelationSlopeMatchesOls) {
  SeededRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_vector(3, rng, 0.0, 5.0);
    const auto y = random_vector(3, rng, 0.0, 5.0);
    const auto fit = correlation_slope(x, y);
    const auto ols = classical::fit_ols(Matrix::column(x), y);
    EXPECT_NEAR(fit.slope, ols.coefficients[0], 1e-9);
    EXPECT_NEAR(fit.intercept, ols.intercept, 1e-9);
  }
}

TEST(Metrics, RawAndNormalizedRelateBySpan) {
  const Dataset d = load_embedded();
  const Scaler scaler = Scaler::fit(d);
  SeededRng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto nominal = random_vector(15, rng, 0.05, 5.0);
    const auto predicted = random_vector(15, rng, -0.5, 5.5);
    const auto m = compute_metric_set(nominal, predicted, scaler);
    const double span = scaler.target_span();
    EXPECT_NEAR(m.raw.mse, m.normalized.mse * span * span, 1e-12 * m.raw.mse);
    EXPECT_NEAR(m.raw.mae, m.normalized.mae * span, 1e-12 * m.raw.mae);
    EXPECT_EQ(m.n, 15u);
  }
}

TEST(Metrics, BreakdownMacroAveragesPresentElements) {
  const Scaler scaler({}, {}, 0.0, 1.0);
  const std::vector<double> nominal = {1, 2, 3, 4};
  const std::vector<double> predicted = {1, 3, 3, 2};
  const std::vector<Element> elements = {Element::Si, Element::Si, Element::Mg, Element::Mg};
  const auto b = compute_breakdown(nominal, predicted, elements, scaler);
  ASSERT_TRUE(b.per_element[ordinal(Element::Si)].has_value());
  ASSERT_TRUE(b.per_element[ordinal(Element::Mg)].has_value());
  EXPECT_FALSE(b.per_element[ordinal(Element::Fe)].has_value());
  EXPECT_DOUBLE_EQ(b.per_element[ordinal(Element::Si)]->normalized.mse, 0.5);
  EXPECT_DOUBLE_EQ(b.per_element[ordinal(Element::Mg)]->normalized.mse, 2.0);
  EXPECT_DOUBLE_EQ(b.macro.normalized.mse, 1.25);
  EXPECT_DOUBLE_EQ(b.pooled.normalized.mse, 1.25);
  EXPECT_DOUBLE_EQ(b.macro.normalized.mae, 0.75);
  EXPECT_EQ(b.macro.n, 2u);
  EXPECT_EQ(b.pooled.n, 4u);
}

// ---- models -----------------------------------------------------------------

TEST(Models, SuiteRoster) {
  const auto& suite = default_suite();
  ASSERT_EQ(suite.size(), 13u);
  for (const auto& name : suite) EXPECT_TRUE(is_known_model(name));
  EXPECT_TRUE(is_known_model("svr-rbf"));
  EXPECT_FALSE(is_known_model("transformer"));
  EXPECT_THROW(fit_model("transformer", load_embedded(), {}, 1), std::invalid_argument);
}

TEST(Models, NeuralOverridesApply) {
  ModelSettings s;
  s.epochs = 7;
  s.hidden_size = 3;
  const auto spec = neural_spec("conv-gru", s, 99);
  EXPECT_EQ(spec.training.epochs, 7u);
  EXPECT_EQ(spec.hidden_size, 3u);
  EXPECT_EQ(spec.training.seed, 99u);
  EXPECT_TRUE(spec.conv.has_value());
  EXPECT_THROW(neural_spec("svr", s, 1), std::invalid_argument);
}

TEST(Models, EveryModelFitsAndSerializes) {
  const Dataset d = load_embedded();
  for (const auto& name : known_models()) {
    const auto m = fit_model(name, d, quick_settings(), 3);
    EXPECT_EQ(m->name(), name);
    const auto yhat = m->predict(d);
    ASSERT_EQ(yhat.size(), d.size());
    for (double v : yhat) EXPECT_TRUE(std::isfinite(v)) << name;
    const auto j = m->to_json();
    EXPECT_EQ(j.at("format"), "libsquant-model");
    EXPECT_EQ(j.at("model"), name);
    EXPECT_FALSE(m->history().empty());
  }
}

// ---- benchmark ----------------------------------------------------------------

TEST(Benchmark, FullSuiteRowsAndDeterminism) {
  const Dataset d = load_embedded();
  BenchmarkOptions opts;
  opts.settings = quick_settings();
  const auto a = run_benchmark(d, opts);
  ASSERT_EQ(a.summary.size(), 13u);
  ASSERT_EQ(a.repeats.size(), 1u);
  EXPECT_EQ(a.repeats[0].n_train + a.repeats[0].n_test, 42u);
  for (std::size_t k = 0; k < 13; ++k) {
    EXPECT_EQ(a.summary[k].name, default_suite()[k]);
    EXPECT_TRUE(a.repeats[0].models[k].ok()) << a.summary[k].name;
    EXPECT_EQ(a.repeats[0].models[k].predictions.size(), a.repeats[0].n_test);
  }
  const auto b = run_benchmark(d, opts);
  EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
}

TEST(Benchmark, ThreadCountDoesNotChangeResults) {
  const Dataset d = load_embedded();
  BenchmarkOptions opts;
  opts.settings = quick_settings();
  opts.suite = {"lstm", "conv-gru", "forest", "svr", "knn"};
  opts.repeats = 2;
  opts.threads = 1;
  const auto sequential = report_to_json(run_benchmark(d, opts)).dump();
  opts.threads = 4;
  EXPECT_EQ(report_to_json(run_benchmark(d, opts)).dump(), sequential);
}

TEST(Benchmark, MemorizingNearestNeighborScoresZero) {
  const Dataset d = load_embedded();
  Dataset test;
  for (std::size_t i = 0; i < d.size(); i += 5) test.records.push_back(d.records[i]);
  ModelSettings s;
  s.knn_k = 1;
  const auto r = evaluate_suite({"knn"}, d, test, s, 1);
  ASSERT_TRUE(r.models[0].ok());
  const auto& m = r.models[0].metrics.pooled;
  EXPECT_EQ(m.normalized.mse, 0.0);
  EXPECT_EQ(m.normalized.mae, 0.0);
  EXPECT_NEAR(m.raw.mape, 0.0, 1e-12);
}

TEST(Benchmark, FailuresAreRecorded) {
  const Dataset d = load_embedded();
  BenchmarkOptions opts;
  opts.settings = quick_settings();
  opts.settings.learning_rate = 1e6;
  opts.suite = {"mlp", "linear"};
  const auto r = run_benchmark(d, opts);
  EXPECT_FALSE(r.repeats[0].models[0].ok());
  EXPECT_NE(r.repeats[0].models[0].error->find("diverged"), std::string::npos);
  EXPECT_TRUE(r.repeats[0].models[1].ok());
  EXPECT_EQ(r.summary[0].succeeded, 0u);
  EXPECT_TRUE(std::isnan(r.summary[0].median.normalized.mse));
  std::ostringstream csv;
  write_summary_csv(r, csv);
  EXPECT_NE(csv.str().find("mlp,nan"), std::string::npos);
  const auto j = report_to_json(r);
  EXPECT_TRUE(j.dump().find("null") != std::string::npos);
}

TEST(Benchmark, RepeatsUseConsecutiveSeeds) {
  const Dataset d = load_embedded();
  BenchmarkOptions opts;
  opts.suite = {"linear", "tree"};
  opts.repeats = 3;
  opts.seed = 10;
  const auto r = run_benchmark(d, opts);
  ASSERT_EQ(r.repeats.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(r.repeats[k].seed, 10 + k);
  std::vector<double> values;
  for (const auto& rep : r.repeats) values.push_back(rep.models[0].metrics.pooled.normalized.mse);
  std::sort(values.begin(), values.end());
  EXPECT_EQ(r.summary[0].median.normalized.mse, values[1]);
  EXPECT_EQ(r.summary[0].succeeded, 3u);
}

TEST(Benchmark, InvalidOptions) {
  const Dataset d = load_embedded();
  BenchmarkOptions opts;
  opts.suite = {};
  EXPECT_THROW(run_benchmark(d, opts), std::invalid_argument);
  opts.suite = {"nope"};
  EXPECT_THROW(run_benchmark(d, opts), std::invalid_argument);
  opts.suite = {"linear"};
  opts.repeats = 0;
  EXPECT_THROW(run_benchmark(d, opts), std::invalid_argument);
  opts.repeats = 1;
  opts.test_fraction = 0.0;
  EXPECT_THROW(run_benchmark(d, opts), std::invalid_argument);
}

// ---- report and plots -----------------------------------------------------------

TEST(Report, JsonAndCsvLayout) {
  const Dataset d = load_embedded();
  BenchmarkOptions opts;
  opts.suite = {"linear", "knn"};
  const auto r = run_benchmark(d, opts);
  const auto j = report_to_json(r);
  EXPECT_EQ(j.at("format"), "libsquant-report");
  EXPECT_EQ(j.at("version"), kReportFormatVersion);
  EXPECT_EQ(j.dump().find("seconds"), std::string::npos);
  std::ostringstream csv;
  write_summary_csv(r, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "model,mse_norm,mae_norm,mape_norm,mse_raw,mae_raw,mape_raw,slope");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("linear,", 0), 0u);
  std::ostringstream timings;
  write_timings_csv(r, timings);
  EXPECT_EQ(timings.str().rfind("repeat,model,seconds\n", 0), 0u);
  EXPECT_EQ(count(timings.str(), "\n"), 3u);
}

TEST(Svg, ScatterIsWellFormed) {
  const std::vector<Prediction> points = {
      {Element::Si, 0.5, 0.6}, {Element::Mg, 2.0, 1.8}, {Element::Cu, 1.0, 1.1}};
  const auto svg = scatter_svg("lstm <test> & co", points, LineFit{0.9, 0.1});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "<circle"), 3u);
  EXPECT_NE(svg.find("lstm &lt;test&gt; &amp; co"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Svg, LinePlot) {
  const std::vector<double> x = {1.0, 0.1, 0.01};
  const std::vector<Series> series = {{"a", {1, 0.5, 0}}, {"b", {0, -0.2, -0.4}}};
  const auto svg = line_plot_svg("path", "lambda", "coefficient", x, series, true);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(xml_escape("a\"b<"), "a&quot;b&lt;");
}

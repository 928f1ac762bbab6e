#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "libsquant/classical/lasso.hpp"
#include "libsquant/classical/linear.hpp"
#include "libsquant/dataset/dataset.hpp"
#include "libsquant/dataset/scaler.hpp"
#include "libsquant/errors.hpp"
#include "libsquant/evaluation/benchmark.hpp"
#include "libsquant/evaluation/report.hpp"
#include "libsquant/evaluation/svg.hpp"

namespace libsquant::cli {

namespace fs = std::filesystem;
namespace ev = libsquant::evaluation;

namespace {

/// Bad input from the user: reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string data = "embedded";
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  std::string models;  // comma-separated; empty = default suite
  std::string out = "out";
  std::size_t threads = 0;
  ev::ModelSettings settings;

  // train
  std::string model;
  // benchmark
  std::size_t repeats = 1;
  bool plots = true;
  // lasso-path
  std::string lambdas;  // explicit comma-separated grid
  std::size_t lambda_count = 50;
  double lambda_ratio = 1e-3;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) items.push_back(item.substr(b, e - b + 1));
  }
  return items;
}

std::string model_list() {
  std::string s;
  for (const auto& n : ev::known_models()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

void require_model(const std::string& name) {
  if (!ev::is_known_model(name)) {
    throw UsageError("unknown model '" + name + "'; valid models: " + model_list());
  }
}

Dataset load_data(const RunConfig& cfg) {
  if (cfg.data == "embedded") return load_embedded();
  if (!fs::exists(cfg.data)) throw UsageError("data file not found: " + cfg.data);
  try {
    return parse_csv(cfg.data);
  } catch (const ParseError& e) {
    throw UsageError(cfg.data + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

DatasetSplit split_data(const Dataset& data, const RunConfig& cfg) {
  if (!(cfg.test_fraction >= 0.0 && cfg.test_fraction < 1.0)) {
    throw UsageError("--test-fraction must lie in [0, 1)");
  }
  DatasetSplit s = split(data, cfg.test_fraction, cfg.seed);
  if (s.train.empty()) throw UsageError("the split leaves no training records");
  return s;
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("error writing " + path.string());
}

std::string num(double v) { return std::isnan(v) ? "nan" : fmt::format("{:.6g}", v); }

int cmd_data(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = load_data(cfg);
  std::size_t present = 0;
  std::vector<std::size_t> counts;
  for (Element e : kAllElements) {
    const std::size_t c = data.count(e);
    counts.push_back(c);
    if (c > 0) ++present;
  }
  std::vector<std::size_t> nonzero;
  std::copy_if(counts.begin(), counts.end(), std::back_inserter(nonzero), [](auto c) { return c > 0; });
  const bool even = !nonzero.empty() &&
                    std::all_of(nonzero.begin(), nonzero.end(), [&](auto c) { return c == nonzero[0]; });
  out << fmt::format("{} records, {} elements", data.size(), present);
  if (even) out << fmt::format(", {} per element", nonzero[0]);
  out << fmt::format("\nsource: {}\n\n", data.provenance);
  out << fmt::format("{:<8}{:>6}{:>12}{:>12}\n", "element", "count", "min wt%", "max wt%");
  for (Element e : kAllElements) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& r : data.records) {
      if (r.element != e) continue;
      lo = std::min(lo, r.concentration);
      hi = std::max(hi, r.concentration);
    }
    if (counts[ordinal(e)] == 0) {
      out << fmt::format("{:<8}{:>6}{:>12}{:>12}\n", symbol(e), 0, "-", "-");
    } else {
      out << fmt::format("{:<8}{:>6}{:>12.3f}{:>12.3f}\n", symbol(e), counts[ordinal(e)], lo, hi);
    }
  }
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  require_model(cfg.model);
  const Dataset data = load_data(cfg);
  const DatasetSplit parts = split_data(data, cfg);
  const auto model = ev::fit_model(cfg.model, parts.train, cfg.settings, cfg.seed);
  const fs::path dir = prepare_out(cfg);

  write_file(dir / "model.json", model->to_json().dump(2) + "\n");
  std::string loss = "epoch,train_mse,valid_mse\n";
  for (const auto& h : model->history()) {
    loss += fmt::format("{},{},{}\n", h.epoch, h.train_mse,
                        std::isnan(h.valid_mse) ? std::string() : fmt::format("{}", h.valid_mse));
  }
  write_file(dir / "loss.csv", loss);

  out << fmt::format("trained {} on {} records (seed {})\n", cfg.model, parts.train.size(), cfg.seed);
  if (!parts.test.empty()) {
    std::vector<double> nominal;
    for (const auto& r : parts.test.records) nominal.push_back(r.concentration);
    const auto m = ev::compute_metric_set(nominal, model->predict(parts.test), model->scaler());
    out << fmt::format("test ({} records): mse_norm {} mae_norm {} mse_raw {}\n", m.n,
                       num(m.normalized.mse), num(m.normalized.mae), num(m.raw.mse));
  }
  out << fmt::format("wrote {} and {}\n", (dir / "model.json").string(), (dir / "loss.csv").string());
  return kExitOk;
}

int cmd_benchmark(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ev::BenchmarkOptions options;
  if (!cfg.models.empty()) {
    options.suite = split_list(cfg.models);
    if (options.suite.empty()) throw UsageError("--models is empty");
    for (const auto& m : options.suite) require_model(m);
  }
  if (cfg.repeats == 0) throw UsageError("--repeats must be >= 1");
  options.seed = cfg.seed;
  options.test_fraction = cfg.test_fraction;
  options.repeats = cfg.repeats;
  options.settings = cfg.settings;
  options.threads = cfg.threads;
  const Dataset data = load_data(cfg);
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    RunConfig c = cfg;
    c.seed = cfg.seed + r;
    if (split_data(data, c).test.empty()) throw UsageError("the split leaves no test records");
  }

  const ev::EvaluationReport report = ev::run_benchmark(data, options);
  const fs::path dir = prepare_out(cfg);
  write_file(dir / "report.json", ev::report_to_json(report).dump(2) + "\n");
  std::ostringstream summary;
  ev::write_summary_csv(report, summary);
  write_file(dir / "summary.csv", summary.str());
  std::ostringstream timings;
  ev::write_timings_csv(report, timings);
  write_file(dir / "timings.csv", timings.str());
  if (cfg.plots) {
    fs::create_directories(dir / "plots");
    for (const auto& m : report.repeats.front().models) {
      if (!m.ok()) continue;
      const std::string title = fmt::format("{} (seed {})", m.name, report.repeats.front().seed);
      write_file(dir / "plots" / (m.name + ".svg"), ev::scatter_svg(title, m.predictions, m.fit));
    }
  }

  out << fmt::format("{:<16}{:>12}{:>12}{:>12}{:>12}\n", "model", "mse_norm", "mae_norm", "mape_norm",
                     "slope");
  std::size_t ok = 0;
  for (const auto& s : report.summary) {
    if (s.succeeded > 0) ++ok;
    out << fmt::format("{:<16}{:>12}{:>12}{:>12}{:>12}\n", s.name, num(s.median.normalized.mse),
                       num(s.median.normalized.mae), num(s.median.normalized.mape), num(s.slope));
  }
  for (const auto& rep : report.repeats) {
    for (const auto& m : rep.models) {
      if (!m.ok()) err << fmt::format("{} failed (seed {}): {}\n", m.name, rep.seed, *m.error);
    }
  }
  out << fmt::format("wrote {}\n", dir.string());
  return ok > 0 ? kExitOk : kExitRuntime;
}

int cmd_lasso_path(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Dataset data = load_data(cfg);
  const DatasetSplit parts = split_data(data, cfg);
  const Scaler scaler = Scaler::fit(parts.train);
  const ScaledData scaled = transform(scaler, parts.train);
  const Matrix x = classical::standardize_columns(scaled.features);

  std::vector<double> grid;
  if (!cfg.lambdas.empty()) {
    for (const auto& item : split_list(cfg.lambdas)) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("--lambda: not a number: '" + item + "'");
      }
      if (!(v >= 0.0) || !std::isfinite(v)) throw UsageError("--lambda values must be >= 0");
      grid.push_back(v);
    }
    if (grid.empty()) throw UsageError("--lambda is empty");
  } else {
    if (cfg.lambda_count == 0) throw UsageError("--lambda-count must be >= 1");
    if (!(cfg.lambda_ratio > 0.0 && cfg.lambda_ratio <= 1.0)) {
      throw UsageError("--lambda-ratio must lie in (0, 1]");
    }
    grid = classical::default_lambda_grid(x, scaled.targets, cfg.lambda_count, cfg.lambda_ratio);
  }

  const classical::LassoPath path = classical::lasso_path(x, scaled.targets, grid);
  const auto names = feature_names();
  const fs::path dir = prepare_out(cfg);
  std::ostringstream csv;
  classical::write_path_csv(path, names, csv);
  write_file(dir / "path.csv", csv.str());

  std::size_t failures = 0;
  for (const auto& p : path.points) {
    if (!p.converged) {
      ++failures;
      err << fmt::format("lambda {}: no convergence (last change {})\n", p.lambda, p.max_change);
    }
  }

  const bool log_x = std::all_of(grid.begin(), grid.end(), [](double v) { return v > 0.0; });
  std::vector<ev::Series> series;
  for (std::size_t j = 0; j < names.size(); ++j) {
    ev::Series s{names[j], {}};
    for (const auto& p : path.points) s.y.push_back(p.model.coefficients[j]);
    series.push_back(std::move(s));
  }
  write_file(dir / "path.svg",
             ev::line_plot_svg("Lasso coefficient path", log_x ? "lambda (log10)" : "lambda",
                               "coefficient", grid, series, log_x));

  out << fmt::format("lambda_max {} on {} training records; {} grid points\n",
                     classical::lasso_lambda_max(x, scaled.targets), parts.train.size(), grid.size());
  out << fmt::format("wrote {} and {}\n", (dir / "path.csv").string(), (dir / "path.svg").string());
  return failures == 0 ? kExitOk : kExitRuntime;
}

void add_settings(CLI::App& app, RunConfig& cfg) {
  auto& s = cfg.settings;
  app.add_option("--epochs", s.epochs, "Neural training epochs");
  app.add_option("--learning-rate", s.learning_rate, "Neural SGD step size");
  app.add_option("--batch-size", s.batch_size, "Neural minibatch size");
  app.add_option("--hidden-size", s.hidden_size, "Recurrent state / MLP hidden width");
  app.add_option("--momentum", s.momentum, "SGD momentum");
  app.add_option("--svr-c", s.svr_c, "SVR box constraint")->capture_default_str();
  app.add_option("--svr-epsilon", s.svr_epsilon, "SVR tube width")->capture_default_str();
  app.add_option("--svr-gamma", s.svr_gamma, "RBF gamma (0 = 1/features)")->capture_default_str();
  app.add_option("--svr-degree", s.svr_degree, "Polynomial kernel degree")->capture_default_str();
  app.add_option("--svr-coef", s.svr_coef, "Polynomial kernel offset")->capture_default_str();
  app.add_option("--tree-max-depth", s.tree.max_depth)->capture_default_str();
  app.add_option("--tree-min-leaf", s.tree.min_leaf)->capture_default_str();
  app.add_option("--forest-trees", s.forest.n_trees)->capture_default_str();
  app.add_option("--forest-max-depth", s.forest.max_depth)->capture_default_str();
  app.add_option("--forest-max-features", s.forest.max_features, "0 = ceil(sqrt(p))")
      ->capture_default_str();
  app.add_option("--gbr-stages", s.gbr.n_stages)->capture_default_str();
  app.add_option("--gbr-learning-rate", s.gbr.learning_rate)->capture_default_str();
  app.add_option("--gbr-max-depth", s.gbr.max_depth)->capture_default_str();
  app.add_option("--knn-k", s.knn_k)->capture_default_str();
  app.add_option_function<std::string>(
         "--knn-weighting",
         [&s](const std::string& v) {
           const auto w = classical::parse_weighting(v);
           if (!w) throw CLI::ValidationError("--knn-weighting", "expected uniform or distance");
           s.knn_weighting = *w;
         },
         "uniform | distance (default distance)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Concentration prediction for aluminum-alloy LIBS spectra", "libsquant"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat TOML file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--data", cfg.data, "'embedded' or a CSV path")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Split and training seed")
      ->envname("LIBSQUANT_SEED")
      ->capture_default_str();
  app.add_option("--test-fraction", cfg.test_fraction)->capture_default_str();
  app.add_option("--models", cfg.models, "Comma-separated benchmark suite");
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_settings(app, cfg);

  auto* data = app.add_subcommand("data", "Print dataset statistics");
  auto* train = app.add_subcommand("train", "Train one model and write it with its loss history");
  train->add_option("--model", cfg.model, "Model name")->required();
  auto* bench = app.add_subcommand("benchmark", "Run the model suite and write report, summary, plots");
  bench->add_option("--repeats", cfg.repeats, "Repeat seeds seed..seed+repeats-1")->capture_default_str();
  bench->add_flag("!--no-plots", cfg.plots, "Skip the SVG scatter plots");
  auto* lasso = app.add_subcommand("lasso-path", "Export the Lasso coefficient path");
  lasso->add_option("--lambda", cfg.lambdas, "Explicit comma-separated lambda grid");
  lasso->add_option("--lambda-count", cfg.lambda_count)->capture_default_str();
  lasso->add_option("--lambda-ratio", cfg.lambda_ratio, "Smallest lambda / lambda_max")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == static_cast<int>(CLI::ExitCodes::Success) ? kExitOk : kExitUsage;
  }

  try {
    if (*data) return cmd_data(cfg, out);
    if (*train) return cmd_train(cfg, out);
    if (*bench) return cmd_benchmark(cfg, out, err);
    return cmd_lasso_path(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace libsquant::cli

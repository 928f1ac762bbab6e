#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "libsquant/classical/lasso.hpp"
#include "libsquant/classical/linear.hpp"
#include "libsquant/dataset/scaler.hpp"
#include "libsquant/neural/serialization.hpp"

using namespace libsquant;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "libsquant");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> csv_numbers(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("libsquant-cli-") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("LIBSQUANT_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("LIBSQUANT_SEED");
  }
  std::string path(const std::string& leaf) const { return (dir_ / leaf).string(); }

  fs::path dir_;
};

std::uint64_t report_seed(const std::string& file) {
  return nlohmann::json::parse(slurp(file)).at("seed").get<std::uint64_t>();
}

}  // namespace

TEST_F(CliTest, DataSummary) {
  const auto r = run({"data"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("42 records, 6 elements, 7 per element"), std::string::npos);
  EXPECT_NE(r.out.find("0.097"), std::string::npos);
  EXPECT_NE(r.out.find("4.55"), std::string::npos);
}

TEST_F(CliTest, DataFromCsvAndErrors) {
  {
    std::ofstream f(path("data.csv"));
    write_csv(load_embedded(), f);
  }
  EXPECT_EQ(run({"--data", path("data.csv"), "data"}).code, 0);
  const auto missing = run({"--data", path("nope.csv"), "data"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("nope.csv"), std::string::npos);
  {
    std::ofstream f(path("bad.csv"));
    f << "concentration,i1,i2,i3,i4,i5,i6,i7,i8,i9,i10,element\n"
         "1.0,1,2,3,4,5,6,7,8,9,10,Si\n"
         "abc,1,2,3,4,5,6,7,8,9,10,Si\n";
  }
  const auto bad = run({"--data", path("bad.csv"), "data"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("row 2"), std::string::npos) << bad.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--seed", "abc", "data"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto unknown = run({"--out", path("o"), "train", "--model", "foo"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("simplernn"), std::string::npos);
  EXPECT_NE(unknown.err.find("knn"), std::string::npos);
  EXPECT_EQ(run({"--out", path("o"), "benchmark", "--models", "lstm,foo"}).code, 2);
  EXPECT_EQ(run({"--test-fraction", "1.5", "--out", path("o"), "benchmark"}).code, 2);
}

TEST_F(CliTest, TrainIsDeterministic) {
  for (const char* leaf : {"a", "b"}) {
    const auto r = run({"--seed", "42", "--epochs", "10", "--out", path(leaf), "train", "--model",
                        "simplernn"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const auto model = slurp(path("a/model.json"));
  EXPECT_FALSE(model.empty());
  EXPECT_EQ(model, slurp(path("b/model.json")));
  EXPECT_EQ(slurp(path("a/loss.csv")), slurp(path("b/loss.csv")));
  const auto loss = lines(slurp(path("a/loss.csv")));
  ASSERT_EQ(loss.size(), 11u);
  EXPECT_EQ(loss[0], "epoch,train_mse,valid_mse");
}

TEST_F(CliTest, TrainZeroEpochsKeepsInitialParameters) {
  ASSERT_EQ(run({"--epochs", "0", "--out", path("z"), "train", "--model", "gru"}).code, 0);
  const auto j = nlohmann::json::parse(slurp(path("z/model.json")));
  EXPECT_EQ(j.at("best_epoch"), 0);
  const auto model = neural::model_from_json(j);
  SeededRng rng(SeededRng::derive(model.spec.training.seed, 0));
  const auto init = neural::initialize(model.spec, rng);
  const auto a = model.params.tensors();
  const auto b = init.tensors();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(*a[k], *b[k]);
  EXPECT_EQ(lines(slurp(path("z/loss.csv"))).size(), 1u);
}

TEST_F(CliTest, TrainClassicalModel) {
  const auto r = run({"--out", path("t"), "train", "--model", "forest", "--forest-trees", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("t/model.json")));
  EXPECT_EQ(j.at("model"), "forest");
}

TEST_F(CliTest, BenchmarkFilteredSuite) {
  const std::vector<std::string> args = {"--epochs", "5", "--models", "simplernn,lstm,gru",
                                         "--out", path("b1"), "benchmark"};
  ASSERT_EQ(run(args).code, 0);
  auto again = args;
  again[5] = path("b2");
  ASSERT_EQ(run(again).code, 0);
  const auto summary = lines(slurp(path("b1/summary.csv")));
  ASSERT_EQ(summary.size(), 4u);
  EXPECT_EQ(summary[1].rfind("simplernn,", 0), 0u);
  EXPECT_EQ(summary[3].rfind("gru,", 0), 0u);
  EXPECT_EQ(slurp(path("b1/summary.csv")), slurp(path("b2/summary.csv")));
  EXPECT_EQ(slurp(path("b1/report.json")), slurp(path("b2/report.json")));
  for (const char* m : {"simplernn", "lstm", "gru"}) {
    const auto svg = slurp(path(std::string("b1/plots/") + m + ".svg"));
    EXPECT_NE(svg.find("</svg>"), std::string::npos) << m;
  }
  EXPECT_TRUE(fs::exists(path("b1/timings.csv")));
}

TEST_F(CliTest, BenchmarkAllFailedExitsOne) {
  const auto r = run({"--learning-rate", "1e6", "--epochs", "20", "--models", "mlp", "--out",
                      path("f"), "benchmark", "--no-plots"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("mlp failed"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("f/plots")));
}

TEST_F(CliTest, LassoPathDefaultGrid) {
  ASSERT_EQ(run({"--out", path("l"), "lasso-path"}).code, 0);
  const auto rows = lines(slurp(path("l/path.csv")));
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(std::count(rows[0].begin(), rows[0].end(), ','), 16);
  const auto first = csv_numbers(rows[1]);
  ASSERT_EQ(first.size(), 17u);
  for (std::size_t j = 1; j < first.size(); ++j) EXPECT_EQ(first[j], 0.0);
  EXPECT_NE(slurp(path("l/path.svg")).find("</svg>"), std::string::npos);
}

TEST_F(CliTest, LassoPathZeroLambdaIsLeastSquares) {
  ASSERT_EQ(run({"--out", path("l"), "lasso-path", "--lambda", "0"}).code, 0);
  const auto rows = lines(slurp(path("l/path.csv")));
  ASSERT_EQ(rows.size(), 2u);
  const auto row = csv_numbers(rows[1]);
  const std::vector<double> coef(row.begin() + 1, row.end());

  const DatasetSplit parts = split(load_embedded(), 0.2, 42);
  const Scaler scaler = Scaler::fit(parts.train);
  const ScaledData scaled = transform(scaler, parts.train);
  const Matrix x = classical::standardize_columns(scaled.features);
  const auto ols = classical::fit_ols(x, scaled.targets);
  // The one-hot block is collinear and the intensity columns are nearly so:
  // the optimum is matched at objective precision, fitted values more loosely.
  std::vector<double> diff;
  double lasso_sse = 0.0, ols_sse = 0.0;
  const auto ols_fit = ols.predict(x);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    diff.push_back(dot(x.row(i), coef) - dot(x.row(i), ols.coefficients));
    const double r = scaled.targets[i] - ols_fit[i];
    ols_sse += r * r;
  }
  const double m = std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(diff.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double r = scaled.targets[i] - (ols_fit[i] + diff[i] - m);
    lasso_sse += r * r;
    EXPECT_NEAR(diff[i], m, 1e-5);
  }
  EXPECT_NEAR(lasso_sse / static_cast<double>(x.rows()), ols_sse / static_cast<double>(x.rows()), 1e-10);
}

TEST_F(CliTest, LassoPathBadGrid) {
  EXPECT_EQ(run({"--out", path("l"), "lasso-path", "--lambda", "x"}).code, 2);
  EXPECT_EQ(run({"--out", path("l"), "lasso-path", "--lambda", "-1"}).code, 2);
  EXPECT_EQ(run({"--out", path("l"), "lasso-path", "--lambda-ratio", "2"}).code, 2);
}

TEST_F(CliTest, SeedPrecedence) {
  const std::vector<std::string> tail = {"--models", "linear", "benchmark", "--no-plots"};
  auto with = [&](std::vector<std::string> head, const std::string& out) {
    head.push_back("--out");
    head.push_back(path(out));
    head.insert(head.end(), tail.begin(), tail.end());
    return run(head);
  };
  ASSERT_EQ(with({}, "d").code, 0);
  EXPECT_EQ(report_seed(path("d/report.json")), 42u);

  setenv("LIBSQUANT_SEED", "7", 1);
  ASSERT_EQ(with({}, "e").code, 0);
  EXPECT_EQ(report_seed(path("e/report.json")), 7u);

  {
    std::ofstream f(path("run.toml"));
    f << "seed = 11\ntest-fraction = 0.25\n\n[benchmark]\nrepeats = 2\n";
  }
  const auto cfg = with({"--config", path("run.toml")}, "c");
  ASSERT_EQ(cfg.code, 0) << cfg.err;
  const auto j = nlohmann::json::parse(slurp(path("c/report.json")));
  EXPECT_EQ(j.at("seed"), 11);
  EXPECT_EQ(j.at("test_fraction"), 0.25);
  EXPECT_EQ(j.at("repeats").size(), 2u);

  ASSERT_EQ(with({"--config", path("run.toml"), "--seed", "5"}, "f").code, 0);
  EXPECT_EQ(report_seed(path("f/report.json")), 5u);
}

TEST_F(CliTest, ConfigRejectsUnknownKeys) {
  {
    std::ofstream f(path("bad.toml"));
    f << "sede = 3\n";
  }
  EXPECT_EQ(run({"--config", path("bad.toml"), "data"}).code, 2);
  EXPECT_EQ(run({"--config", path("absent.toml"), "data"}).code, 2);
}

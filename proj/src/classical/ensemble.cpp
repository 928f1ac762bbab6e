#include "libsquant/classical/ensemble.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "libsquant/errors.hpp"

namespace libsquant::classical {

double ForestModel::predict(std::span<const double> x) const {
  if (trees.empty()) throw std::logic_error("predict on an empty forest");
  double s = 0.0;
  for (const auto& t : trees) s += t.predict(x);
  return s / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::predict(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)));
  return out;
}

ForestModel fit_forest(const Matrix& x, std::span<const double> y, const ForestOptions& options) {
  if (options.n_trees == 0) throw std::invalid_argument("fit_forest: n_trees must be >= 1");
  if (x.rows() == 0) throw ShapeError("fit_forest: no rows");
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  TreeOptions tree_options;
  tree_options.max_depth = options.max_depth;
  tree_options.min_leaf = options.min_leaf;
  tree_options.max_features =
      options.max_features == 0
          ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))))
          : options.max_features;

  ForestModel forest;
  forest.trees.reserve(options.n_trees);
  std::vector<std::size_t> rows(n);
  for (std::size_t t = 0; t < options.n_trees; ++t) {
    SeededRng rng(SeededRng::derive(options.seed, t));
    if (options.bootstrap) {
      for (auto& r : rows) r = rng.index(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees.push_back(fit_tree(x, y, rows, tree_options, &rng));
  }
  return forest;
}

double GbrModel::predict_partial(std::span<const double> x, std::size_t count) const {
  double f = init;
  const std::size_t m = std::min(count, stages.size());
  for (std::size_t s = 0; s < m; ++s) f += learning_rate * stages[s].predict(x);
  return f;
}

double GbrModel::predict(std::span<const double> x) const { return predict_partial(x, stages.size()); }

std::vector<double> GbrModel::predict(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)));
  return out;
}

GbrModel fit_gbr(const Matrix& x, std::span<const double> y, const GbrOptions& options) {
  if (options.n_stages == 0) throw std::invalid_argument("fit_gbr: n_stages must be >= 1");
  if (!(options.learning_rate > 0.0 && options.learning_rate <= 1.0)) {
    throw std::invalid_argument("fit_gbr: learning rate must be in (0, 1]");
  }
  const std::size_t n = x.rows();
  if (n == 0) throw ShapeError("fit_gbr: no rows");
  if (y.size() != n) throw ShapeError("fit_gbr: target length does not match row count");

  GbrModel model;
  model.learning_rate = options.learning_rate;
  model.init = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  TreeOptions tree_options;
  tree_options.max_depth = options.max_depth;
  tree_options.min_leaf = options.min_leaf;

  std::vector<double> fitted(n, model.init);
  std::vector<double> residual(n);
  model.stages.reserve(options.n_stages);
  for (std::size_t m = 0; m < options.n_stages; ++m) {
    for (std::size_t r = 0; r < n; ++r) residual[r] = y[r] - fitted[r];
    RegressionTree tree = fit_tree(x, residual, tree_options);
    for (std::size_t r = 0; r < n; ++r) fitted[r] += options.learning_rate * tree.predict(x.row(r));
    model.stages.push_back(std::move(tree));
  }
  return model;
}

}  // namespace libsquant::classical

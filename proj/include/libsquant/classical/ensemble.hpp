#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "libsquant/classical/tree.hpp"

namespace libsquant::classical {

struct ForestOptions {
  std::size_t n_trees = 100;
  std::size_t max_depth = 6;
  std::size_t min_leaf = 1;
  /// 0 selects ceil(sqrt(p)) features per split.
  std::size_t max_features = 0;
  bool bootstrap = true;
  std::uint64_t seed = 42;
};

struct ForestModel {
  std::vector<RegressionTree> trees;

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
};

/// Bagged CART trees. Tree t draws from SeededRng::derive(seed, t), so the
/// result does not depend on the order in which trees are grown.
ForestModel fit_forest(const Matrix& x, std::span<const double> y,
                       const ForestOptions& options = {});

struct GbrOptions {
  std::size_t n_stages = 100;
  double learning_rate = 0.1;
  std::size_t max_depth = 3;
  std::size_t min_leaf = 1;
};

struct GbrModel {
  double init = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> stages;

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
  /// Prediction after the first `stages` stages.
  double predict_partial(std::span<const double> x, std::size_t stages) const;
};

/// Least-squares boosting: F0 = mean(y), F_m = F_{m-1} + nu * tree fitted to
/// the residuals. Throws std::invalid_argument unless n_stages >= 1 and
/// 0 < nu <= 1.
GbrModel fit_gbr(const Matrix& x, std::span<const double> y, const GbrOptions& options = {});

}  // namespace libsquant::classical

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "libsquant/numerics/matrix.hpp"
#include "libsquant/numerics/rng.hpp"

namespace libsquant::classical {

/// Leaf when feature < 0. Children are indices into RegressionTree::nodes.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;  // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // mean target of the node's samples
  std::size_t samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

struct TreeOptions {
  std::size_t max_depth = 6;
  std::size_t min_leaf = 1;
  /// Features examined per split; 0 or >= p means all of them.
  std::size_t max_features = 0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
};

/// Greedy CART minimizing the summed squared error of the two children over
/// every feature and every midpoint between consecutive distinct values.
/// Ties (SSE equal to within 1e-12 of the node's SSE) go to the lowest
/// feature index, then the lowest threshold. `rng` is
/// only drawn from when max_features restricts the candidate features.
/// Throws ShapeError on a size mismatch or fewer rows than min_leaf.
RegressionTree fit_tree(const Matrix& x, std::span<const double> y, const TreeOptions& options = {},
                        SeededRng* rng = nullptr);
/// Same on a subset of rows (duplicates allowed, as in a bootstrap sample).
RegressionTree fit_tree(const Matrix& x, std::span<const double> y,
                        std::span<const std::size_t> rows, const TreeOptions& options,
                        SeededRng* rng);

struct ExhaustiveSplit {
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;
};

/// Best single split by brute-force enumeration, for cross-checking the tree.
ExhaustiveSplit best_split_bruteforce(const Matrix& x, std::span<const double> y,
                                      std::size_t min_leaf = 1);

}  // namespace libsquant::classical

#include "libsquant/classical/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "libsquant/errors.hpp"

namespace libsquant::classical {

double RegressionTree::predict(std::span<const double> x) const {
  if (nodes.empty()) throw std::logic_error("predict on an unfitted tree");
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const TreeNode& n = nodes[at];
    at = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                          : n.right);
  }
  return nodes[at].value;
}

std::vector<double> RegressionTree::predict(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)));
  return out;
}

std::size_t RegressionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

/// Sum of squared deviations from the mean, computed in two passes.
double sse_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
  double s = 0.0;
  for (double v : values) s += (v - mean) * (v - mean);
  return s;
}

/// Splits whose SSE differ by less than this fraction of the node's SSE are
/// ties, so the tie rule does not depend on summation order.
constexpr double kTieTolerance = 1e-12;

bool improves(double sse, double best, double node_sse) {
  return sse < best - kTieTolerance * std::max(node_sse, std::numeric_limits<double>::min());
}

class Builder {
 public:
  Builder(const Matrix& x, std::span<const double> y, const TreeOptions& options, SeededRng* rng)
      : x_(x), y_(y), options_(options), rng_(rng) {
    const std::size_t p = x.cols();
    mtry_ = (options.max_features == 0 || options.max_features >= p) ? p : options.max_features;
    if (mtry_ < p && rng_ == nullptr) throw std::invalid_argument("feature subsampling needs an rng");
    all_features_.resize(p);
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  RegressionTree build(std::vector<std::size_t> rows) {
    RegressionTree tree;
    grow(tree, std::move(rows), 0);
    return tree;
  }

 private:
  std::int32_t grow(RegressionTree& tree, std::vector<std::size_t> rows, std::size_t depth) {
    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r : rows) {
      sum += y_[r];
      lo = std::min(lo, y_[r]);
      hi = std::max(hi, y_[r]);
    }
    TreeNode& node = tree.nodes.back();
    node.value = sum / static_cast<double>(rows.size());
    node.samples = rows.size();

    if (depth >= options_.max_depth || rows.size() < 2 * options_.min_leaf || lo == hi) return index;
    const Candidate best = find_split(rows);
    if (best.feature < 0) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    const auto f = static_cast<std::size_t>(best.feature);
    for (std::size_t r : rows) (x_(r, f) <= best.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const std::int32_t l = grow(tree, std::move(left), depth + 1);
    const std::int32_t r = grow(tree, std::move(right), depth + 1);
    TreeNode& parent = tree.nodes[static_cast<std::size_t>(index)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = l;
    parent.right = r;
    return index;
  }

  std::vector<std::size_t> candidate_features() {
    if (mtry_ == all_features_.size()) return all_features_;
    std::vector<std::size_t> pool = all_features_;
    for (std::size_t k = 0; k < mtry_; ++k) std::swap(pool[k], pool[k + rng_->index(pool.size() - k)]);
    pool.resize(mtry_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  Candidate find_split(const std::vector<std::size_t>& rows) {
    Candidate best;
    const std::size_t n = rows.size();
    const std::size_t min_leaf = std::max<std::size_t>(1, options_.min_leaf);
    std::vector<std::size_t> order(rows);
    for (std::size_t f : candidate_features()) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_(a, f) < x_(b, f); });
      double total = 0.0;
      for (std::size_t r : order) total += y_[r];
      // Prefix sums of centered targets keep the SSE formula well conditioned.
      const double mean = total / static_cast<double>(n);
      double total_sq = 0.0;
      for (std::size_t r : order) total_sq += (y_[r] - mean) * (y_[r] - mean);
      double left_sum = 0.0;
      double left_sq = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double d = y_[order[k]] - mean;
        left_sum += d;
        left_sq += d * d;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        const double a = x_(order[k], f);
        const double b = x_(order[k + 1], f);
        if (!(a < b) || nl < min_leaf || nr < min_leaf) continue;
        const double right_sum = -left_sum;
        const double right_sq = total_sq - left_sq;
        const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                           (right_sq - right_sum * right_sum / static_cast<double>(nr));
        if (improves(sse, best.sse, total_sq)) {
          best.sse = sse;
          best.feature = static_cast<int>(f);
          best.threshold = midpoint(a, b);
        }
      }
    }
    return best;
  }

  static double midpoint(double a, double b) {
    const double m = a + 0.5 * (b - a);
    return m < b ? m : a;
  }

  const Matrix& x_;
  std::span<const double> y_;
  TreeOptions options_;
  SeededRng* rng_;
  std::size_t mtry_ = 0;
  std::vector<std::size_t> all_features_;
};

void check_inputs(const Matrix& x, std::span<const double> y, std::size_t rows,
                  const TreeOptions& options) {
  if (y.size() != x.rows()) throw ShapeError("fit_tree: target length does not match row count");
  if (rows == 0) throw ShapeError("fit_tree: no rows");
  if (rows < std::max<std::size_t>(1, options.min_leaf)) {
    throw ShapeError("fit_tree: fewer rows than min_leaf");
  }
}

}  // namespace

RegressionTree fit_tree(const Matrix& x, std::span<const double> y, const TreeOptions& options,
                        SeededRng* rng) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_tree(x, y, rows, options, rng);
}

RegressionTree fit_tree(const Matrix& x, std::span<const double> y,
                        std::span<const std::size_t> rows, const TreeOptions& options,
                        SeededRng* rng) {
  check_inputs(x, y, rows.size(), options);
  Builder builder(x, y, options, rng);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

ExhaustiveSplit best_split_bruteforce(const Matrix& x, std::span<const double> y,
                                      std::size_t min_leaf) {
  ExhaustiveSplit best{-1, 0.0, std::numeric_limits<double>::infinity()};
  const double node_sse = sse_of(y);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::vector<double> values(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) values[r] = x(r, f);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double t = values[k] + 0.5 * (values[k + 1] - values[k]);
      std::vector<double> left;
      std::vector<double> right;
      for (std::size_t r = 0; r < x.rows(); ++r) (x(r, f) <= t ? left : right).push_back(y[r]);
      if (left.size() < min_leaf || right.size() < min_leaf) continue;
      const double sse = sse_of(left) + sse_of(right);
      if (improves(sse, best.sse, node_sse)) best = {static_cast<int>(f), t, sse};
    }
  }
  return best;
}

}  // namespace libsquant::classical

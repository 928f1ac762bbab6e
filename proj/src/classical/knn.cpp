#include "libsquant/classical/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "libsquant/errors.hpp"

namespace libsquant::classical {

namespace {
constexpr double kDistanceFloor = 1e-12;
}

std::string_view to_string(KnnWeighting w) noexcept {
  return w == KnnWeighting::Uniform ? "uniform" : "distance";
}

std::optional<KnnWeighting> parse_weighting(std::string_view name) noexcept {
  if (name == "uniform") return KnnWeighting::Uniform;
  if (name == "distance" || name == "inverse-distance") return KnnWeighting::InverseDistance;
  return std::nullopt;
}

std::vector<Neighbor> nearest_neighbors(const Matrix& train_x, std::span<const double> query,
                                        std::size_t k) {
  const std::size_t n = train_x.rows();
  if (n == 0) throw std::invalid_argument("knn: empty training set");
  if (k == 0 || k > n) throw std::invalid_argument("knn: k must be in [1, n]");
  if (query.size() != train_x.cols()) throw ShapeError("knn: query width does not match training data");

  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = train_x.row(r);
    double d2 = 0.0;
    for (std::size_t c = 0; c < query.size(); ++c) d2 += (row[c] - query[c]) * (row[c] - query[c]);
    dist[r] = {d2, r};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<Neighbor> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = {dist[i].second, std::sqrt(dist[i].first)};
  return out;
}

double predict_knn(const Matrix& train_x, std::span<const double> train_y,
                   std::span<const double> query, std::size_t k, KnnWeighting weighting) {
  if (train_y.size() != train_x.rows()) throw ShapeError("knn: target length does not match rows");
  const auto neighbors = nearest_neighbors(train_x, query, k);
  if (weighting == KnnWeighting::Uniform) {
    double s = 0.0;
    for (const auto& nb : neighbors) s += train_y[nb.index];
    return s / static_cast<double>(neighbors.size());
  }
  if (neighbors.front().distance == 0.0) {
    double s = 0.0;
    std::size_t count = 0;
    for (const auto& nb : neighbors) {
      if (nb.distance != 0.0) break;
      s += train_y[nb.index];
      ++count;
    }
    return s / static_cast<double>(count);
  }
  double num = 0.0;
  double den = 0.0;
  for (const auto& nb : neighbors) {
    const double w = 1.0 / (nb.distance + kDistanceFloor);
    num += w * train_y[nb.index];
    den += w;
  }
  return num / den;
}

std::vector<double> KnnModel::predict(const Matrix& queries) const {
  std::vector<double> out;
  out.reserve(queries.rows());
  for (std::size_t r = 0; r < queries.rows(); ++r) out.push_back(predict(queries.row(r)));
  return out;
}

}  // namespace libsquant::classical

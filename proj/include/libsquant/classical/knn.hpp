#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "libsquant/numerics/matrix.hpp"

namespace libsquant::classical {

enum class KnnWeighting { Uniform, InverseDistance };

std::string_view to_string(KnnWeighting w) noexcept;
std::optional<KnnWeighting> parse_weighting(std::string_view name) noexcept;

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

/// The k training rows closest to `query` in Euclidean distance, nearest
/// first; equal distances are ordered by training index.
std::vector<Neighbor> nearest_neighbors(const Matrix& train_x, std::span<const double> query,
                                        std::size_t k);

/// Uniform: mean neighbor target. Inverse distance: weights 1/(d + 1e-12),
/// except that a query coinciding with training rows returns the mean target
/// of the zero-distance neighbors. Throws std::invalid_argument on an empty
/// training set or k outside [1, n].
double predict_knn(const Matrix& train_x, std::span<const double> train_y,
                   std::span<const double> query, std::size_t k, KnnWeighting weighting);

struct KnnModel {
  Matrix x;
  std::vector<double> y;
  std::size_t k = 3;
  KnnWeighting weighting = KnnWeighting::InverseDistance;

  double predict(std::span<const double> query) const {
    return predict_knn(x, y, query, k, weighting);
  }
  std::vector<double> predict(const Matrix& queries) const;
};

}  // namespace libsquant::classical

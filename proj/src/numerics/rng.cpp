#include "libsquant/numerics/rng.hpp"

#include <cmath>
#include <limits>

#include "libsquant/errors.hpp"

namespace libsquant {

std::size_t SeededRng::index(std::size_t n) {
  const auto bound = static_cast<std::uint64_t>(n);
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<std::size_t>(draw % bound);
}

std::uint64_t SeededRng::derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix init_weights(std::size_t rows, std::size_t cols, SeededRng& rng) {
  return init_weights(rows, cols, cols, rows, rng);
}

Matrix init_weights(std::size_t rows, std::size_t cols, std::size_t fan_in, std::size_t fan_out,
                    SeededRng& rng) {
  if (rows == 0 || cols == 0 || fan_in + fan_out == 0) {
    throw ShapeError("init_weights: zero dimension");
  }
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = rng.uniform(-limit, limit);
  return m;
}

}  // namespace libsquant

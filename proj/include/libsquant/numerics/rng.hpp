#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "libsquant/numerics/matrix.hpp"

namespace libsquant {

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so a seed produces the same 64-bit words on every platform.
/// Floating-point and bounded-integer draws are derived from those words here
/// rather than through <random> distributions, whose algorithms are
/// implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Unbiased integer in [0, n). Requires n > 0.
  std::size_t index(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  /// Child seed for an independent sub-stream (splitmix64 of seed and stream id).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Uniform init in +-sqrt(6 / (fan_in + fan_out)). Defaults: fan_in = cols, fan_out = rows.
/// Throws ShapeError on a zero dimension.
Matrix init_weights(std::size_t rows, std::size_t cols, SeededRng& rng);
Matrix init_weights(std::size_t rows, std::size_t cols, std::size_t fan_in, std::size_t fan_out,
                    SeededRng& rng);

}  // namespace libsquant

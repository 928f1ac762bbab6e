#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "libsquant/dataset/dataset.hpp"
#include "libsquant/numerics/matrix.hpp"

namespace libsquant {

/// Per-column intensity standardization plus min-max target normalization,
/// both fitted on a training partition only.
class Scaler {
 public:
  Scaler() = default;
  Scaler(std::array<double, kIntensityCount> means, std::array<double, kIntensityCount> stds,
         double target_min, double target_max);

  /// Population mean/std per intensity column; a zero std is replaced by 1.
  /// Throws std::invalid_argument on an empty dataset.
  static Scaler fit(const Dataset& train);

  const std::array<double, kIntensityCount>& means() const noexcept { return means_; }
  const std::array<double, kIntensityCount>& stds() const noexcept { return stds_; }
  double target_min() const noexcept { return target_min_; }
  double target_max() const noexcept { return target_max_; }
  /// max - min, or 1 when the training targets are constant.
  double target_span() const noexcept { return span_; }

  double scale_intensity(std::size_t column, double value) const noexcept {
    return (value - means_[column]) / stds_[column];
  }
  double unscale_intensity(std::size_t column, double scaled) const noexcept {
    return scaled * stds_[column] + means_[column];
  }
  double normalize_target(double concentration) const noexcept {
    return (concentration - target_min_) / span_;
  }
  double denormalize_target(double normalized) const noexcept {
    return normalized * span_ + target_min_;
  }

  friend bool operator==(const Scaler&, const Scaler&) = default;

 private:
  std::array<double, kIntensityCount> means_{};
  std::array<double, kIntensityCount> stds_{};
  double target_min_ = 0.0;
  double target_max_ = 1.0;
  double span_ = 1.0;
};

/// 10 intensity steps, each step = (scaled intensity, one-hot element).
inline constexpr std::size_t kStepWidth = 1 + kElementCount;
/// Flat classical feature vector: 10 scaled intensities then the one-hot block.
inline constexpr std::size_t kFeatureCount = kIntensityCount + kElementCount;

struct EncodedSequence {
  Matrix steps;  // kIntensityCount x kStepWidth
  double target = 0.0;
  Element element = Element::Si;
};

EncodedSequence encode(const SpectralRecord& record, const Scaler& scaler);
std::vector<EncodedSequence> encode_all(const Dataset& dataset, const Scaler& scaler);

/// Feature-matrix view of a dataset for the classical regressors.
struct ScaledData {
  Matrix features;  // n x kFeatureCount
  std::vector<double> targets;
  std::vector<Element> elements;
};

ScaledData transform(const Scaler& scaler, const Dataset& dataset);
std::array<double, kFeatureCount> feature_row(const SpectralRecord& record, const Scaler& scaler);
/// Column names i1..i10, Si..Mg.
std::vector<std::string> feature_names();

}  // namespace libsquant

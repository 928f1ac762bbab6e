#include "libsquant/dataset/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace libsquant {

Scaler::Scaler(std::array<double, kIntensityCount> means, std::array<double, kIntensityCount> stds,
               double target_min, double target_max)
    : means_(means), stds_(stds), target_min_(target_min), target_max_(target_max) {
  for (auto& s : stds_) {
    if (!(s > 0.0)) s = 1.0;
  }
  span_ = target_max_ > target_min_ ? target_max_ - target_min_ : 1.0;
}

Scaler Scaler::fit(const Dataset& train) {
  if (train.empty()) throw std::invalid_argument("Scaler::fit: empty training set");
  const auto n = static_cast<double>(train.size());
  std::array<double, kIntensityCount> means{};
  std::array<double, kIntensityCount> stds{};
  for (const auto& r : train.records) {
    for (std::size_t c = 0; c < kIntensityCount; ++c) means[c] += r.intensities[c];
  }
  for (auto& m : means) m /= n;
  for (const auto& r : train.records) {
    for (std::size_t c = 0; c < kIntensityCount; ++c) {
      const double d = r.intensities[c] - means[c];
      stds[c] += d * d;
    }
  }
  for (auto& s : stds) s = std::sqrt(s / n);

  double lo = train.records.front().concentration;
  double hi = lo;
  for (const auto& r : train.records) {
    lo = std::min(lo, r.concentration);
    hi = std::max(hi, r.concentration);
  }
  return Scaler(means, stds, lo, hi);
}

EncodedSequence encode(const SpectralRecord& record, const Scaler& scaler) {
  EncodedSequence seq;
  seq.steps = Matrix(kIntensityCount, kStepWidth);
  const std::size_t hot = 1 + ordinal(record.element);
  for (std::size_t t = 0; t < kIntensityCount; ++t) {
    seq.steps(t, 0) = scaler.scale_intensity(t, record.intensities[t]);
    seq.steps(t, hot) = 1.0;
  }
  seq.target = scaler.normalize_target(record.concentration);
  seq.element = record.element;
  return seq;
}

std::vector<EncodedSequence> encode_all(const Dataset& dataset, const Scaler& scaler) {
  std::vector<EncodedSequence> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.records) out.push_back(encode(r, scaler));
  return out;
}

std::array<double, kFeatureCount> feature_row(const SpectralRecord& record, const Scaler& scaler) {
  std::array<double, kFeatureCount> row{};
  for (std::size_t c = 0; c < kIntensityCount; ++c) {
    row[c] = scaler.scale_intensity(c, record.intensities[c]);
  }
  row[kIntensityCount + ordinal(record.element)] = 1.0;
  return row;
}

ScaledData transform(const Scaler& scaler, const Dataset& dataset) {
  ScaledData out;
  out.features = Matrix(dataset.size(), kFeatureCount);
  out.targets.reserve(dataset.size());
  out.elements.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& r = dataset.records[i];
    const auto row = feature_row(r, scaler);
    std::copy(row.begin(), row.end(), out.features.row(i).begin());
    out.targets.push_back(scaler.normalize_target(r.concentration));
    out.elements.push_back(r.element);
  }
  return out;
}

std::vector<std::string> feature_names() {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= kIntensityCount; ++i) names.push_back("i" + std::to_string(i));
  for (auto e : kAllElements) names.emplace_back(symbol(e));
  return names;
}

}  // namespace libsquant

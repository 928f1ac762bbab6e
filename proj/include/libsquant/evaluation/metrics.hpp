#pragma once

#include <array>
#include <optional>
#include <span>

#include "libsquant/dataset/dataset.hpp"
#include "libsquant/dataset/scaler.hpp"

namespace libsquant::evaluation {

// All three throw ShapeError on empty or unequal-length inputs.
double mse(std::span<const double> y, std::span<const double> y_hat);
double mae(std::span<const double> y, std::span<const double> y_hat);
/// Mean |(y - y_hat) / y| as a fraction. Throws DomainError on a zero target.
double mape(std::span<const double> y, std::span<const double> y_hat);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line predicted ~ slope * nominal + intercept. Throws
/// DomainError with fewer than two points or constant nominal values.
LineFit correlation_slope(std::span<const double> nominal, std::span<const double> predicted);

struct Metrics {
  double mse = 0.0;
  double mae = 0.0;
  double mape = 0.0;  // NaN when a target is exactly zero
};

struct MetricSet {
  Metrics normalized;  // targets mapped by the training scaler to [0, 1]
  Metrics raw;         // weight-percent
  std::size_t n = 0;
};

Metrics compute(std::span<const double> y, std::span<const double> y_hat);
/// Both variants from concentrations in weight-percent.
MetricSet compute_metric_set(std::span<const double> nominal, std::span<const double> predicted,
                             const Scaler& scaler);

/// Pooled metrics, per-element metrics and their unweighted mean over the
/// elements present.
struct MetricBreakdown {
  MetricSet pooled;
  std::array<std::optional<MetricSet>, kElementCount> per_element;
  MetricSet macro;  // n = number of elements averaged
};

MetricBreakdown compute_breakdown(std::span<const double> nominal, std::span<const double> predicted,
                                  std::span<const Element> elements, const Scaler& scaler);

}  // namespace libsquant::evaluation

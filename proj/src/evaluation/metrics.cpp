#include "libsquant/evaluation/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "libsquant/errors.hpp"

namespace libsquant::evaluation {

namespace {

void check_lengths(std::span<const double> y, std::span<const double> y_hat, const char* what) {
  if (y.empty()) throw ShapeError(std::string(what) + ": empty input");
  if (y.size() != y_hat.size()) throw ShapeError(std::string(what) + ": length mismatch");
}

}  // namespace

double mse(std::span<const double> y, std::span<const double> y_hat) {
  check_lengths(y, y_hat, "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
  return s / static_cast<double>(y.size());
}

double mae(std::span<const double> y, std::span<const double> y_hat) {
  check_lengths(y, y_hat, "mae");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - y_hat[i]);
  return s / static_cast<double>(y.size());
}

double mape(std::span<const double> y, std::span<const double> y_hat) {
  check_lengths(y, y_hat, "mape");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) throw DomainError("mape: target " + std::to_string(i) + " is zero");
    s += std::abs((y[i] - y_hat[i]) / y[i]);
  }
  return s / static_cast<double>(y.size());
}

LineFit correlation_slope(std::span<const double> nominal, std::span<const double> predicted) {
  if (nominal.size() != predicted.size()) throw ShapeError("correlation_slope: length mismatch");
  const std::size_t n = nominal.size();
  if (n < 2) throw DomainError("correlation_slope: needs at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += nominal[i];
    my += predicted[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (nominal[i] - mx) * (nominal[i] - mx);
    sxy += (nominal[i] - mx) * (predicted[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("correlation_slope: nominal values have no variance");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

Metrics compute(std::span<const double> y, std::span<const double> y_hat) {
  Metrics m;
  m.mse = mse(y, y_hat);
  m.mae = mae(y, y_hat);
  try {
    m.mape = mape(y, y_hat);
  } catch (const DomainError&) {
    m.mape = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

MetricSet compute_metric_set(std::span<const double> nominal, std::span<const double> predicted,
                             const Scaler& scaler) {
  check_lengths(nominal, predicted, "metrics");
  std::vector<double> yn(nominal.size());
  std::vector<double> pn(predicted.size());
  for (std::size_t i = 0; i < nominal.size(); ++i) {
    yn[i] = scaler.normalize_target(nominal[i]);
    pn[i] = scaler.normalize_target(predicted[i]);
  }
  return {compute(yn, pn), compute(nominal, predicted), nominal.size()};
}

MetricBreakdown compute_breakdown(std::span<const double> nominal, std::span<const double> predicted,
                                  std::span<const Element> elements, const Scaler& scaler) {
  if (elements.size() != nominal.size()) throw ShapeError("metrics: element list length mismatch");
  MetricBreakdown b;
  b.pooled = compute_metric_set(nominal, predicted, scaler);

  std::size_t groups = 0;
  for (Element e : kAllElements) {
    std::vector<double> y;
    std::vector<double> p;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i] != e) continue;
      y.push_back(nominal[i]);
      p.push_back(predicted[i]);
    }
    if (y.empty()) continue;
    const MetricSet m = compute_metric_set(y, p, scaler);
    b.per_element[ordinal(e)] = m;
    ++groups;
    for (auto [dst, src] : {std::pair{&b.macro.normalized, &m.normalized}, std::pair{&b.macro.raw, &m.raw}}) {
      dst->mse += src->mse;
      dst->mae += src->mae;
      dst->mape += src->mape;
    }
  }
  b.macro.n = groups;
  for (Metrics* m : {&b.macro.normalized, &b.macro.raw}) {
    m->mse /= static_cast<double>(groups);
    m->mae /= static_cast<double>(groups);
    m->mape /= static_cast<double>(groups);
  }
  return b;
}

}  // namespace libsquant::evaluation

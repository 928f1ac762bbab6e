#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "libsquant/evaluation/benchmark.hpp"
#include "libsquant/evaluation/metrics.hpp"

namespace libsquant::evaluation {

/// Predicted-vs-nominal scatter with the identity diagonal, the fitted line
/// and a slope annotation. Points are colored by element.
std::string scatter_svg(const std::string& title, std::span<const Prediction> points,
                        const std::optional<LineFit>& fit);

struct Series {
  std::string label;
  std::vector<double> y;
};

/// Polyline plot sharing one x axis; `log_x` plots log10(x).
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, std::span<const double> x,
                          std::span<const Series> series, bool log_x);

std::string xml_escape(const std::string& text);

}  // namespace libsquant::evaluation

#include "libsquant/evaluation/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace libsquant::evaluation {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                  "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                                                  "#bcbd22", "#17becf"};

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
};

Axis padded(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  if (lo == hi) {
    const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - d, hi + d};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

class Canvas {
 public:
  Canvas(Axis x, Axis y) : x_(x), y_(y) {}

  double px(double v) const {
    return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double v) const {
    return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  void frame(std::string& out, const std::string& title, const std::string& xl,
             const std::string& yl, bool log_x) const {
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        kWidth, kHeight);
    out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
    out += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       (kWidth - kRight + kLeft) / 2.0, xml_escape(title));
    const double x0 = px(x_.lo), x1 = px(x_.hi), y0 = py(y_.lo), y1 = py(y_.hi);
    out += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
        "stroke=\"black\"/>\n",
        x0, y1, x1 - x0, y0 - y1);
    for (int k = 0; k <= 4; ++k) {
      const double vx = x_.lo + (x_.hi - x_.lo) * k / 4.0;
      const double vy = y_.lo + (y_.hi - y_.lo) * k / 4.0;
      out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
                         px(vx), y0, y0 + 5);
      out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", px(vx),
                         y0 + 19, log_x ? fmt::format("1e{:.2g}", vx) : fmt::format("{:.3g}", vx));
      out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n",
                         x0 - 5, py(vy), x0);
      out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n", x0 - 8,
                         py(vy) + 4, vy);
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                       (x0 + x1) / 2.0, kHeight - 12, xml_escape(xl));
    out += fmt::format(
        "<text x=\"16\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">{1}</text>\n",
        (y0 + y1) / 2.0, xml_escape(yl));
  }

  /// Segment of y = a x + b clipped to the x range.
  void line(std::string& out, double a, double b, const char* style) const {
    out += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" {}/>\n",
                       px(x_.lo), py(a * x_.lo + b), px(x_.hi), py(a * x_.hi + b), style);
  }

  void clip_open(std::string& out) const {
    out += fmt::format(
        "<clipPath id=\"plot\"><rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\"/></clipPath>\n"
        "<g clip-path=\"url(#plot)\">\n",
        px(x_.lo), py(y_.hi), px(x_.hi) - px(x_.lo), py(y_.lo) - py(y_.hi));
  }

 private:
  Axis x_;
  Axis y_;
};

void legend_entry(std::string& out, std::size_t row, const char* color, const std::string& label) {
  const double y = kTop + 10 + 18.0 * static_cast<double>(row);
  const double x = kWidth - kRight + 15;
  out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", x,
                     y - 9, color);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", x + 15, y, xml_escape(label));
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string scatter_svg(const std::string& title, std::span<const Prediction> points,
                        const std::optional<LineFit>& fit) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : points) {
    for (double v : {p.nominal, p.predicted}) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const Axis axis = padded(lo, hi);
  const Canvas canvas(axis, axis);
  std::string out;
  canvas.frame(out, title, "nominal concentration (wt%)", "predicted concentration (wt%)", false);
  canvas.clip_open(out);
  canvas.line(out, 1.0, 0.0, "stroke=\"#999\" stroke-dasharray=\"4 3\"");
  if (fit) canvas.line(out, fit->slope, fit->intercept, "stroke=\"black\" stroke-width=\"1.5\"");
  for (const auto& p : points) {
    if (!std::isfinite(p.nominal) || !std::isfinite(p.predicted)) continue;
    out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                       canvas.px(p.nominal), canvas.py(p.predicted), kPalette[ordinal(p.element)]);
  }
  out += "</g>\n";
  for (Element e : kAllElements) legend_entry(out, ordinal(e), kPalette[ordinal(e)], std::string(symbol(e)));
  const double note_y = kTop + 10 + 18.0 * (kElementCount + 1);
  if (fit) {
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">slope {:.3f}</text>\n", kWidth - kRight + 15,
                       note_y, fit->slope);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">intercept {:.3f}</text>\n",
                       kWidth - kRight + 15, note_y + 18, fit->intercept);
  } else {
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">no fit</text>\n", kWidth - kRight + 15, note_y);
  }
  out += "</svg>\n";
  return out;
}

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, std::span<const double> x,
                          std::span<const Series> series, bool log_x) {
  std::vector<double> xs(x.begin(), x.end());
  if (log_x) {
    for (double& v : xs) {
      if (!(v > 0.0)) throw std::invalid_argument("log axis needs positive x values");
      v = std::log10(v);
    }
  }
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (double v : xs) {
    xlo = std::min(xlo, v);
    xhi = std::max(xhi, v);
  }
  for (const auto& s : series) {
    if (s.y.size() != xs.size()) throw std::invalid_argument("series length does not match x");
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  }
  const Canvas canvas(padded(xlo, xhi), padded(ylo, yhi));
  std::string out;
  canvas.frame(out, title, x_label, y_label, log_x);
  canvas.clip_open(out);
  canvas.line(out, 0.0, 0.0, "stroke=\"#bbb\"");
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(series[k].y[i])) continue;
      pts += fmt::format("{:.1f},{:.1f} ", canvas.px(xs[i]), canvas.py(series[k].y[i]));
    }
    out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>\n",
                       pts, kPalette[k % kPalette.size()],
                       k >= kPalette.size() ? " stroke-dasharray=\"5 3\"" : "");
  }
  out += "</g>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    legend_entry(out, k, kPalette[k % kPalette.size()], series[k].label);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace libsquant::evaluation

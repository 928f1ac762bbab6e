#include "libsquant/classical/linear.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "libsquant/errors.hpp"

namespace libsquant::classical {

namespace {

constexpr double kJitter = 1e-10;
constexpr double kPivotTolerance = 1e-13;

}  // namespace

double LinearModel::predict(std::span<const double> x) const {
  if (x.size() != coefficients.size()) {
    throw ShapeError("linear model expects " + std::to_string(coefficients.size()) + " features");
  }
  return intercept + dot(coefficients, x);
}

std::vector<double> LinearModel::predict(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)));
  return out;
}

bool cholesky_solve(Matrix a, std::span<double> b) {
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  if (scale == 0.0) scale = 1.0;

  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > kPivotTolerance * scale)) return false;
    const double l = std::sqrt(d);
    a(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
    b[i] = s / a(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(k, i) * b[k];
    b[i] = s / a(i, i);
  }
  return true;
}

LinearModel fit_ols(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n == 0) throw ShapeError("fit_ols: no rows");
  if (y.size() != n) throw ShapeError("fit_ols: target length does not match row count");

  std::vector<double> mean_x(p, 0.0);
  double mean_y = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) mean_x[c] += x(r, c);
    mean_y += y[r];
  }
  for (double& m : mean_x) m /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  Matrix gram(p, p, 0.0);
  std::vector<double> rhs(p, 0.0);
  std::vector<double> xc(p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) xc[c] = x(r, c) - mean_x[c];
    const double yc = y[r] - mean_y;
    for (std::size_t i = 0; i < p; ++i) {
      rhs[i] += xc[i] * yc;
      for (std::size_t j = 0; j <= i; ++j) gram(i, j) += xc[i] * xc[j];
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) gram(j, i) = gram(i, j);
  }

  LinearModel model;
  model.coefficients = rhs;
  if (p > 0 && !cholesky_solve(gram, model.coefficients)) {
    for (std::size_t i = 0; i < p; ++i) gram(i, i) += kJitter;
    model.coefficients = rhs;
    if (!cholesky_solve(gram, model.coefficients)) {
      // Columns that never vary: drop them and solve the rest.
      std::vector<std::size_t> live;
      for (std::size_t i = 0; i < p; ++i) {
        if (gram(i, i) > kJitter) live.push_back(i);
      }
      Matrix sub(live.size(), live.size());
      std::vector<double> b(live.size());
      for (std::size_t i = 0; i < live.size(); ++i) {
        b[i] = rhs[live[i]];
        for (std::size_t j = 0; j < live.size(); ++j) sub(i, j) = gram(live[i], live[j]);
      }
      if (!live.empty() && !cholesky_solve(sub, b)) std::fill(b.begin(), b.end(), 0.0);
      std::fill(model.coefficients.begin(), model.coefficients.end(), 0.0);
      for (std::size_t i = 0; i < live.size(); ++i) model.coefficients[live[i]] = b[i];
    }
  }
  model.intercept = mean_y - dot(model.coefficients, mean_x);
  return model;
}

}  // namespace libsquant::classical

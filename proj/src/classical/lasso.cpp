#include "libsquant/classical/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "libsquant/errors.hpp"

namespace libsquant::classical {

namespace {

/// Centered design and target shared by every lasso entry point, so the
/// lambda_max bound and the coordinate updates see identical arithmetic.
struct Centered {
  std::size_t n = 0;
  std::size_t p = 0;
  Matrix xc;  // column-major copy: p x n
  std::vector<double> mean_x;
  double mean_y = 0.0;
  std::vector<double> yc;
  std::vector<double> norm;  // (1/n) sum xc^2 per column
};

Centered center(const Matrix& x, std::span<const double> y) {
  if (x.rows() == 0) throw ShapeError("lasso: no rows");
  if (y.size() != x.rows()) throw ShapeError("lasso: target length does not match row count");
  Centered c;
  c.n = x.rows();
  c.p = x.cols();
  const double inv_n = 1.0 / static_cast<double>(c.n);
  c.mean_x.assign(c.p, 0.0);
  for (std::size_t r = 0; r < c.n; ++r) {
    for (std::size_t j = 0; j < c.p; ++j) c.mean_x[j] += x(r, j);
    c.mean_y += y[r];
  }
  for (double& m : c.mean_x) m *= inv_n;
  c.mean_y *= inv_n;
  c.xc = Matrix(c.p, c.n);
  c.norm.assign(c.p, 0.0);
  for (std::size_t j = 0; j < c.p; ++j) {
    for (std::size_t r = 0; r < c.n; ++r) {
      const double v = x(r, j) - c.mean_x[j];
      c.xc(j, r) = v;
      c.norm[j] += v * v;
    }
    c.norm[j] *= inv_n;
  }
  c.yc.resize(c.n);
  for (std::size_t r = 0; r < c.n; ++r) c.yc[r] = y[r] - c.mean_y;
  return c;
}

/// (1/n) x_j^T (residual + x_j a_j)
double partial_correlation(const Centered& c, std::size_t j, std::span<const double> residual,
                           double a_j) {
  double s = 0.0;
  const auto col = c.xc.row(j);
  for (std::size_t r = 0; r < c.n; ++r) s += col[r] * (residual[r] + col[r] * a_j);
  return s / static_cast<double>(c.n);
}

struct SolveResult {
  bool converged = false;
  double max_change = 0.0;
};

SolveResult coordinate_descent(const Centered& c, double lambda, std::vector<double>& a,
                               const LassoOptions& options) {
  std::vector<double> residual = c.yc;
  for (std::size_t j = 0; j < c.p; ++j) {
    if (a[j] == 0.0) continue;
    const auto col = c.xc.row(j);
    for (std::size_t r = 0; r < c.n; ++r) residual[r] -= col[r] * a[j];
  }
  SolveResult result;
  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < c.p; ++j) {
      const double old = a[j];
      const double updated =
          c.norm[j] > 0.0 ? soft_threshold(partial_correlation(c, j, residual, old), lambda) / c.norm[j]
                          : 0.0;
      const double delta = updated - old;
      if (delta != 0.0) {
        const auto col = c.xc.row(j);
        for (std::size_t r = 0; r < c.n; ++r) residual[r] -= col[r] * delta;
        a[j] = updated;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    result.max_change = max_change;
    if (max_change < options.tolerance) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

LinearModel finish(const Centered& c, std::vector<double> a) {
  LinearModel model;
  model.intercept = c.mean_y - dot(a, c.mean_x);
  model.coefficients = std::move(a);
  return model;
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lasso: lambda must be finite and non-negative");
  }
}

}  // namespace

double soft_threshold(double z, double gamma) noexcept {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

Matrix standardize_columns(const Matrix& x) {
  Matrix z = x;
  const std::size_t n = x.rows();
  if (n == 0) return z;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x(r, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (x(r, j) - mean) * (x(r, j) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) z(r, j) = sd > 0.0 ? (x(r, j) - mean) / sd : 0.0;
  }
  return z;
}

double lasso_lambda_max(const Matrix& x, std::span<const double> y) {
  const Centered c = center(x, y);
  double best = 0.0;
  for (std::size_t j = 0; j < c.p; ++j) {
    best = std::max(best, std::abs(partial_correlation(c, j, c.yc, 0.0)));
  }
  return best;
}

LinearModel fit_lasso(const Matrix& x, std::span<const double> y, double lambda,
                      const LassoOptions& options) {
  check_lambda(lambda);
  const Centered c = center(x, y);
  std::vector<double> a(c.p, 0.0);
  const SolveResult r = coordinate_descent(c, lambda, a, options);
  if (!r.converged) {
    throw ConvergenceError(fmt::format("lasso did not converge in {} sweeps (lambda {}, last change {})",
                                       options.max_sweeps, lambda, r.max_change),
                           r.max_change);
  }
  return finish(c, std::move(a));
}

LassoPath lasso_path(const Matrix& x, std::span<const double> y, std::span<const double> lambdas,
                     const LassoOptions& options) {
  for (double l : lambdas) check_lambda(l);
  const Centered c = center(x, y);
  std::vector<double> a(c.p, 0.0);
  LassoPath path;
  path.points.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const SolveResult r = coordinate_descent(c, lambda, a, options);
    path.points.push_back({lambda, finish(c, a), r.converged, r.max_change});
  }
  return path;
}

std::vector<double> default_lambda_grid(const Matrix& x, std::span<const double> y,
                                        std::size_t count, double ratio) {
  if (count == 0) throw std::invalid_argument("lambda grid needs at least one point");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("lambda ratio must be in (0, 1]");
  const double top = lasso_lambda_max(x, y);
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = top;
    return grid;
  }
  const double step = std::log(ratio) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = top * std::exp(step * static_cast<double>(k));
  grid.front() = top;
  return grid;
}

void write_path_csv(const LassoPath& path, std::span<const std::string> feature_names,
                    std::ostream& out) {
  out << "lambda";
  for (const auto& name : feature_names) out << ",coef_" << name;
  out << '\n';
  for (const auto& point : path.points) {
    if (point.model.coefficients.size() != feature_names.size()) {
      throw ShapeError("lasso path: feature name count does not match coefficients");
    }
    out << fmt::format("{}", point.lambda);
    for (double v : point.model.coefficients) out << fmt::format(",{}", v);
    out << '\n';
  }
}

}  // namespace libsquant::classical

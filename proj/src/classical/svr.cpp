#include "libsquant/classical/svr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "libsquant/errors.hpp"

namespace libsquant::classical {

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  switch (kind) {
    case KernelKind::Linear:
      return dot(a, b);
    case KernelKind::Rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
      return std::exp(-gamma * d2);
    }
    case KernelKind::Polynomial:
      return std::pow(dot(a, b) + coef, degree);
  }
  return 0.0;
}

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Rbf: return "rbf";
    case KernelKind::Polynomial: return "poly";
  }
  return "?";
}

std::optional<KernelKind> parse_kernel(std::string_view name) noexcept {
  if (name == "linear") return KernelKind::Linear;
  if (name == "rbf") return KernelKind::Rbf;
  if (name == "poly" || name == "polynomial") return KernelKind::Polynomial;
  return std::nullopt;
}

Matrix gram_matrix(const Matrix& x, const Kernel& kernel) {
  const std::size_t n = x.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      k(i, j) = kernel(x.row(i), x.row(j));
      k(j, i) = k(i, j);
    }
  }
  return k;
}

double svr_dual_objective(const Matrix& gram, std::span<const double> y,
                          std::span<const double> beta, double epsilon) {
  const std::size_t n = beta.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += y[i] * beta[i] - epsilon * std::abs(beta[i]);
    for (std::size_t j = 0; j < n; ++j) quad += beta[i] * gram(i, j) * beta[j];
  }
  return linear - 0.5 * quad;
}

namespace {

/// Gain from moving beta_i up by the rate of the objective's right derivative.
double up_rate(double g, double beta, double eps) { return g - (beta >= 0.0 ? eps : -eps); }
/// Left derivative: the rate lost when beta_j moves down.
double down_rate(double g, double beta, double eps) { return g - (beta > 0.0 ? eps : -eps); }

/// Change in the dual when beta_i += t and beta_j -= t.
double pair_gain(double t, double bi, double bj, double dg, double eta, double eps) {
  return t * dg - 0.5 * eta * t * t -
         eps * (std::abs(bi + t) - std::abs(bi) + std::abs(bj - t) - std::abs(bj));
}

/// Exact maximizer of the concave piecewise quadratic pair_gain over [lo, hi].
double best_step(double lo, double hi, double bi, double bj, double dg, double eta, double eps) {
  std::array<double, 4> knots{lo, hi, -bi, bj};
  std::sort(knots.begin(), knots.end());
  std::vector<double> candidates{lo, hi};
  for (double k : knots) {
    if (k > lo && k < hi) candidates.push_back(k);
  }
  std::sort(candidates.begin(), candidates.end());
  const std::size_t segments = candidates.size() - 1;
  if (eta > 0.0) {
    for (std::size_t s = 0; s < segments; ++s) {
      const double a = candidates[s];
      const double b = candidates[s + 1];
      const double mid = 0.5 * (a + b);
      const double si = (bi + mid) >= 0.0 ? 1.0 : -1.0;
      const double sj = (bj - mid) >= 0.0 ? 1.0 : -1.0;
      const double t = (dg - eps * (si - sj)) / eta;
      candidates.push_back(std::clamp(t, a, b));
    }
  }
  double best_t = 0.0;
  double best_gain = 0.0;
  for (double t : candidates) {
    const double g = pair_gain(t, bi, bj, dg, eta, eps);
    if (g > best_gain) {
      best_gain = g;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace

SvrModel fit_svr(const Matrix& x, std::span<const double> y, const SvrOptions& options) {
  const std::size_t n = x.rows();
  if (n == 0) throw ShapeError("fit_svr: no rows");
  if (y.size() != n) throw ShapeError("fit_svr: target length does not match row count");
  if (!(options.c > 0.0)) throw std::invalid_argument("fit_svr: C must be positive");
  if (!(options.epsilon >= 0.0)) throw std::invalid_argument("fit_svr: epsilon must be >= 0");

  SvrModel model;
  model.kernel = options.kernel;
  if (model.kernel.kind == KernelKind::Rbf && model.kernel.gamma <= 0.0) {
    model.kernel.gamma = 1.0 / static_cast<double>(std::max<std::size_t>(1, x.cols()));
  }
  model.c = options.c;
  model.epsilon = options.epsilon;

  const double c = options.c;
  const double eps = options.epsilon;
  const Matrix k = gram_matrix(x, model.kernel);
  std::vector<double> beta(n, 0.0);
  std::vector<double> g(y.begin(), y.end());  // y - K beta

  double up_max = 0.0;
  double down_min = 0.0;
  std::size_t iter = 0;
  for (;; ++iter) {
    std::size_t i = n;
    std::size_t j = n;
    up_max = -std::numeric_limits<double>::infinity();
    down_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (beta[t] < c) {
        const double u = up_rate(g[t], beta[t], eps);
        if (u > up_max) {
          up_max = u;
          i = t;
        }
      }
      if (beta[t] > -c) {
        const double d = down_rate(g[t], beta[t], eps);
        if (d < down_min) {
          down_min = d;
          j = t;
        }
      }
    }
    const double violation = up_max - down_min;
    if (i == n || j == n || violation < options.tolerance) {
      model.kkt_violation = std::max(0.0, violation);
      break;
    }
    if (iter >= options.max_iterations) {
      throw ConvergenceError(
          fmt::format("svr did not converge in {} iterations (KKT violation {})",
                      options.max_iterations, violation),
          violation);
    }
    double t = 0.0;
    if (i != j) {
      const double lo = std::max(-c - beta[i], beta[j] - c);
      const double hi = std::min(c - beta[i], beta[j] + c);
      const double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);
      t = best_step(lo, hi, beta[i], beta[j], g[i] - g[j], std::max(eta, 0.0), eps);
    }
    if (t == 0.0) {
      throw ConvergenceError(fmt::format("svr stalled with KKT violation {}", violation), violation);
    }
    beta[i] += t;
    beta[j] -= t;
    for (std::size_t r = 0; r < n; ++r) g[r] -= t * (k(r, i) - k(r, j));
  }
  model.iterations = iter;

  if (std::isfinite(up_max) && std::isfinite(down_min)) {
    model.bias = 0.5 * (up_max + down_min);
  } else if (std::isfinite(up_max)) {
    model.bias = up_max;
  } else {
    model.bias = down_min;
  }

  std::vector<double> sv_rows;
  for (std::size_t r = 0; r < n; ++r) {
    if (beta[r] == 0.0) continue;
    model.dual.push_back(beta[r]);
    model.support_indices.push_back(r);
    sv_rows.insert(sv_rows.end(), x.row(r).begin(), x.row(r).end());
  }
  model.support_vectors = Matrix(model.dual.size(), x.cols(), std::move(sv_rows));
  return model;
}

double SvrModel::predict(std::span<const double> x) const {
  if (!dual.empty() && x.size() != support_vectors.cols()) {
    throw ShapeError("svr: feature count mismatch");
  }
  double f = bias;
  for (std::size_t s = 0; s < dual.size(); ++s) f += dual[s] * kernel(support_vectors.row(s), x);
  return f;
}

std::vector<double> SvrModel::predict(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)));
  return out;
}

std::vector<double> full_dual(const SvrModel& model, std::size_t n) {
  std::vector<double> beta(n, 0.0);
  for (std::size_t s = 0; s < model.dual.size(); ++s) beta.at(model.support_indices[s]) = model.dual[s];
  return beta;
}

}  // namespace libsquant::classical

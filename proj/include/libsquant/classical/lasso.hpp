#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "libsquant/classical/linear.hpp"

namespace libsquant::classical {

struct LassoOptions {
  double tolerance = 1e-8;  // max absolute coefficient change per sweep
  std::size_t max_sweeps = 100000;
};

double soft_threshold(double z, double gamma) noexcept;

/// Columns shifted to mean 0 and scaled to population std 1; constant
/// columns become all zeros.
Matrix standardize_columns(const Matrix& x);

/// Smallest lambda at which every coefficient is exactly zero:
/// max_j |x_j^T (y - mean y)| / n with x_j centered.
double lasso_lambda_max(const Matrix& x, std::span<const double> y);

/// Cyclic coordinate descent on (1/2n)||y - a0 - X a||^2 + lambda ||a||_1 with
/// an unpenalized intercept. Throws ConvergenceError after max_sweeps.
LinearModel fit_lasso(const Matrix& x, std::span<const double> y, double lambda,
                      const LassoOptions& options = {});

struct LassoPathPoint {
  double lambda = 0.0;
  LinearModel model;
  bool converged = true;
  double max_change = 0.0;  // last sweep's largest coefficient update
};

struct LassoPath {
  std::vector<LassoPathPoint> points;  // grid order
};

/// Fits each lambda in turn, warm-starting from the previous solution.
/// Non-converged points are flagged rather than thrown.
LassoPath lasso_path(const Matrix& x, std::span<const double> y, std::span<const double> lambdas,
                     const LassoOptions& options = {});

/// `count` log-spaced values from lambda_max down to lambda_max * ratio.
std::vector<double> default_lambda_grid(const Matrix& x, std::span<const double> y,
                                        std::size_t count = 50, double ratio = 1e-3);

/// Header `lambda,coef_<name>...`, one row per path point.
void write_path_csv(const LassoPath& path, std::span<const std::string> feature_names,
                    std::ostream& out);

}  // namespace libsquant::classical

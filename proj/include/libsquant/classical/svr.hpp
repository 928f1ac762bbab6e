#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "libsquant/numerics/matrix.hpp"

namespace libsquant::classical {

enum class KernelKind { Linear, Rbf, Polynomial };

struct Kernel {
  KernelKind kind = KernelKind::Linear;
  double gamma = 0.0;  // rbf: exp(-gamma |x - z|^2); 0 means 1 / n_features
  int degree = 3;      // polynomial: (x.z + coef)^degree
  double coef = 1.0;

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

std::string_view to_string(KernelKind kind) noexcept;
std::optional<KernelKind> parse_kernel(std::string_view name) noexcept;

struct SvrOptions {
  double c = 10.0;
  double epsilon = 0.01;
  Kernel kernel;
  double tolerance = 1e-3;  // maximal KKT violation at termination
  std::size_t max_iterations = 1000000;
};

/// Fitted epsilon-SVR. Only training points with a nonzero dual coefficient
/// beta = alpha - alpha* are kept.
struct SvrModel {
  Kernel kernel;  // gamma resolved
  Matrix support_vectors;
  std::vector<double> dual;  // alpha_n - alpha_n*
  std::vector<std::size_t> support_indices;  // rows of the training matrix
  double bias = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
  std::size_t iterations = 0;
  double kkt_violation = 0.0;

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
};

/// Solves the epsilon-SVR dual by pairwise coordinate ascent (SMO) over
/// beta with sum(beta) = 0 and |beta| <= C. Throws std::invalid_argument on
/// C <= 0 or epsilon < 0, ConvergenceError with the remaining KKT violation
/// when max_iterations is reached.
SvrModel fit_svr(const Matrix& x, std::span<const double> y, const SvrOptions& options = {});

/// The dual returned by fit_svr for all n training points (zeros included).
std::vector<double> full_dual(const SvrModel& model, std::size_t n);

/// y^T beta - epsilon sum|beta| - 1/2 beta^T K beta.
double svr_dual_objective(const Matrix& gram, std::span<const double> y,
                          std::span<const double> beta, double epsilon);

Matrix gram_matrix(const Matrix& x, const Kernel& kernel);

}  // namespace libsquant::classical

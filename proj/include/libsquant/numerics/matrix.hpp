#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace libsquant {

/// Dense row-major matrix of doubles. Column vectors are n x 1 matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws ShapeError unless data.size() == rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  void fill(double value) noexcept;
  Matrix transpose() const;
  bool all_finite() const noexcept;
  double frobenius_norm() const noexcept;
  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double k) noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double k);
Matrix operator*(double k, Matrix a);

/// Standard product. Throws ShapeError when a.cols() != b.rows(), EvaluationError on overflow.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);

// Unchecked span kernels for the training hot paths. `offset` selects a
// column block [offset, offset + x.size()) of `w`, which is how the gated
// cells address the h and x halves of their concatenated-input weights.

/// y += w[:, offset:offset+x.size()] * x
void gemv_acc(const Matrix& w, std::span<const double> x, std::span<double> y,
              std::size_t offset = 0) noexcept;
/// x += w[:, offset:offset+x.size()]^T * y
void gemv_t_acc(const Matrix& w, std::span<const double> y, std::span<double> x,
                std::size_t offset = 0) noexcept;
/// g[:, offset:offset+x.size()] += y * x^T
void ger_acc(Matrix& g, std::span<const double> y, std::span<const double> x,
             std::size_t offset = 0) noexcept;

double dot(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace libsquant

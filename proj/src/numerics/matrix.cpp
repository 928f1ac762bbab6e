#include "libsquant/numerics/matrix.hpp"

#include <cmath>
#include <string>

#include "libsquant/errors.hpp"

namespace libsquant {

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) + " does not match " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

void Matrix::fill(double value) noexcept {
  for (auto& v : data_) v = value;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

bool Matrix::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Matrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double k) noexcept {
  for (auto& v : data_) v *= k;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double k) { return a *= k; }
Matrix operator*(double k, Matrix a) { return a *= k; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + shape_of(a) + " x " + shape_of(b));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  if (!out.all_finite()) throw EvaluationError("matmul: non-finite result");
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out = a;
  auto v = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= bv[i];
  return out;
}

void gemv_acc(const Matrix& w, std::span<const double> x, std::span<double> y,
              std::size_t offset) noexcept {
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double* wr = w.row(r).data() + offset;
    double s = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) s += wr[c] * x[c];
    y[r] += s;
  }
}

void gemv_t_acc(const Matrix& w, std::span<const double> y, std::span<double> x,
                std::size_t offset) noexcept {
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    const double* wr = w.row(r).data() + offset;
    for (std::size_t c = 0; c < x.size(); ++c) x[c] += wr[c] * yr;
  }
}

void ger_acc(Matrix& g, std::span<const double> y, std::span<const double> x,
             std::size_t offset) noexcept {
  for (std::size_t r = 0; r < g.rows(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    double* gr = g.row(r).data() + offset;
    for (std::size_t c = 0; c < x.size(); ++c) gr[c] += yr * x[c];
  }
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace libsquant

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "libsquant/errors.hpp"
#include "libsquant/numerics/activation.hpp"
#include "libsquant/numerics/gradient_check.hpp"
#include "libsquant/numerics/matrix.hpp"
#include "libsquant/numerics/rng.hpp"

using namespace libsquant;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, SeededRng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST(Matrix, ConstructorRejectsWrongSize) {
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
}

TEST(Matrix, MatmulHandOracle) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  const Matrix b = Matrix::from_rows({{5}, {6}});
  EXPECT_EQ(matmul(a, b), Matrix::from_rows({{17}, {39}}));
}

TEST(Matrix, IdentityAndZero) {
  const Matrix m = Matrix::from_rows({{0.5, -2}, {7, 3}});
  EXPECT_EQ(matmul(Matrix::identity(2), m), m);
  EXPECT_EQ(matmul(Matrix(2, 2, 0.0), m), Matrix(2, 2, 0.0));
}

TEST(Matrix, MatmulShapeMismatch) {
  EXPECT_THROW(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST(Matrix, MatmulOverflowIsEvaluationError) {
  const double big = std::numeric_limits<double>::max();
  EXPECT_THROW(matmul(Matrix(1, 2, big), Matrix(2, 1, big)), EvaluationError);
}

TEST(Matrix, AssociativityOnRandomTriples) {
  SeededRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(5), k = 1 + rng.index(5), m = 1 + rng.index(5),
                      p = 1 + rng.index(5);
    const Matrix a = random_matrix(n, k, rng), b = random_matrix(k, m, rng),
                 c = random_matrix(m, p, rng);
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    const double rel = (left - right).frobenius_norm() / std::max(left.frobenius_norm(), 1e-300);
    EXPECT_LT(rel, 1e-10);
  }
}

TEST(Matrix, TransposeAndKernels) {
  const Matrix w = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(w.transpose(), Matrix::from_rows({{1, 4}, {2, 5}, {3, 6}}));
  std::vector<double> y(2, 0.0);
  const std::vector<double> x{1.0, 1.0};
  gemv_acc(w, x, y, 1);
  EXPECT_DOUBLE_EQ(y[0], 5.0);
  EXPECT_DOUBLE_EQ(y[1], 11.0);
  std::vector<double> xt(3, 0.0);
  gemv_t_acc(w, std::vector<double>{1.0, 2.0}, xt);
  EXPECT_DOUBLE_EQ(xt[0], 9.0);
  EXPECT_DOUBLE_EQ(xt[2], 15.0);
  Matrix g(2, 3, 0.0);
  ger_acc(g, std::vector<double>{1.0, 2.0}, std::vector<double>{3.0}, 2);
  EXPECT_EQ(g, Matrix::from_rows({{0, 0, 3}, {0, 0, 6}}));
}

TEST(Activation, KnownValues) {
  EXPECT_DOUBLE_EQ(activate(Activation::TanSigmoid, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(activate(Activation::LogSigmoid, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(activate(Activation::Relu, -2.0), 0.0);
  EXPECT_DOUBLE_EQ(activate(Activation::Linear, -2.0), -2.0);
  const Matrix s = apply_activation(Activation::Softmax, Matrix(1, 3, 0.0));
  for (double v : s.values()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Activation, SoftmaxRowsSumToOne) {
  SeededRng rng(3);
  Matrix x = random_matrix(4, 5, rng);
  x *= 50.0;
  const Matrix s = apply_activation(Activation::Softmax, x);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double sum = 0.0;
    for (double v : s.row(r)) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Activation, SigmoidStableAtExtremes) {
  EXPECT_EQ(activate(Activation::LogSigmoid, -1000.0), 0.0);
  EXPECT_EQ(activate(Activation::LogSigmoid, 1000.0), 1.0);
}

TEST(Activation, NamesRoundTrip) {
  for (Activation a : {Activation::Linear, Activation::LogSigmoid, Activation::TanSigmoid,
                       Activation::Relu, Activation::Softmax}) {
    EXPECT_EQ(parse_activation(to_string(a)), a);
  }
  EXPECT_EQ(parse_activation("purelin"), Activation::Linear);
  EXPECT_FALSE(parse_activation("swish").has_value());
}

TEST(Activation, DerivativesMatchFiniteDifferences) {
  SeededRng rng(11);
  for (Activation a : {Activation::Linear, Activation::LogSigmoid, Activation::TanSigmoid,
                       Activation::Relu}) {
    for (int i = 0; i < 100; ++i) {
      double x0 = rng.uniform(-4.0, 4.0);
      if (a == Activation::Relu && std::abs(x0) < 1e-3) x0 = 0.5;
      const Matrix x(1, 1, x0);
      const Matrix fd = finite_diff_gradient(
          [a](const Matrix& m) { return activate(a, m[0]); }, x, 1e-6);
      const Matrix an(1, 1, activation_derivative(a, x0));
      EXPECT_LT(relative_error(an, fd), 1e-6) << to_string(a) << " at " << x0;
      EXPECT_NEAR(activation_derivative_from_output(a, activate(a, x0)), an[0], 1e-12);
    }
  }
}

TEST(GradientCheck, Oracles) {
  const Matrix x(1, 1, 3.0);
  EXPECT_NEAR(finite_diff_gradient([](const Matrix& m) { return m[0] * m[0]; }, x, 1e-5)[0], 6.0,
              1e-8);
  const Matrix v = Matrix::from_rows({{1, 2, 3}});
  const Matrix c = finite_diff_gradient([](const Matrix&) { return 4.0; }, v);
  for (double g : c.values()) EXPECT_EQ(g, 0.0);
  const Matrix s = finite_diff_gradient(
      [](const Matrix& m) {
        double t = 0.0;
        for (double e : m.values()) t += e;
        return t;
      },
      v);
  for (double g : s.values()) EXPECT_NEAR(g, 1.0, 1e-9);
}

TEST(GradientCheck, Errors) {
  const Matrix x(1, 1, 1.0);
  EXPECT_THROW(finite_diff_gradient([](const Matrix&) { return 1.0; }, x, 0.0),
               std::invalid_argument);
  EXPECT_THROW(finite_diff_gradient([](const Matrix&) { return std::nan(""); }, x),
               EvaluationError);
}

TEST(Rng, SameSeedSameStream) {
  SeededRng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, Seed42StreamIsFrozen) {
  // std::mt19937_64's 10000th output for its default seed is fixed by the
  // C++ standard; the first words for seed 42 are frozen here.
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ull);
  SeededRng rng(42);
  const std::uint64_t first = rng.next_u64();
  SeededRng again(42);
  EXPECT_EQ(again.next_u64(), first);
  EXPECT_EQ(first, std::mt19937_64(42)());
}

TEST(Rng, IndexAndUniformBounds) {
  SeededRng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.index(7), 7u);
  }
}

TEST(Rng, ShuffleIsPermutation) {
  SeededRng rng(5);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Rng, DeriveSeparatesStreams) {
  EXPECT_NE(SeededRng::derive(42, 0), SeededRng::derive(42, 1));
  EXPECT_NE(SeededRng::derive(42, 0), SeededRng::derive(43, 0));
  EXPECT_EQ(SeededRng::derive(42, 3), SeededRng::derive(42, 3));
}

TEST(InitWeights, DeterministicAndBounded) {
  SeededRng a(9), b(9);
  EXPECT_EQ(init_weights(3, 4, a), init_weights(3, 4, b));
  SeededRng c(10);
  const Matrix one = init_weights(1, 1, 3, 3, c);
  EXPECT_LE(std::abs(one[0]), 1.0);
  SeededRng z(1);
  EXPECT_THROW(init_weights(0, 3, z), ShapeError);
}

TEST(InitWeights, SampleMeanNearZero) {
  SeededRng rng(123);
  const Matrix w = init_weights(100, 100, 3, 3, rng);  // uniform on [-1, 1]
  double mean = 0.0;
  for (double v : w.values()) mean += v;
  mean /= static_cast<double>(w.size());
  const double sigma = 1.0 / std::sqrt(3.0);
  EXPECT_LT(std::abs(mean), 3.0 * sigma / 100.0);
}

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "attnlab/core/autodiff.hpp"
#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"
#include "attnlab/core/grad_check.hpp"
#include "attnlab/core/random.hpp"

using attnlab::Index;
using attnlab::Matrix;
namespace ad = attnlab::ad;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

// Central-difference oracle, written independently of grad_check.
Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, Matrix x, double h = 1e-6) {
  Matrix g(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      const double orig = x(i, j);
      x(i, j) = orig + h;
      const double up = f(x);
      x(i, j) = orig - h;
      const double down = f(x);
      x(i, j) = orig;
      g(i, j) = (up - down) / (2 * h);
    }
  }
  return g;
}

// Backprop gradient of sum(W .* op(x)) with a fixed random weighting W.
Matrix unary_grad(const std::function<ad::Var(ad::Var)>& op, const Matrix& x, const Matrix& w) {
  ad::Tape tape;
  ad::Var vx = tape.parameter(x);
  ad::Var loss = ad::sum(ad::hadamard(op(vx), tape.constant(w)));
  tape.backward(loss);
  return vx.grad();
}

double unary_value(const std::function<ad::Var(ad::Var)>& op, const Matrix& x, const Matrix& w) {
  ad::Tape tape;
  return ad::sum(ad::hadamard(op(tape.constant(x)), tape.constant(w))).value()(0, 0);
}

void expect_matches_fd(const std::function<ad::Var(ad::Var)>& op, const Matrix& x, const Matrix& w) {
  const Matrix g = unary_grad(op, x, w);
  const Matrix fd = numeric_gradient([&](const Matrix& p) { return unary_value(op, p, w); }, x);
  EXPECT_LE((g - fd).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
}

}  // namespace

TEST(Backward, SquareAtThreeGivesSix) {
  ad::Tape tape;
  ad::Var x = tape.parameter(scalar(3.0));
  ad::Var y = ad::hadamard(x, x);
  tape.backward(y);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 6.0);
}

TEST(Backward, CrossEntropyOfEqualLogits) {
  ad::Tape tape;
  ad::Var logits = tape.parameter(Matrix::Zero(1, 2));
  const std::vector<int> labels{0};
  ad::Var loss = ad::cross_entropy(logits, labels);
  EXPECT_NEAR(loss.value()(0, 0), std::log(2.0), 1e-15);
  tape.backward(loss);
  EXPECT_NEAR(logits.grad()(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(logits.grad()(0, 1), 0.5, 1e-15);
}

TEST(Backward, NonScalarLossIsRejected) {
  ad::Tape tape;
  ad::Var x = tape.parameter(Matrix::Ones(2, 1));
  EXPECT_THROW(tape.backward(x), attnlab::DimensionError);
}

TEST(Backward, SharedParentAccumulates) {
  // y = x*x + 3x at x=2 -> dy/dx = 2x + 3 = 7.
  ad::Tape tape;
  ad::Var x = tape.parameter(scalar(2.0));
  ad::Var y = ad::add(ad::hadamard(x, x), ad::scale(x, 3.0));
  tape.backward(y);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 7.0);
}

TEST(Backward, GradsAreZeroBeforeBackwardAndIdempotentAfter) {
  ad::Tape tape;
  ad::Var x = tape.parameter(scalar(2.0));
  ad::Var y = ad::hadamard(x, x);
  EXPECT_EQ(x.grad()(0, 0), 0.0);
  tape.backward(y);
  tape.backward(y);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 4.0);
}

TEST(Backward, RandomTwoBlockNetworkMatchesFiniteDifferences) {
  attnlab::RandomSource rng(2024);
  const Matrix x = rng.normal_matrix(5, 3, 1.0);
  const std::vector<int> labels{0, 1, 1, 0, 1};
  std::vector<Matrix> params{rng.normal_matrix(3, 4, 0.6), rng.normal_matrix(1, 4, 0.3),
                             rng.normal_matrix(4, 2, 0.6), rng.normal_matrix(1, 2, 0.3)};
  attnlab::LossBuilder build = [&](ad::Tape& tape, std::span<const ad::Var> p) {
    ad::Var h = ad::tanh(ad::add_row(ad::matmul(tape.constant(x), p[0]), p[1]));
    ad::Var z = ad::add_row(ad::matmul(h, p[2]), p[3]);
    return ad::cross_entropy(z, labels);
  };
  const auto report = attnlab::grad_check(build, params, 1e-5);
  EXPECT_LE(report.max_relative_error, 1e-4);
}

// Primitive rules: each op gets an identity/trivial case, a hand-computed case
// and a finite-difference check.
TEST(Primitives, Add) {
  ad::Tape tape;
  ad::Var a = tape.parameter(scalar(1.0));
  ad::Var b = tape.parameter(scalar(2.0));
  ad::Var c = ad::add(a, b);
  EXPECT_DOUBLE_EQ(c.value()(0, 0), 3.0);
  tape.backward(c);
  EXPECT_DOUBLE_EQ(a.grad()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.grad()(0, 0), 1.0);
  EXPECT_THROW(ad::add(a, tape.constant(Matrix::Zero(2, 1))), attnlab::DimensionError);
  attnlab::RandomSource rng(1);
  const Matrix shift = rng.normal_matrix(3, 2, 1.0);
  expect_matches_fd([&](ad::Var v) { return ad::add(v, v.tape().constant(shift)); },
                    rng.normal_matrix(3, 2, 1.0), rng.normal_matrix(3, 2, 1.0));
}

TEST(Primitives, Transpose) {
  ad::Tape tape;
  Matrix m(1, 2);
  m << 1, 2;
  ad::Var t = ad::transpose(tape.constant(m));
  EXPECT_EQ(t.rows(), 2);
  EXPECT_DOUBLE_EQ(t.value()(1, 0), 2.0);
  ad::Var tt = ad::transpose(t);
  EXPECT_EQ(tt.value(), m);
  attnlab::RandomSource rng(2);
  expect_matches_fd([](ad::Var v) { return ad::transpose(v); }, rng.normal_matrix(3, 2, 1.0),
                    rng.normal_matrix(2, 3, 1.0));
}

TEST(Primitives, Scale) {
  ad::Tape tape;
  ad::Var x = tape.parameter(scalar(4.0));
  ad::Var y = ad::scale(x, 1.0);
  EXPECT_DOUBLE_EQ(y.value()(0, 0), 4.0);
  ad::Var z = ad::scale(x, -2.5);
  EXPECT_DOUBLE_EQ(z.value()(0, 0), -10.0);
  tape.backward(z);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), -2.5);
  attnlab::RandomSource rng(3);
  expect_matches_fd([](ad::Var v) { return ad::scale(v, 0.7); }, rng.normal_matrix(2, 2, 1.0),
                    rng.normal_matrix(2, 2, 1.0));
}

TEST(Primitives, Tanh) {
  ad::Tape tape;
  ad::Var x = tape.parameter(scalar(0.0));
  ad::Var y = ad::tanh(x);
  EXPECT_DOUBLE_EQ(y.value()(0, 0), 0.0);
  tape.backward(y);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 1.0);  // sech^2(0)
  ad::Tape tape2;
  ad::Var x2 = tape2.parameter(scalar(std::atanh(0.5)));
  ad::Var y2 = ad::tanh(x2);
  tape2.backward(y2);
  EXPECT_NEAR(x2.grad()(0, 0), 0.75, 1e-15);
  attnlab::RandomSource rng(4);
  expect_matches_fd([](ad::Var v) { return ad::tanh(v); }, rng.normal_matrix(3, 3, 1.0),
                    rng.normal_matrix(3, 3, 1.0));
}

TEST(Primitives, Exp) {
  ad::Tape tape;
  ad::Var x = tape.parameter(scalar(0.0));
  ad::Var y = ad::exp(x);
  EXPECT_DOUBLE_EQ(y.value()(0, 0), 1.0);
  tape.backward(y);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 1.0);
  ad::Tape tape2;
  ad::Var x2 = tape2.parameter(scalar(std::log(3.0)));
  ad::Var y2 = ad::exp(x2);
  tape2.backward(y2);
  EXPECT_NEAR(x2.grad()(0, 0), 3.0, 1e-14);
  attnlab::RandomSource rng(5);
  expect_matches_fd([](ad::Var v) { return ad::exp(v); }, rng.normal_matrix(2, 3, 1.0),
                    rng.normal_matrix(2, 3, 1.0));
}

TEST(Primitives, CrossEntropy) {
  ad::Tape tape;
  Matrix confident(1, 2);
  confident << 50.0, 0.0;
  const std::vector<int> zero{0};
  EXPECT_NEAR(ad::cross_entropy(tape.constant(confident), zero).value()(0, 0), 0.0, 1e-20);
  Matrix logits(2, 3);
  logits << 1, 2, 3, 0, 0, 0;
  const std::vector<int> labels{2, 1};
  const double expected =
      0.5 * ((std::log(std::exp(1.0) + std::exp(2.0) + std::exp(3.0)) - 3.0) + std::log(3.0));
  EXPECT_NEAR(ad::cross_entropy(tape.constant(logits), labels).value()(0, 0), expected, 1e-14);
  const std::vector<int> bad{5, 0};
  EXPECT_THROW(ad::cross_entropy(tape.constant(logits), bad), attnlab::ParameterError);
  attnlab::RandomSource rng(6);
  const Matrix x = rng.normal_matrix(4, 3, 2.0);
  const std::vector<int> y{0, 2, 1, 1};
  ad::Tape t2;
  ad::Var v = t2.parameter(x);
  t2.backward(ad::cross_entropy(v, y));
  const Matrix fd = numeric_gradient(
      [&](const Matrix& p) {
        ad::Tape t;
        return ad::cross_entropy(t.constant(p), y).value()(0, 0);
      },
      x);
  EXPECT_LE((v.grad() - fd).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Primitives, MatmulAndTransposedProduct) {
  attnlab::RandomSource rng(7);
  const Matrix b = rng.normal_matrix(3, 4, 1.0);
  expect_matches_fd([&](ad::Var v) { return ad::matmul(v, v.tape().constant(b)); },
                    rng.normal_matrix(2, 3, 1.0), rng.normal_matrix(2, 4, 1.0));
  expect_matches_fd([&](ad::Var v) { return ad::matmul(v.tape().constant(b.transpose()), v); },
                    rng.normal_matrix(3, 2, 1.0), rng.normal_matrix(4, 2, 1.0));
  expect_matches_fd([&](ad::Var v) { return ad::matmul_transposed(v, v); },
                    rng.normal_matrix(3, 2, 1.0), rng.normal_matrix(3, 3, 1.0));
}

TEST(Primitives, RowSoftmaxAndPairwiseDistances) {
  attnlab::RandomSource rng(8);
  expect_matches_fd([](ad::Var v) { return ad::row_softmax(v, 0.7); }, rng.normal_matrix(3, 4, 1.0),
                    rng.normal_matrix(3, 4, 1.0));
  expect_matches_fd([](ad::Var v) { return ad::pairwise_sqdist(v); }, rng.normal_matrix(4, 3, 1.0),
                    rng.normal_matrix(4, 4, 1.0));
}

TEST(Primitives, AddRowBroadcast) {
  attnlab::RandomSource rng(9);
  const Matrix x = rng.normal_matrix(3, 2, 1.0);
  expect_matches_fd([&](ad::Var v) { return ad::add_row(v.tape().constant(x), v); },
                    rng.normal_matrix(1, 2, 1.0), rng.normal_matrix(3, 2, 1.0));
  ad::Tape tape;
  EXPECT_THROW(ad::add_row(tape.constant(x), tape.constant(Matrix::Zero(1, 3))),
               attnlab::DimensionError);
}

TEST(GradCheck, LinearModelIsExact) {
  attnlab::RandomSource rng(12);
  const Matrix x = rng.normal_matrix(3, 1, 1.0);
  const Matrix weights = rng.normal_matrix(2, 1, 1.0);
  attnlab::LossBuilder build = [&](ad::Tape& tape, std::span<const ad::Var> p) {
    ad::Var y = ad::matmul(p[0], tape.constant(x));
    return ad::sum(ad::hadamard(y, tape.constant(weights)));
  };
  const auto report = attnlab::grad_check(build, {rng.normal_matrix(2, 3, 1.0)}, 1e-5);
  EXPECT_LE(report.max_relative_error, 1e-8);
}

TEST(GradCheck, TanhMlp482) {
  attnlab::RandomSource rng(13);
  const Matrix x = rng.normal_matrix(6, 4, 1.0);
  const std::vector<int> labels{0, 1, 0, 1, 1, 0};
  std::vector<Matrix> params{rng.normal_matrix(8, 4, 0.5), rng.normal_matrix(1, 8, 0.1),
                             rng.normal_matrix(2, 8, 0.35), rng.normal_matrix(1, 2, 0.1)};
  attnlab::LossBuilder build = [&](ad::Tape& tape, std::span<const ad::Var> p) {
    ad::Var h = ad::tanh(ad::add_row(ad::matmul_transposed(tape.constant(x), p[0]), p[1]));
    return ad::cross_entropy(ad::add_row(ad::matmul_transposed(h, p[2]), p[3]), labels);
  };
  EXPECT_LE(attnlab::grad_check(build, params, 1e-5).max_relative_error, 1e-4);
}

// Property: randomized small models (<= 100 parameters) agree with finite differences.
TEST(GradCheck, PropertyRandomSmallModels) {
  attnlab::RandomSource rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const Index d = 1 + static_cast<Index>(rng.below(4));
    const Index h = 1 + static_cast<Index>(rng.below(6));
    const Matrix x = rng.normal_matrix(n, d, 1.0);
    std::vector<int> labels;
    for (Index i = 0; i < n; ++i) labels.push_back(static_cast<int>(rng.below(3)));
    std::vector<Matrix> params{rng.normal_matrix(d, h, 0.7), rng.normal_matrix(h, 3, 0.7)};
    ASSERT_LE(d * h + h * 3, 100);
    attnlab::LossBuilder build = [&](ad::Tape& tape, std::span<const ad::Var> p) {
      ad::Var z = ad::tanh(ad::matmul(tape.constant(x), p[0]));
      ad::Var s = ad::row_softmax(ad::scale(ad::pairwise_sqdist(z), -1.0), 1.0);
      return ad::cross_entropy(ad::matmul(ad::matmul(s, z), p[1]), labels);
    };
    const auto report = attnlab::grad_check(build, params, 1e-5);
    EXPECT_LE(report.max_relative_error, 1e-4) << "trial " << trial << " seed 31337";
  }
}

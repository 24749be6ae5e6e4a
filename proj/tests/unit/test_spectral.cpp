#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "attnlab/core/error.hpp"
#include "attnlab/core/random.hpp"
#include "attnlab/simkit/operators.hpp"
#include "attnlab/simkit/pipeline.hpp"
#include "attnlab/simkit/spectral.hpp"

using attnlab::Index;
using attnlab::Matrix;
using attnlab::Vector;
namespace sk = attnlab::simkit;

namespace {

// Faddeev-LeVerrier: coefficients c_0..c_n of det(lambda I - A), c_n = 1.
std::vector<double> characteristic_polynomial(const Matrix& a) {
  const Index n = a.rows();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix m = Matrix::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * Matrix::Identity(n, n);
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

double polyval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

}  // namespace

TEST(TopEigenvectors, IdentityHasUnitEigenvalues) {
  const auto pairs = sk::top_eigenvectors(Matrix::Identity(5, 5), 3);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(pairs.values(i), 1.0, 1e-12);
}

TEST(TopEigenvectors, RowStochasticLeadingPairIsOneAndConstant) {
  attnlab::RandomSource rng(41);
  Matrix pts = rng.normal_matrix(12, 2, 1.0);
  const Matrix s = sk::run_pipeline(sk::diffusion_map_pipeline(1.0), {pts, std::nullopt, std::nullopt});
  const auto pairs = sk::top_eigenvectors(s, 3);
  EXPECT_NEAR(pairs.values(0), 1.0, 1e-8);
  const Vector v = pairs.vectors.col(0);
  EXPECT_LE((v.array() - v(0)).abs().maxCoeff(), 1e-6 * std::abs(v(0)));
  EXPECT_GE(pairs.values(0), pairs.values(1));
  EXPECT_GE(pairs.values(1), pairs.values(2));
}

TEST(TopEigenvectors, BlockDiagonalStochasticHasDoubleUnitEigenvalue) {
  Matrix s(4, 4);
  s << 0.7, 0.3, 0, 0,
       0.3, 0.7, 0, 0,
       0, 0, 0.4, 0.6,
       0, 0, 0.6, 0.4;
  // Oracle: lambda = 1 is a double root of the characteristic polynomial.
  const auto c = characteristic_polynomial(s);
  EXPECT_NEAR(polyval(c, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(polyval(derivative(c), 1.0), 0.0, 1e-12);
  EXPECT_GT(std::abs(polyval(derivative(derivative(c)), 1.0)), 1e-3);
  const auto pairs = sk::top_eigenvectors(s, 2);
  EXPECT_NEAR(pairs.values(0), 1.0, 1e-8);
  EXPECT_NEAR(pairs.values(1), 1.0, 1e-8);
}

TEST(TopEigenvectors, MatchesCharacteristicPolynomialRoots) {
  Matrix a(3, 3);
  a << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const auto pairs = sk::top_eigenvectors(a, 3);
  const auto c = characteristic_polynomial(a);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(polyval(c, pairs.values(i)), 0.0, 1e-9);
  EXPECT_LE((a * pairs.vectors - pairs.vectors * pairs.values.asDiagonal()).norm(), 1e-8);
}

TEST(TopEigenvectors, NonReversibleInputIsRejected) {
  Matrix s(3, 3);
  s << 0, 1, 0, 0, 0, 1, 1, 0, 0;  // directed cycle
  EXPECT_THROW(sk::top_eigenvectors(s, 1), attnlab::ParameterError);
}

TEST(TopEigenvectors, IterationCapRaisesWithResidual) {
  sk::OrthogonalIterationOptions opts;
  opts.max_iterations = 1;
  attnlab::RandomSource rng(3);
  Matrix b = rng.normal_matrix(40, 40, 1.0);
  b = (b + b.transpose()).eval();
  try {
    sk::top_eigenvectors(b, 2, std::nullopt, opts);
    FAIL();
  } catch (const attnlab::ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(TopEigenvectors, PropertyStochasticLeadingValueIsOne) {
  attnlab::RandomSource rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.below(10));
    const Matrix pts = rng.normal_matrix(n, 2, 1.0);
    const double eps = rng.uniform(0.3, 3.0);
    const Matrix s = sk::run_pipeline(sk::diffusion_map_pipeline(eps), {pts, std::nullopt, std::nullopt});
    EXPECT_NEAR(sk::top_eigenvectors(s, 1).values(0), 1.0, 1e-8) << "trial " << trial;
  }
}

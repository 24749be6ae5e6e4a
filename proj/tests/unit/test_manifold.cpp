#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "attnlab/attention/propagation.hpp"
#include "attnlab/core/error.hpp"
#include "attnlab/core/random.hpp"
#include "attnlab/manifold/argmin.hpp"
#include "attnlab/manifold/attention_limit.hpp"
#include "attnlab/manifold/laplacian.hpp"
#include "attnlab/manifold/pde.hpp"
#include "attnlab/manifold/point_cloud.hpp"
#include "attnlab/manifold/regression.hpp"

using attnlab::Index;
using attnlab::Matrix;
using attnlab::RowVector;
using attnlab::Vector;
namespace mf = attnlab::manifold;
namespace at = attnlab::attention;

namespace {

constexpr double kPi = std::numbers::pi;

mf::DensitySpec tilt(double a) { return {mf::DensityFamily::kCosineTilt, a}; }

const mf::FieldSpec kCos{mf::FieldKind::kCos};
const mf::FieldSpec kSin{mf::FieldKind::kSin};
const mf::FieldSpec kConst{mf::FieldKind::kConstant, 1, 2.5};

at::PseudoMetricKind squared_distance(Index n) { return at::L2Linear{Matrix::Identity(n, n)}; }
at::PseudoMetricKind negative_dot(Index n) { return at::DotQK{Matrix::Identity(n, n), Matrix::Identity(n, n)}; }

}  // namespace

// --- sampling ---

TEST(SampleCircle, UniformResultantLength) {
  const Index n = 5000;
  const auto cloud = mf::sample_circle(n, {}, 11);
  const double resultant = cloud.ambient.colwise().mean().norm();
  EXPECT_LE(resultant, 3.0 / std::sqrt(double(n)));
}

TEST(SampleCircle, TiltedHistogramPassesChiSquare) {
  const Index n = 20000;
  const int bins = 20;
  const auto spec = tilt(0.5);
  const auto cloud = mf::sample_circle(n, spec, 3);
  std::vector<double> counts(bins, 0.0);
  for (Index i = 0; i < n; ++i) {
    const int b = std::min(bins - 1, int(cloud.intrinsic(i, 0) / (2 * kPi) * bins));
    counts[b] += 1;
  }
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    // Bin mass of (1 + a cos t) / (2 pi) over [t0, t1].
    const double t0 = 2 * kPi * b / bins, t1 = 2 * kPi * (b + 1) / bins;
    const double mass = ((t1 - t0) + 0.5 * (std::sin(t1) - std::sin(t0))) / (2 * kPi);
    const double expected = n * mass;
    chi2 += (counts[b] - expected) * (counts[b] - expected) / expected;
  }
  // 19 degrees of freedom, significance 0.001.
  EXPECT_LT(chi2, 43.82019596451753);
}

TEST(SampleCircle, SinglePointAndUnitNorm) {
  const auto one = mf::sample_circle(1, tilt(0.3), 5);
  ASSERT_EQ(one.ambient.rows(), 1);
  EXPECT_NEAR(one.ambient.row(0).norm(), 1.0, 1e-12);
  const auto cloud = mf::sample_circle(2000, tilt(0.9), 6);
  for (Index i = 0; i < cloud.ambient.rows(); ++i) {
    EXPECT_NEAR(cloud.ambient.row(i).norm(), 1.0, 1e-12);
    EXPECT_GT(cloud.density(i), 0.0);
  }
}

TEST(SampleCircle, InverseCdfResidual) {
  // Re-derive u from theta and compare with a direct tail count: F(theta) must be monotone in sample order.
  const auto spec = tilt(0.7);
  const auto cloud = mf::sample_circle(500, spec, 9);
  for (Index i = 0; i < cloud.ambient.rows(); ++i) {
    const double t = cloud.intrinsic(i, 0);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 2 * kPi);
  }
}

TEST(SampleCircle, RejectsTiltOutsideRange) {
  EXPECT_THROW(mf::sample_circle(10, tilt(1.0), 1), attnlab::ParameterError);
  EXPECT_THROW(mf::sample_circle(10, tilt(-0.1), 1), attnlab::ParameterError);
}

TEST(SampleCircle, Deterministic) {
  const auto a = mf::sample_circle(100, tilt(0.5), 77);
  const auto b = mf::sample_circle(100, tilt(0.5), 77);
  EXPECT_EQ(a.ambient, b.ambient);
}

TEST(SampleSphere, UniformMeanVector) {
  const Index n = 5000;
  const auto cloud = mf::sample_sphere(n, {}, 12);
  EXPECT_LE(cloud.ambient.colwise().mean().norm(), 3.0 / std::sqrt(double(n)));
  EXPECT_DOUBLE_EQ(cloud.acceptance_ratio, 1.0);
}

TEST(SampleSphere, TiltedMeanZ) {
  const Index n = 20000;
  const double a = 0.5;
  const auto cloud = mf::sample_sphere(n, tilt(a), 13);
  const double mean_z = cloud.ambient.col(2).mean();
  // E z = a / 3, E z^2 = 1 / 3.
  const double sigma = std::sqrt((1.0 / 3.0 - a * a / 9.0) / n);
  EXPECT_NEAR(mean_z, a / 3.0, 3.0 * sigma);
  EXPECT_NEAR(cloud.acceptance_ratio, 1.0 / (1.0 + a), 0.02);
}

TEST(SampleSphere, UnitNormAndErrors) {
  const auto cloud = mf::sample_sphere(1000, tilt(0.8), 14);
  for (Index i = 0; i < cloud.ambient.rows(); ++i) EXPECT_NEAR(cloud.ambient.row(i).norm(), 1.0, 1e-12);
  EXPECT_THROW(mf::sample_sphere(10, tilt(1.5), 1), attnlab::ParameterError);
}

// --- fields ---

TEST(Fields, CircleDerivativesMatchFiniteDifferences) {
  const double h = 1e-4;
  for (const mf::FieldSpec& f : {kCos, kSin, kConst, mf::FieldSpec{mf::FieldKind::kCosK, 3}}) {
    for (double t = 0.05; t < 2 * kPi; t += 0.37) {
      const double d1 = (mf::circle_field(f, t + h) - mf::circle_field(f, t - h)) / (2 * h);
      const double d2 = (mf::circle_field(f, t + h) - 2 * mf::circle_field(f, t) + mf::circle_field(f, t - h)) / (h * h);
      EXPECT_NEAR(mf::circle_field_d1(f, t), d1, 1e-6) << mf::field_name(f);
      EXPECT_NEAR(mf::circle_field_d2(f, t), d2, 1e-6) << mf::field_name(f);
    }
  }
  for (double t = 0.1; t < 2 * kPi; t += 0.5) {
    const auto spec = tilt(0.5);
    const double dp = (mf::circle_density(t + h, spec) - mf::circle_density(t - h, spec)) / (2 * h);
    EXPECT_NEAR(mf::circle_density_derivative(t, spec), dp, 1e-6);
  }
}

TEST(Fields, SphereLaplacianOfZMatchesFiniteDifferences) {
  // Delta f = (1/sin phi) d/dphi (sin phi df/dphi) for an azimuth-free field; z = cos phi.
  const auto cloud = mf::sample_sphere(50, {}, 4);
  const Vector lap = mf::field_laplacian({mf::FieldKind::kZ}, cloud);
  const double h = 1e-4;
  for (Index i = 0; i < cloud.ambient.rows(); ++i) {
    const double phi = cloud.intrinsic(i, 0);
    auto flux = [](double q) { return std::sin(q) * -std::sin(q); };
    const double fd = (flux(phi + h) - flux(phi - h)) / (2 * h) / std::sin(phi);
    EXPECT_NEAR(lap(i), fd, 1e-6);
  }
}

TEST(Fields, CircleFieldOnSphereRejected) {
  const auto cloud = mf::sample_sphere(5, {}, 1);
  EXPECT_THROW(mf::field_values(kCos, cloud), attnlab::ParameterError);
  EXPECT_THROW(mf::parse_field("tan"), attnlab::ParameterError);
}

// --- regression ---

TEST(Regression, ExactLine) {
  Vector t(5), e(5);
  t << 0, 1, 2, 3, 4;
  e = 2.0 * t.array() + 1.0;
  const auto r = mf::regress(e, t);
  EXPECT_NEAR(r.slope, 2.0, 1e-14);
  EXPECT_NEAR(r.intercept, 1.0, 1e-14);
  EXPECT_NEAR(r.r2, 1.0, 1e-14);
  EXPECT_FALSE(r.degenerate);
}

TEST(Regression, ConstantTargetIsDegenerate) {
  Vector t = Vector::Constant(4, 3.0), e(4);
  e << 0.1, -0.4, 0.2, 0.0;
  const auto r = mf::regress(e, t);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.max_abs_estimate, 0.4);
}

// --- graph Laplacian ---

TEST(GraphLaplacian, RowsSumToZero) {
  const auto cloud = mf::sample_circle(300, tilt(0.4), 2);
  const auto g = mf::build_graph_laplacian(cloud, 0.05);
  for (Index i = 0; i < g.l.rows(); ++i) {
    EXPECT_LE(std::abs(g.l.row(i).sum()), 1e-12);
    for (Index j = 0; j < g.l.cols(); ++j) {
      if (i == j) continue;
      EXPECT_GE(g.l(i, j), 0.0);
      EXPECT_LE(g.l(i, j), 1.0);
    }
  }
}

TEST(GraphLaplacian, SinglePoint) {
  const auto g = mf::build_graph_laplacian(mf::sample_circle(1, {}, 1), 0.1);
  ASSERT_EQ(g.l.rows(), 1);
  EXPECT_EQ(g.l(0, 0), 0.0);
}

TEST(GraphLaplacian, TwoPointsByHand) {
  mf::PointCloud cloud = mf::circle_grid(2, {});
  const double eps = 0.7;
  const double d = 2.0;
  const double w = std::exp(-d * d / (2 * eps));
  const auto g = mf::build_graph_laplacian(cloud, eps);
  EXPECT_NEAR(g.l(0, 1), w / (1 + w), 1e-15);
  EXPECT_NEAR(g.l(0, 0), -w / (1 + w), 1e-15);
}

TEST(GraphLaplacian, RejectsNonPositiveEps) {
  const auto cloud = mf::sample_circle(3, {}, 1);
  EXPECT_THROW(mf::build_graph_laplacian(cloud, 0.0), attnlab::ParameterError);
  EXPECT_THROW(mf::apply_laplacian(cloud.ambient, Vector::Zero(3), -1.0), attnlab::ParameterError);
}

TEST(GraphLaplacian, StreamingMatchesDense) {
  const auto cloud = mf::sample_circle(200, tilt(0.5), 21);
  const Vector f = mf::field_values(kSin, cloud);
  const auto g = mf::build_graph_laplacian(cloud, 0.05);
  const Vector dense = g.l * f;
  const Vector streamed = mf::apply_laplacian(cloud.ambient, f, 0.05);
  EXPECT_LE((dense - streamed).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LaplacianCheck, ConstantFieldGivesExactZero) {
  const auto cloud = mf::sample_circle(500, {}, 5);
  const auto check = mf::laplacian_convergence_check(cloud, 0.05, kConst);
  EXPECT_EQ(check.estimate.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(check.regression.degenerate);
  EXPECT_EQ(check.regression.max_abs_estimate, 0.0);
  const auto drift = mf::drift_deviation_check(mf::sample_circle(500, tilt(0.5), 5), tilt(0.5), 0.05, kConst);
  EXPECT_EQ(drift.estimate.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LaplacianCheck, EquispacedGridRecoversHalfLaplacian) {
  // On an equispaced grid Lf is exactly proportional to cos; the factor tends to -eps/2 as eps -> 0.
  const auto cloud = mf::circle_grid(2000, {});
  const auto check = mf::laplacian_convergence_check(cloud, 0.01, kCos);
  EXPECT_NEAR(check.regression.slope, 1.0, 0.02);
  EXPECT_GE(check.regression.r2, 1.0 - 1e-12);
  EXPECT_NEAR(check.regression.intercept, 0.0, 1e-12);
}

TEST(LaplacianCheck, SphereZ) {
  const auto cloud = mf::sample_sphere(3000, {}, 8);
  const auto check = mf::laplacian_convergence_check(cloud, 0.05, {mf::FieldKind::kZ});
  EXPECT_NEAR(check.regression.slope, 1.0, 0.2);
  EXPECT_GE(check.regression.r2, 0.85);
}

TEST(DriftCheck, ZeroTiltReducesToLaplacianCheck) {
  const auto cloud = mf::sample_circle(400, {}, 31);
  const auto plain = mf::laplacian_convergence_check(cloud, 0.05, kSin);
  const auto drift = mf::drift_deviation_check(cloud, {}, 0.05, kSin);
  EXPECT_EQ(plain.estimate, drift.estimate);
  EXPECT_EQ(plain.target, drift.target);
}

TEST(DriftCheck, TargetFormulaOnCircle) {
  const double a = 0.5;
  const auto cloud = mf::sample_circle(50, tilt(a), 3);
  const auto check = mf::drift_deviation_check(cloud, tilt(a), 0.05, kSin);
  for (Index i = 0; i < 50; ++i) {
    const double t = cloud.intrinsic(i, 0);
    const double expected = 0.5 * (-std::sin(t) - 2 * a * std::sin(t) * std::cos(t) / (1 + a * std::cos(t)));
    EXPECT_NEAR(check.target(i), expected, 1e-14);
  }
}

// --- attention step ---

TEST(AttentionStep, SinglePointUnchanged) {
  Matrix h(1, 3);
  h << 0.3, -1.0, 2.0;
  EXPECT_EQ(mf::attention_step(h, squared_distance(3), 0.1), h);
}

TEST(AttentionStep, IdenticalRowsUnchanged) {
  Matrix h = Matrix::Zero(6, 2).rowwise() + RowVector{{1.5, -0.25}};
  const Matrix out = mf::attention_step(h, negative_dot(2), 0.2);
  EXPECT_LE((out - h).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(AttentionStep, MatchesDenseSimilarity) {
  attnlab::RandomSource rng(4);
  const Matrix h = rng.normal_matrix(30, 3, 1.0);
  for (const auto& kind : {squared_distance(3), negative_dot(3)}) {
    const Matrix dense = at::similarity(h, kind, 0.3) * h;
    EXPECT_LE((mf::attention_step(h, kind, 0.3) - dense).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(AttentionStep, ConvexHullProperty) {
  attnlab::RandomSource rng(40);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix h = rng.normal_matrix(25, 4, 2.0);
    const Matrix out = mf::attention_step(h, at::L2Linear{rng.normal_matrix(3, 4, 1.0)}, rng.uniform(0.05, 2.0));
    for (Index c = 0; c < 4; ++c) {
      EXPECT_GE(out.col(c).minCoeff(), h.col(c).minCoeff() - 1e-12);
      EXPECT_LE(out.col(c).maxCoeff(), h.col(c).maxCoeff() + 1e-12);
    }
  }
}

TEST(AttentionStep, RowStochastic) {
  attnlab::RandomSource rng(41);
  const Matrix h = rng.normal_matrix(20, 2, 1.0);
  const at::PreparedMetric metric = at::prepare(h, negative_dot(2));
  const Matrix ones = Matrix::Ones(20, 1);
  EXPECT_LE((mf::attention_step(metric, ones, 0.01) - ones).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AttentionStep, StepCheckIsTwiceDriftEstimate) {
  const auto cloud = mf::sample_circle(300, tilt(0.5), 17);
  const auto step = mf::drift_diffusion_step_check(cloud, tilt(0.5), 0.05, kSin);
  const auto drift = mf::drift_deviation_check(cloud, tilt(0.5), 0.05, kSin);
  EXPECT_LE((step.estimate - 2.0 * drift.estimate).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE((step.target - 2.0 * drift.target).cwiseAbs().maxCoeff(), 1e-12);
}

// --- zeroth order ---

TEST(ZerothOrder, SinglePointErrorIsZero) {
  const auto cloud = mf::sample_circle(1, {}, 1);
  const std::vector<double> eps{0.1, 0.05};
  for (const auto& row : mf::zeroth_order_check(cloud, negative_dot(2), kCos, eps)) EXPECT_EQ(row.max_error, 0.0);
}

TEST(ZerothOrder, SquaredDistanceErrorShrinks) {
  const auto cloud = mf::sample_circle(1500, {}, 2);
  const std::vector<double> eps{0.1, 0.01, 0.001};
  const auto rows = mf::zeroth_order_check(cloud, squared_distance(2), kCos, eps);
  EXPECT_GT(rows[0].max_error, rows[1].max_error);
  EXPECT_GT(rows[1].max_error, rows[2].max_error);
}

TEST(ZerothOrder, NegativeDotStrictlyDecreasing) {
  const auto cloud = mf::sample_circle(2000, {}, 3);
  const std::vector<double> eps{0.1, 0.05, 0.025};
  const auto rows = mf::zeroth_order_check(cloud, negative_dot(2), kCos, eps);
  EXPECT_GT(rows[0].max_error, rows[1].max_error);
  EXPECT_GT(rows[1].max_error, rows[2].max_error);
}

TEST(ZerothOrder, TiedArgminListsIndices) {
  mf::PointCloud cloud = mf::circle_grid(6, {});
  cloud.ambient.row(3) = cloud.ambient.row(0);
  cloud.intrinsic(3, 0) = cloud.intrinsic(0, 0);
  const std::vector<double> eps{0.1};
  try {
    mf::zeroth_order_check(cloud, squared_distance(2), kCos, eps);
    FAIL() << "expected a tie";
  } catch (const attnlab::DegenerateInputError& e) {
    EXPECT_NE(std::string(e.what()).find("0, 3"), std::string::npos) << e.what();
  }
}

// --- clustering decay ---

TEST(ClusteringDecay, ConstantInputStaysAtZero) {
  const Matrix h = Matrix::Constant(10, 2, 0.7);
  const auto traj = mf::clustering_decay(h, squared_distance(2), 0.5, 5);
  ASSERT_EQ(traj.total.size(), 6u);
  for (double v : traj.total) EXPECT_EQ(v, 0.0);
}

TEST(ClusteringDecay, VarianceNonIncreasingOnRandomInputs) {
  attnlab::RandomSource rng(50);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix h = rng.normal_matrix(30, 2, rng.uniform(0.2, 2.0));
    const auto traj = mf::clustering_decay(h, squared_distance(2), rng.uniform(0.05, 1.0), 20);
    EXPECT_GT(traj.roundoff_floor, 0.0);
    EXPECT_LT(traj.roundoff_floor, 1e-25 * traj.total[0]);
    for (std::size_t s = 1; s < traj.total.size(); ++s)
      EXPECT_LE(traj.total[s], traj.total[s - 1] + traj.roundoff_floor);
  }
}

TEST(ClusteringDecay, WithinPlusBetweenIsTotal) {
  attnlab::RandomSource rng(51);
  Matrix h = rng.normal_matrix(20, 2, 0.3);
  std::vector<int> labels(20);
  for (Index i = 0; i < 20; ++i) {
    labels[i] = i < 10 ? 0 : 1;
    if (i >= 10) h(i, 0) += 5.0;
  }
  const auto traj = mf::clustering_decay(h, squared_distance(2), 0.1, 5, labels);
  ASSERT_EQ(traj.within.size(), traj.total.size());
  for (std::size_t s = 0; s < traj.total.size(); ++s)
    EXPECT_NEAR(traj.within[s] + traj.between[s], traj.total[s], 1e-12 * traj.total[0]);
  EXPECT_GT(mf::decay_rate(traj.within, 5), mf::decay_rate(traj.between, 5));
}

TEST(ClusteringDecay, Errors) {
  const Matrix h = Matrix::Zero(3, 2);
  EXPECT_THROW(mf::clustering_decay(h, squared_distance(2), 0.1, 0), attnlab::ParameterError);
  EXPECT_THROW(mf::clustering_decay(h, squared_distance(2), 0.1, 2, std::vector<int>{0, 1}), attnlab::DimensionError);
  const std::vector<double> v{1.0, 0.5};
  EXPECT_THROW(mf::decay_rate(v, 2), attnlab::ParameterError);
  EXPECT_NEAR(mf::decay_rate(v, 1), std::log(2.0), 1e-15);
}

// --- PDE reference ---

TEST(PdeEuler, ZeroStepsReturnsInitialField) {
  const Vector u = mf::pde_euler_reference(64, tilt(0.5), kSin, 1e-4, 0);
  for (Index k = 0; k < 64; ++k) EXPECT_EQ(u(k), std::sin(2 * kPi * k / 64));
}

TEST(PdeEuler, HeatSolutionOnUniformCircle) {
  const Index grid = 512;
  const double h = 2 * kPi / grid;
  const int steps = static_cast<int>(std::ceil(0.1 / (0.4 * h * h)));
  const double dt = 0.1 / steps;
  const Vector u = mf::pde_euler_reference(grid, {}, kCos, dt, steps);
  double worst = 0.0;
  for (Index k = 0; k < grid; ++k) worst = std::max(worst, std::abs(u(k) - std::exp(-0.1) * std::cos(k * h)));
  EXPECT_LE(worst, 1e-3);
}

TEST(PdeEuler, StabilityBoundEnforced) {
  const double h = 2 * kPi / 128;
  EXPECT_THROW(mf::pde_euler_reference(128, {}, kCos, 0.41 * h * h, 1), attnlab::PreconditionError);
  EXPECT_NO_THROW(mf::pde_euler_reference(128, {}, kCos, 0.4 * h * h, 1));
}

TEST(PdeEuler, ConstantFieldIsStationary) {
  const Vector u = mf::pde_euler_reference(100, tilt(0.6), kConst, 1e-4, 50);
  for (Index k = 0; k < 100; ++k) EXPECT_EQ(u(k), 2.5);
}

// --- conformal identity ---

TEST(ConformalIdentity, AnalyticDiscrepancyTiny) {
  for (double a : {0.0, 0.2, 0.5, 0.9}) {
    for (const mf::FieldSpec& f : {kSin, kCos, mf::FieldSpec{mf::FieldKind::kCosK, 4}}) {
      EXPECT_LE(mf::conformal_identity_check(tilt(a), f, 1, 1000), 1e-10) << a << " " << mf::field_name(f);
    }
  }
}

TEST(ConformalIdentity, FiniteDifferencesConvergeQuadratically) {
  const double coarse = mf::conformal_identity_check(tilt(0.5), kSin, 1, 200, mf::DerivativeMode::kFiniteDifference);
  const double fine = mf::conformal_identity_check(tilt(0.5), kSin, 1, 400, mf::DerivativeMode::kFiniteDifference);
  EXPECT_LE(fine, 1e-3);
  EXPECT_NEAR(coarse / fine, 4.0, 0.2);
}

TEST(ConformalIdentity, DimensionPreconditions) {
  EXPECT_THROW(mf::conformal_identity_check(tilt(0.5), kSin, 2, 100), attnlab::PreconditionError);
  EXPECT_THROW(mf::conformal_identity_check(tilt(0.5), kSin, 3, 100), attnlab::ParameterError);
}

// --- argmin ---

TEST(Argmin, NegativeDotMinimiserIsX) {
  Vector x(2), a(2);
  x << 1, 0;
  a << -1, -1;
  const auto r = mf::argmin_pseudo_metric(x, a, Matrix::Identity(2, 2));
  EXPECT_NEAR(r.brute_force(0), 1.0, 1e-12);
  EXPECT_NEAR(r.brute_force(1), 0.0, 1e-12);
  EXPECT_TRUE(r.agree_up_to_sign);
}

TEST(Argmin, ClosedFormIsMaximiser) {
  Vector x(2), a(2);
  x << 1, 0;
  a << 2, 1;
  const auto r = mf::argmin_pseudo_metric(x, a, Matrix::Identity(2, 2));
  EXPECT_NEAR(r.brute_force(0), -1.0, 1e-12);
  EXPECT_NEAR(r.closed_form(0), 1.0, 1e-15);
  EXPECT_EQ(r.sign, -1);
  EXPECT_TRUE(r.agree_up_to_sign);
  EXPECT_LE(r.angular_error, 2 * 2 * kPi / 1e4);
}

TEST(Argmin, DegenerateProduct) {
  Vector x(2), a(2);
  x << 1, 0;
  a << 0, 3;
  EXPECT_THROW(mf::argmin_pseudo_metric(x, a, Matrix::Identity(2, 2)), attnlab::DegenerateInputError);
}

TEST(Argmin, RandomRotationsAgreeUpToSign) {
  attnlab::RandomSource rng(60);
  for (Index n : {Index(2), Index(3)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix p = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(n, n, 1.0)).householderQ();
      Vector x = rng.normal_matrix(n, 1, 1.0);
      x.normalize();
      const Vector a = rng.normal_matrix(n, 1, 1.0);
      const auto r = mf::argmin_pseudo_metric(x, a, p);
      EXPECT_TRUE(r.agree_up_to_sign) << "n=" << n << " err=" << r.angular_error;
      EXPECT_EQ(r.sign, -1);
      EXPECT_NEAR(r.closed_form.norm(), 1.0, 1e-12);
    }
  }
}

TEST(Argmin, Errors) {
  Vector x(2), a(2);
  x << 1, 0;
  a << 1, 1;
  Matrix p = Matrix::Identity(2, 2);
  p(0, 1) = 0.5;
  EXPECT_THROW(mf::argmin_pseudo_metric(x, a, p), attnlab::ParameterError);
  EXPECT_THROW(mf::argmin_pseudo_metric(Vector::Ones(4), Vector::Ones(4), Matrix::Identity(4, 4)),
               attnlab::DimensionError);
}

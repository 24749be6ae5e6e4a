#include "attnlab/manifold/point_cloud.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "attnlab/core/error.hpp"
#include "attnlab/core/random.hpp"

namespace attnlab::manifold {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Solves theta + a sin(theta) = 2 pi u on [0, 2 pi]. Newton with a bisection
// fallback; the map is strictly increasing for a < 1.
double invert_circle_cdf(double u, double a) {
  const double target = kTwoPi * u;
  double lo = 0.0, hi = kTwoPi;
  double theta = target;
  for (int it = 0; it < 100; ++it) {
    const double g = theta + a * std::sin(theta) - target;
    if (std::abs(g) <= 1e-13) break;
    if (g > 0) hi = theta; else lo = theta;
    double next = theta - g / (1.0 + a * std::cos(theta));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    theta = next;
  }
  return theta;
}

bool on_circle(const PointCloud& cloud) { return cloud.manifold_dim == 1; }

double circle_theta(const PointCloud& cloud, Index i) { return cloud.intrinsic(i, 0); }

double sphere_z(const PointCloud& cloud, Index i) { return cloud.ambient(i, 2); }

void require_sphere_field(const FieldSpec& field) {
  if (field.kind != FieldKind::kConstant && field.kind != FieldKind::kZ) {
    throw ParameterError("field " + field_name(field) + " is not defined on the sphere");
  }
}

}  // namespace

void validate(const DensitySpec& spec) {
  const double a = spec.tilt();
  if (!(a >= 0.0 && a < 1.0)) {
    throw ParameterError("density tilt a must lie in [0, 1), got " + std::to_string(spec.a));
  }
}

double circle_density(double theta, const DensitySpec& spec) {
  return (1.0 + spec.tilt() * std::cos(theta)) / kTwoPi;
}

double circle_density_derivative(double theta, const DensitySpec& spec) {
  return -spec.tilt() * std::sin(theta) / kTwoPi;
}

double sphere_density(double z, const DensitySpec& spec) {
  return (1.0 + spec.tilt() * z) / (2.0 * kTwoPi);
}

PointCloud sample_circle(Index n, const DensitySpec& spec, std::uint64_t seed) {
  validate(spec);
  if (n < 1) throw ParameterError("sample_circle: need at least one point");
  RandomSource rng = RandomSource(seed).derive("circle");
  PointCloud cloud;
  cloud.manifold_dim = 1;
  cloud.ambient.resize(n, 2);
  cloud.intrinsic.resize(n, 1);
  cloud.density.resize(n);
  const double a = spec.tilt();
  for (Index i = 0; i < n; ++i) {
    const double theta = a == 0.0 ? kTwoPi * rng.uniform() : invert_circle_cdf(rng.uniform(), a);
    cloud.intrinsic(i, 0) = theta;
    cloud.ambient(i, 0) = std::cos(theta);
    cloud.ambient(i, 1) = std::sin(theta);
    cloud.density(i) = circle_density(theta, spec);
  }
  return cloud;
}

PointCloud sample_sphere(Index n, const DensitySpec& spec, std::uint64_t seed) {
  validate(spec);
  if (n < 1) throw ParameterError("sample_sphere: need at least one point");
  RandomSource rng = RandomSource(seed).derive("sphere");
  PointCloud cloud;
  cloud.manifold_dim = 2;
  cloud.ambient.resize(n, 3);
  cloud.intrinsic.resize(n, 2);
  cloud.density.resize(n);
  const double a = spec.tilt();
  long proposals = 0;
  for (Index i = 0; i < n;) {
    const double z = rng.uniform(-1.0, 1.0);
    const double psi = kTwoPi * rng.uniform();
    const double accept = rng.uniform();
    ++proposals;
    if (accept * (1.0 + a) >= 1.0 + a * z) continue;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    cloud.ambient(i, 0) = r * std::cos(psi);
    cloud.ambient(i, 1) = r * std::sin(psi);
    cloud.ambient(i, 2) = z;
    cloud.intrinsic(i, 0) = std::acos(z);
    cloud.intrinsic(i, 1) = psi;
    cloud.density(i) = sphere_density(z, spec);
    ++i;
  }
  cloud.acceptance_ratio = static_cast<double>(n) / static_cast<double>(proposals);
  return cloud;
}

PointCloud circle_grid(Index n, const DensitySpec& spec) {
  validate(spec);
  if (n < 1) throw ParameterError("circle_grid: need at least one point");
  PointCloud cloud;
  cloud.manifold_dim = 1;
  cloud.ambient.resize(n, 2);
  cloud.intrinsic.resize(n, 1);
  cloud.density.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double theta = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    cloud.intrinsic(i, 0) = theta;
    cloud.ambient(i, 0) = std::cos(theta);
    cloud.ambient(i, 1) = std::sin(theta);
    cloud.density(i) = circle_density(theta, spec);
  }
  return cloud;
}

std::string field_name(const FieldSpec& field) {
  switch (field.kind) {
    case FieldKind::kConstant: return "constant";
    case FieldKind::kCos: return "cos";
    case FieldKind::kSin: return "sin";
    case FieldKind::kCosK: return "cos" + std::to_string(field.k);
    case FieldKind::kZ: return "z";
  }
  return "?";
}

FieldSpec parse_field(const std::string& name, int k, double constant) {
  if (name == "constant") return {FieldKind::kConstant, k, constant};
  if (name == "cos") return {FieldKind::kCos, 1, constant};
  if (name == "sin") return {FieldKind::kSin, 1, constant};
  if (name == "cosk") return {FieldKind::kCosK, k, constant};
  if (name == "z") return {FieldKind::kZ, 1, constant};
  throw ParameterError("unknown field '" + name + "' (expected constant, cos, sin, cosk, z)");
}

double circle_field(const FieldSpec& field, double theta) {
  switch (field.kind) {
    case FieldKind::kConstant: return field.constant;
    case FieldKind::kCos: return std::cos(theta);
    case FieldKind::kSin: return std::sin(theta);
    case FieldKind::kCosK: return std::cos(field.k * theta);
    case FieldKind::kZ: break;
  }
  throw ParameterError("field z is not defined on the circle");
}

double circle_field_d1(const FieldSpec& field, double theta) {
  switch (field.kind) {
    case FieldKind::kConstant: return 0.0;
    case FieldKind::kCos: return -std::sin(theta);
    case FieldKind::kSin: return std::cos(theta);
    case FieldKind::kCosK: return -field.k * std::sin(field.k * theta);
    case FieldKind::kZ: break;
  }
  throw ParameterError("field z is not defined on the circle");
}

double circle_field_d2(const FieldSpec& field, double theta) {
  switch (field.kind) {
    case FieldKind::kConstant: return 0.0;
    case FieldKind::kCos: return -std::cos(theta);
    case FieldKind::kSin: return -std::sin(theta);
    case FieldKind::kCosK: return -double(field.k) * field.k * std::cos(field.k * theta);
    case FieldKind::kZ: break;
  }
  throw ParameterError("field z is not defined on the circle");
}

Vector field_values(const FieldSpec& field, const PointCloud& cloud) {
  const Index n = cloud.ambient.rows();
  Vector out(n);
  if (on_circle(cloud)) {
    for (Index i = 0; i < n; ++i) out(i) = circle_field(field, circle_theta(cloud, i));
    return out;
  }
  require_sphere_field(field);
  for (Index i = 0; i < n; ++i) out(i) = field.kind == FieldKind::kZ ? sphere_z(cloud, i) : field.constant;
  return out;
}

Vector field_laplacian(const FieldSpec& field, const PointCloud& cloud) {
  const Index n = cloud.ambient.rows();
  Vector out(n);
  if (on_circle(cloud)) {
    for (Index i = 0; i < n; ++i) out(i) = circle_field_d2(field, circle_theta(cloud, i));
    return out;
  }
  require_sphere_field(field);
  // z is a degree-one spherical harmonic: Delta z = -2 z.
  for (Index i = 0; i < n; ++i) out(i) = field.kind == FieldKind::kZ ? -2.0 * sphere_z(cloud, i) : 0.0;
  return out;
}

Vector drift_term(const FieldSpec& field, const DensitySpec& density, const PointCloud& cloud) {
  const Index n = cloud.ambient.rows();
  Vector out(n);
  if (on_circle(cloud)) {
    for (Index i = 0; i < n; ++i) {
      const double theta = circle_theta(cloud, i);
      out(i) = circle_density_derivative(theta, density) / circle_density(theta, density) *
               circle_field_d1(field, theta);
    }
    return out;
  }
  require_sphere_field(field);
  // grad z = e_z - z x, so <grad p / p, grad z> = a (1 - z^2) / (1 + a z).
  const double a = density.tilt();
  for (Index i = 0; i < n; ++i) {
    const double z = sphere_z(cloud, i);
    out(i) = field.kind == FieldKind::kZ ? a * (1.0 - z * z) / (1.0 + a * z) : 0.0;
  }
  return out;
}

}  // namespace attnlab::manifold

#pragma once

#include <cstdint>
#include <string>

#include "attnlab/core/types.hpp"

namespace attnlab::manifold {

enum class DensityFamily { kUniform, kCosineTilt };

/// Circle: p(theta) = (1 + a cos theta) / (2 pi). Sphere: p = (1 + a z) / (4 pi).
/// Uniform is the a = 0 case.
struct DensitySpec {
  DensityFamily family = DensityFamily::kUniform;
  double a = 0.0;

  double tilt() const { return family == DensityFamily::kUniform ? 0.0 : a; }
};

void validate(const DensitySpec& spec);

double circle_density(double theta, const DensitySpec& spec);
/// d p / d theta on the circle.
double circle_density_derivative(double theta, const DensitySpec& spec);
double sphere_density(double z, const DensitySpec& spec);

struct PointCloud {
  Matrix ambient;    ///< N x (n+1), unit rows
  Matrix intrinsic;  ///< N x 1 (theta) or N x 2 (polar phi, azimuth psi)
  Vector density;
  int manifold_dim = 1;
  double acceptance_ratio = 1.0;  ///< sphere rejection sampling only
};

/// Inverse-CDF sampling of theta via Newton on F(theta) = (theta + a sin theta) / (2 pi).
PointCloud sample_circle(Index n, const DensitySpec& spec, std::uint64_t seed);

/// Rejection sampling from the uniform sphere with acceptance (1 + a z) / (1 + a).
PointCloud sample_sphere(Index n, const DensitySpec& spec, std::uint64_t seed);

/// Deterministic cloud of n equally spaced angles, theta_k = 2 pi k / n.
PointCloud circle_grid(Index n, const DensitySpec& spec);

enum class FieldKind { kConstant, kCos, kSin, kCosK, kZ };

/// Analytic scalar field. Circle: constant, cos theta, sin theta, cos(k theta).
/// Sphere: constant, z.
struct FieldSpec {
  FieldKind kind = FieldKind::kCos;
  int k = 1;
  double constant = 1.0;
};

std::string field_name(const FieldSpec& field);
FieldSpec parse_field(const std::string& name, int k = 1, double constant = 1.0);

Vector field_values(const FieldSpec& field, const PointCloud& cloud);
/// Laplace-Beltrami operator of the field at every point.
Vector field_laplacian(const FieldSpec& field, const PointCloud& cloud);
/// <grad p / p, grad f> at every point.
Vector drift_term(const FieldSpec& field, const DensitySpec& density, const PointCloud& cloud);

/// Circle only: f(theta), f'(theta), f''(theta).
double circle_field(const FieldSpec& field, double theta);
double circle_field_d1(const FieldSpec& field, double theta);
double circle_field_d2(const FieldSpec& field, double theta);

}  // namespace attnlab::manifold

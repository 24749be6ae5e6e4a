#include "attnlab/manifold/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "attnlab/core/error.hpp"

namespace attnlab::manifold {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Index wrap(Index k, Index n) { return (k % n + n) % n; }

}  // namespace

Vector pde_euler_reference(Index grid_size, const DensitySpec& density, const FieldSpec& field, double dt,
                           int steps) {
  validate(density);
  if (grid_size < 3) throw ParameterError("pde_euler_reference: grid_size must be at least 3");
  if (steps < 0) throw ParameterError("pde_euler_reference: steps must be non-negative");
  const double h = kTwoPi / static_cast<double>(grid_size);
  if (!(dt > 0.0) || dt > 0.4 * h * h) {
    throw PreconditionError("pde_euler_reference: dt = " + std::to_string(dt) +
                            " violates the stability bound dt <= 0.4 h^2 = " + std::to_string(0.4 * h * h));
  }
  Vector u(grid_size), drift(grid_size);
  for (Index k = 0; k < grid_size; ++k) {
    const double theta = h * static_cast<double>(k);
    u(k) = circle_field(field, theta);
    drift(k) = 2.0 * circle_density_derivative(theta, density) / circle_density(theta, density);
  }
  Vector next(grid_size);
  for (int s = 0; s < steps; ++s) {
    for (Index k = 0; k < grid_size; ++k) {
      const double up = u(wrap(k + 1, grid_size)), down = u(wrap(k - 1, grid_size));
      const double second = (up - 2.0 * u(k) + down) / (h * h);
      const double first = (up - down) / (2.0 * h);
      next(k) = u(k) + dt * (second + drift(k) * first);
    }
    u.swap(next);
  }
  return u;
}

double conformal_identity_check(const DensitySpec& density, const FieldSpec& field, int manifold_dim,
                                Index grid_size, DerivativeMode mode) {
  if (manifold_dim == 2) {
    throw PreconditionError("conformal identity: n = 2 is excluded, the conformal factor p^(4/(n-2)) is undefined");
  }
  if (manifold_dim != 1) {
    throw ParameterError("conformal identity: only the circle (n = 1) is implemented, got n = " +
                         std::to_string(manifold_dim));
  }
  validate(density);
  if (grid_size < 3) throw ParameterError("conformal identity: grid_size must be at least 3");
  const double h = kTwoPi / static_cast<double>(grid_size);
  auto p = [&](double t) { return circle_density(t, density); };
  auto f = [&](double t) { return circle_field(field, t); };
  // Exponent 4/(n-2) at n = 1. In one dimension Delta_g~ f = c^-1/2 (c^-1/2 f')' for g~ = c g,
  // which with c = p^-4 expands to p^4 f'' + 2 p^3 p' f'.
  const double exponent = 4.0 / (manifold_dim - 2);
  double worst = 0.0;
  for (Index k = 0; k < grid_size; ++k) {
    const double t = h * static_cast<double>(k);
    const double pt = p(t), dp = circle_density_derivative(t, density);
    const double d1 = circle_field_d1(field, t), d2 = circle_field_d2(field, t);
    const double lhs = d2 + 2.0 * (dp / pt) * d1;
    double tilde_laplacian;
    if (mode == DerivativeMode::kAnalytic) {
      tilde_laplacian = std::pow(pt, 4) * d2 + 2.0 * std::pow(pt, 3) * dp * d1;
    } else {
      // Divergence form on the staggered grid: p^2 [(p^2 f')(t + h/2) - (p^2 f')(t - h/2)] / h.
      const double flux_up = std::pow(p(t + 0.5 * h), 2) * (f(t + h) - f(t)) / h;
      const double flux_down = std::pow(p(t - 0.5 * h), 2) * (f(t) - f(t - h)) / h;
      tilde_laplacian = pt * pt * (flux_up - flux_down) / h;
    }
    const double rhs = std::pow(pt, exponent) * tilde_laplacian;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace attnlab::manifold

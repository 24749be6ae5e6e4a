#include "attnlab/manifold/argmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "attnlab/core/error.hpp"

namespace attnlab::manifold {

namespace {

double angle_between(const Vector& u, const Vector& v) {
  const double c = u.dot(v) / (u.norm() * v.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Vector grid_direction(Index dim, Index k, Index m) {
  Vector y(dim);
  if (dim == 2) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    y << std::cos(t), std::sin(t);
    return y;
  }
  // Fibonacci sphere.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(m);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double t = golden * static_cast<double>(k);
  y << r * std::cos(t), r * std::sin(t), z;
  return y;
}

}  // namespace

ArgminReport argmin_pseudo_metric(const Vector& x, const Vector& a, const Matrix& p, Index directions) {
  const Index n = x.size();
  if (n != 2 && n != 3) throw DimensionError("argmin_pseudo_metric: only n = 2 or 3, got " + std::to_string(n));
  if (a.size() != n || p.rows() != n || p.cols() != n) {
    throw DimensionError("argmin_pseudo_metric: x has " + std::to_string(n) + " entries, a " +
                         std::to_string(a.size()) + ", P is " + shape_string(p.rows(), p.cols()));
  }
  if (directions < 4) throw ParameterError("argmin_pseudo_metric: need at least 4 grid directions");
  if ((p.transpose() * p - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    throw ParameterError("argmin_pseudo_metric: P is not orthogonal");
  }
  const Vector c = a.cwiseProduct(p * x);
  if (c.norm() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff() * x.norm())) {
    throw DegenerateInputError("argmin_pseudo_metric: a o (P x) = 0, the objective is constant on the sphere");
  }

  ArgminReport r;
  r.closed_form = p.transpose() * (c / c.norm());
  r.directions = directions;
  const double m = static_cast<double>(directions);
  r.grid_spacing = n == 2 ? 2.0 * std::numbers::pi / m : std::sqrt(4.0 * std::numbers::pi / m);

  // f(x, y) = c . (P y) = (P^T c) . y.
  const Vector g = p.transpose() * c;
  double best = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < directions; ++k) {
    const Vector y = grid_direction(n, k, directions);
    const double value = g.dot(y);
    if (value < best) {
      best = value;
      r.brute_force = y;
    }
  }
  const double plus = angle_between(r.brute_force, r.closed_form);
  const double minus = angle_between(r.brute_force, -r.closed_form);
  r.sign = plus <= minus ? 1 : -1;
  r.angular_error = std::min(plus, minus);
  r.agree_up_to_sign = r.angular_error <= 2.0 * r.grid_spacing;
  return r;
}

}  // namespace attnlab::manifold

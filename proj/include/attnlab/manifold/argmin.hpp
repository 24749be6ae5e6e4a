#pragma once

#include "attnlab/core/types.hpp"

namespace attnlab::manifold {

struct ArgminReport {
  Vector closed_form;   ///< stationary point y = P^T (a o x') / |a o x'|, with x' = P x
  Vector brute_force;   ///< grid minimiser of sum_i a_i x'_i y'_i over unit y
  Index directions = 0;
  double grid_spacing = 0.0;   ///< 2 pi / M on the circle, sqrt(4 pi / M) on the sphere
  double angular_error = 0.0;  ///< angle between brute_force and +/- closed_form
  bool agree_up_to_sign = false;
  /// +1 when the closed form is itself the minimiser, -1 when it is the maximiser.
  int sign = 0;
};

/// Minimise f(x, y) = (P x)^T diag(a) (P y) over the unit sphere, n = 2 or 3.
/// Grid: `directions` equally spaced angles (n = 2) or a Fibonacci sphere (n = 3).
/// The two agree when the angular error is at most twice the grid spacing.
ArgminReport argmin_pseudo_metric(const Vector& x, const Vector& a, const Matrix& p, Index directions = 10000);

}  // namespace attnlab::manifold

#pragma once

#include "attnlab/core/types.hpp"

namespace attnlab::manifold {

/// Least-squares fit estimate ~ slope * target + intercept.
struct RegressionReport {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  Index n = 0;
  /// Set when the target is constant; only max_abs_estimate is meaningful then.
  bool degenerate = false;
  double max_abs_estimate = 0.0;
};

RegressionReport regress(const Vector& estimate, const Vector& target);

}  // namespace attnlab::manifold

#include "attnlab/manifold/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "attnlab/core/error.hpp"

namespace attnlab::manifold {

RegressionReport regress(const Vector& estimate, const Vector& target) {
  if (estimate.size() != target.size() || estimate.size() == 0) {
    throw DimensionError("regress: " + std::to_string(estimate.size()) + " estimates vs " +
                         std::to_string(target.size()) + " targets");
  }
  RegressionReport r;
  r.n = estimate.size();
  r.max_abs_estimate = estimate.cwiseAbs().maxCoeff();
  const double n = static_cast<double>(r.n);
  const double mx = target.sum() / n;
  const double my = estimate.sum() / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (Index i = 0; i < r.n; ++i) {
    const double dx = target(i) - mx, dy = estimate(i) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 1e-24 * n * std::max(1.0, mx * mx)) {
    r.degenerate = true;
    return r;
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return r;
}

}  // namespace attnlab::manifold

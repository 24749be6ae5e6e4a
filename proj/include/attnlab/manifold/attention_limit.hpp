#pragma once

#include <optional>
#include <span>
#include <vector>

#include "attnlab/attention/pseudo_metric.hpp"
#include "attnlab/manifold/laplacian.hpp"
#include "attnlab/manifold/point_cloud.hpp"

namespace attnlab::manifold {

/// H_new = row_softmax(-F, 2 eps) H with F given per point by `metric`
/// (typically prepared on the positions). Rows are streamed, so N may be large.
Matrix attention_step(const attention::PreparedMetric& metric, const Matrix& h, double eps);

/// Self-attention form: F_ij = f(h_i, h_j) on the features themselves.
Matrix attention_step(const Matrix& h, const attention::PseudoMetricKind& metric, double eps);

/// (2/eps)(H_new - H) for H = field values against Delta H + 2 <grad p / p, grad H>,
/// with f = squared ambient distance.
OperatorCheck drift_diffusion_step_check(const PointCloud& cloud, const DensitySpec& density,
                                         double eps, const FieldSpec& field);

struct ZerothOrderRow {
  double eps = 0.0;
  double max_error = 0.0;
};

/// For each eps: max_i |attention output at x_i - H(y'_i)| with y'_i the
/// exhaustive-scan argmin of f(x_i, .) over the cloud. Throws
/// DegenerateInputError listing the indices when the argmin is tied within
/// 8 ulp relative to max(1, |min f|).
std::vector<ZerothOrderRow> zeroth_order_check(const PointCloud& cloud,
                                               const attention::PseudoMetricKind& metric,
                                               const FieldSpec& field, std::span<const double> eps_list);

struct DecayTrajectory {
  std::vector<double> total;    ///< steps + 1 entries, index 0 is the input
  std::vector<double> within;   ///< only with labels
  std::vector<double> between;  ///< only with labels
  /// (16 ulp)^2 times the largest squared row norm of the input. Steps are convex
  /// combinations, so once the variance is this small it is pure rounding.
  double roundoff_floor = 0.0;
};

/// Mean squared deviation of the rows from the column means.
double total_variance(const Matrix& h);

/// Iterates the self-attention step and records feature variances. With labels,
/// the total splits into within-cluster and between-cluster parts.
DecayTrajectory clustering_decay(const Matrix& h0, const attention::PseudoMetricKind& metric, double eps,
                                 int steps, const std::optional<std::vector<int>>& labels = std::nullopt);

/// -ln(v_steps / v_0) / steps with v floored at 1e-300.
double decay_rate(std::span<const double> variances, int steps);

}  // namespace attnlab::manifold

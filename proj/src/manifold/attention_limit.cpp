#include "attnlab/manifold/attention_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "attnlab/core/error.hpp"

namespace attnlab::manifold {

namespace {

// Scores closer than a few ulps of the minimum cannot be ordered reliably.
constexpr double kTieTolerance = 8.0 * std::numeric_limits<double>::epsilon();

void require_eps(double eps, const char* op) {
  if (!(eps > 0.0)) throw ParameterError(std::string(op) + ": eps must be positive, got " + std::to_string(eps));
}

// out = sum_j w_j h_j / sum_j w_j with w_j = exp(-(f_j - min f) / (2 eps)).
void softmin_combine(const RowVector& f, const Matrix& h, double eps, double* out) {
  const double lowest = f.minCoeff();
  const Index width = h.cols();
  std::fill(out, out + width, 0.0);
  double mass = 0.0;
  for (Index j = 0; j < f.size(); ++j) {
    const double w = std::exp(-(f(j) - lowest) / (2.0 * eps));
    mass += w;
    const double* hj = h.data() + j * width;
    for (Index c = 0; c < width; ++c) out[c] += w * hj[c];
  }
  for (Index c = 0; c < width; ++c) out[c] /= mass;
}

}  // namespace

Matrix attention_step(const attention::PreparedMetric& metric, const Matrix& h, double eps) {
  require_eps(eps, "attention_step");
  if (metric.size() != h.rows() || metric.key.rows() != h.rows()) {
    throw DimensionError("attention_step: metric over " + std::to_string(metric.size()) + " points, features " +
                         shape_string(h.rows(), h.cols()));
  }
  Matrix out(h.rows(), h.cols());
  for (Index i = 0; i < h.rows(); ++i) softmin_combine(metric.row(i), h, eps, out.data() + i * h.cols());
  return out;
}

Matrix attention_step(const Matrix& h, const attention::PseudoMetricKind& metric, double eps) {
  return attention_step(attention::prepare(h, metric), h, eps);
}

OperatorCheck drift_diffusion_step_check(const PointCloud& cloud, const DensitySpec& density, double eps,
                                         const FieldSpec& field) {
  validate(density);
  const attention::PreparedMetric metric{cloud.ambient, cloud.ambient, true};
  const Vector h = field_values(field, cloud);
  const Matrix h_new = attention_step(metric, Matrix(h), eps);
  OperatorCheck check;
  check.estimate = (2.0 / eps) * (h_new.col(0) - h);
  check.target = field_laplacian(field, cloud) + 2.0 * drift_term(field, density, cloud);
  check.regression = regress(check.estimate, check.target);
  return check;
}

std::vector<ZerothOrderRow> zeroth_order_check(const PointCloud& cloud, const attention::PseudoMetricKind& metric,
                                               const FieldSpec& field, std::span<const double> eps_list) {
  for (double eps : eps_list) require_eps(eps, "zeroth_order_check");
  const attention::PreparedMetric prepared = attention::prepare(cloud.ambient, metric);
  const Matrix h = field_values(field, cloud);
  std::vector<ZerothOrderRow> rows;
  for (double eps : eps_list) rows.push_back({eps, 0.0});
  double out = 0.0;
  for (Index i = 0; i < h.rows(); ++i) {
    const RowVector f = prepared.row(i);
    Index best = 0;
    f.minCoeff(&best);
    const double tolerance = kTieTolerance * std::max(1.0, std::abs(f(best)));
    std::vector<Index> tied;
    for (Index j = 0; j < f.size(); ++j)
      if (f(j) <= f(best) + tolerance) tied.push_back(j);
    if (tied.size() > 1) {
      std::string list;
      for (Index j : tied) list += (list.empty() ? "" : ", ") + std::to_string(j);
      throw DegenerateInputError("zeroth_order_check: argmin of f(x_" + std::to_string(i) +
                                 ", .) is not unique; tied indices " + list);
    }
    for (ZerothOrderRow& row : rows) {
      softmin_combine(f, h, row.eps, &out);
      row.max_error = std::max(row.max_error, std::abs(out - h(best, 0)));
    }
  }
  return rows;
}

double total_variance(const Matrix& h) {
  if (h.rows() == 0) return 0.0;
  const RowVector mean = h.colwise().mean();
  return (h.rowwise() - mean).squaredNorm() / static_cast<double>(h.rows());
}

DecayTrajectory clustering_decay(const Matrix& h0, const attention::PseudoMetricKind& metric, double eps, int steps,
                                 const std::optional<std::vector<int>>& labels) {
  require_eps(eps, "clustering_decay");
  if (steps < 1) throw ParameterError("clustering_decay: steps must be at least 1");
  if (labels && static_cast<Index>(labels->size()) != h0.rows()) {
    throw DimensionError("clustering_decay: " + std::to_string(labels->size()) + " labels for " +
                         std::to_string(h0.rows()) + " rows");
  }
  DecayTrajectory traj;
  auto record = [&](const Matrix& h) {
    traj.total.push_back(total_variance(h));
    if (!labels) return;
    const int n_groups = *std::max_element(labels->begin(), labels->end()) + 1;
    Matrix sums = Matrix::Zero(n_groups, h.cols());
    std::vector<double> counts(static_cast<std::size_t>(n_groups), 0.0);
    for (Index i = 0; i < h.rows(); ++i) {
      const int g = (*labels)[static_cast<std::size_t>(i)];
      if (g < 0) throw ParameterError("clustering_decay: negative label");
      sums.row(g) += h.row(i);
      counts[static_cast<std::size_t>(g)] += 1.0;
    }
    const RowVector mean = h.colwise().mean();
    double within = 0.0, between = 0.0;
    for (int g = 0; g < n_groups; ++g) {
      if (counts[static_cast<std::size_t>(g)] > 0) sums.row(g) /= counts[static_cast<std::size_t>(g)];
      between += counts[static_cast<std::size_t>(g)] * (sums.row(g) - mean).squaredNorm();
    }
    for (Index i = 0; i < h.rows(); ++i)
      within += (h.row(i) - sums.row((*labels)[static_cast<std::size_t>(i)])).squaredNorm();
    const double n = static_cast<double>(h.rows());
    traj.within.push_back(within / n);
    traj.between.push_back(between / n);
  };
  const double ulp = 16.0 * std::numeric_limits<double>::epsilon();
  traj.roundoff_floor = h0.rows() ? ulp * ulp * h0.rowwise().squaredNorm().maxCoeff() : 0.0;
  Matrix h = h0;
  record(h);
  for (int s = 0; s < steps; ++s) {
    h = attention_step(h, metric, eps);
    record(h);
  }
  return traj;
}

double decay_rate(std::span<const double> variances, int steps) {
  if (steps < 1 || static_cast<std::size_t>(steps) >= variances.size()) {
    throw ParameterError("decay_rate: need " + std::to_string(steps + 1) + " variances, got " +
                         std::to_string(variances.size()));
  }
  const double v0 = std::max(variances[0], 1e-300);
  const double vn = std::max(variances[static_cast<std::size_t>(steps)], 1e-300);
  return -std::log(vn / v0) / steps;
}

}  // namespace attnlab::manifold

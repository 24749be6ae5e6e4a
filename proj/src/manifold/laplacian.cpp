#include "attnlab/manifold/laplacian.hpp"

#include <cmath>
#include <string>

#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"

namespace attnlab::manifold {

namespace {

void require_eps(double eps, const char* op) {
  if (!(eps > 0.0)) throw ParameterError(std::string(op) + ": eps must be positive, got " + std::to_string(eps));
}

OperatorCheck finish(Vector estimate, Vector target) {
  OperatorCheck check;
  check.regression = regress(estimate, target);
  check.estimate = std::move(estimate);
  check.target = std::move(target);
  return check;
}

}  // namespace

GraphLaplacian build_graph_laplacian(const PointCloud& cloud, double eps) {
  require_eps(eps, "build_graph_laplacian");
  GraphLaplacian g;
  g.eps = eps;
  const Matrix d2 = pairwise_sqdist(cloud.ambient);
  const Index n = d2.rows();
  g.w = (-d2.array() / (2.0 * eps)).exp().matrix();
  g.degrees = g.w.rowwise().sum();
  g.l.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) g.l(i, j) = g.w(i, j) / g.degrees(i);
    g.l(i, i) -= 1.0;
  }
  return g;
}

Vector apply_laplacian(const Matrix& points, const Vector& f, double eps) {
  require_eps(eps, "apply_laplacian");
  const Index n = points.rows(), dim = points.cols();
  if (f.size() != n) {
    throw DimensionError("apply_laplacian: " + std::to_string(f.size()) + " field values for " +
                         std::to_string(n) + " points");
  }
  const double scale = -1.0 / (2.0 * eps);
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    const double* xi = points.data() + i * dim;
    double mass = 0.0, acc = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double* xj = points.data() + j * dim;
      double d2 = 0.0;
      for (Index c = 0; c < dim; ++c) {
        const double diff = xi[c] - xj[c];
        d2 += diff * diff;
      }
      const double w = std::exp(d2 * scale);
      mass += w;
      acc += w * (f(j) - f(i));
    }
    out(i) = acc / mass;
  }
  return out;
}

OperatorCheck laplacian_convergence_check(const PointCloud& cloud, double eps, const FieldSpec& field) {
  Vector estimate = apply_laplacian(cloud.ambient, field_values(field, cloud), eps) / eps;
  Vector target = 0.5 * field_laplacian(field, cloud);
  return finish(std::move(estimate), std::move(target));
}

OperatorCheck drift_deviation_check(const PointCloud& cloud, const DensitySpec& density, double eps,
                                    const FieldSpec& field) {
  validate(density);
  Vector estimate = apply_laplacian(cloud.ambient, field_values(field, cloud), eps) / eps;
  Vector target = 0.5 * (field_laplacian(field, cloud) + 2.0 * drift_term(field, density, cloud));
  return finish(std::move(estimate), std::move(target));
}

}  // namespace attnlab::manifold

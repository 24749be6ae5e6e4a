#pragma once

#include "attnlab/manifold/point_cloud.hpp"
#include "attnlab/manifold/regression.hpp"

namespace attnlab::manifold {

/// W_ij = exp(-|x_i - x_j|^2 / (2 eps)), D = row sums, L = D^-1 W - I. Dense.
struct GraphLaplacian {
  Matrix w;
  Vector degrees;
  Matrix l;
  double eps = 0.0;
};

GraphLaplacian build_graph_laplacian(const PointCloud& cloud, double eps);

/// (L f)_i computed row by row without forming W, as
/// sum_j W_ij (f_j - f_i) / sum_j W_ij, so constant fields give exactly 0.
Vector apply_laplacian(const Matrix& points, const Vector& f, double eps);

struct OperatorCheck {
  Vector estimate;
  Vector target;
  RegressionReport regression;
};

/// (1/eps) L f against 1/2 Delta f; cloud should be uniform.
OperatorCheck laplacian_convergence_check(const PointCloud& cloud, double eps, const FieldSpec& field);

/// (1/eps) L f against 1/2 (Delta f + 2 <grad p / p, grad f>).
OperatorCheck drift_deviation_check(const PointCloud& cloud, const DensitySpec& density, double eps,
                                    const FieldSpec& field);

}  // namespace attnlab::manifold

#include "attnlab/simkit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"

namespace attnlab::simkit {

namespace {

double sign_of(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

}  // namespace

Matrix euclidean_distances(const Matrix& points) {
  return pairwise_sqdist(points).cwiseSqrt();
}

void validate_distance_matrix(const Matrix& dist) {
  if (dist.rows() != dist.cols()) {
    throw DimensionError("distance matrix must be square, got " +
                         shape_string(dist.rows(), dist.cols()));
  }
  for (Index i = 0; i < dist.rows(); ++i) {
    if (dist(i, i) != 0.0) {
      throw DomainError("distance matrix has nonzero diagonal at " + std::to_string(i));
    }
    for (Index j = 0; j < dist.cols(); ++j) {
      if (!(dist(i, j) >= 0.0) || !std::isfinite(dist(i, j))) {
        throw DomainError("distance matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") is negative or non-finite");
      }
      if (dist(i, j) != dist(j, i)) {
        throw DomainError("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      }
    }
  }
}

Matrix metric_similarity(const Matrix& dist, const Vector& c, double t) {
  validate_distance_matrix(dist);
  const Index n = dist.rows();
  if (c.size() != n) {
    throw DimensionError("metric_similarity: " + std::to_string(c.size()) + " offsets for " +
                         std::to_string(n) + " points");
  }
  const double s = sign_of(t);
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (s == 0.0) {
        out(i, j) = c(i);
      } else if (i == j && t < 0) {
        out(i, j) = c(i);
      } else {
        if (t < 0 && dist(i, j) == 0.0) {
          throw DomainError("metric_similarity: zero distance between " + std::to_string(i) +
                            " and " + std::to_string(j) + " is singular for t < 0");
        }
        out(i, j) = c(i) - s * std::pow(dist(i, j), t);
      }
    }
  }
  return out;
}

Matrix metric_similarity(const Matrix& dist, double c, double t) {
  return metric_similarity(dist, Vector::Constant(dist.rows(), c), t);
}

Matrix qk_dot_similarity(const Matrix& x, const Matrix& q, const Matrix& k) {
  if (q.rows() != k.rows() || q.cols() != k.cols()) {
    throw DimensionError("qk_dot_similarity: Q " + shape_string(q.rows(), q.cols()) +
                         " and K " + shape_string(k.rows(), k.cols()) + " differ");
  }
  if (x.cols() != q.cols()) {
    throw DimensionError("qk_dot_similarity: points " + shape_string(x.rows(), x.cols()) +
                         " do not match Q " + shape_string(q.rows(), q.cols()));
  }
  const Matrix qx = matmul_transposed(x, q);
  const Matrix kx = matmul_transposed(x, k);
  return matmul_transposed(qx, kx);
}

// Weights proportional to the solution of the sum-to-one constrained least squares.
// The exact KKT system is used when it is nonsingular, which recovers exact
// representations (e.g. barycentric coordinates) without bias. Otherwise the
// Gram matrix is Tikhonov-regularised with lambda = 1e-9 trace(G).
namespace {

Eigen::VectorXd combination_weights(const Eigen::MatrixXd& gram) {
  const Index m = gram.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
  kkt.topLeftCorner(m, m) = gram;
  kkt.block(0, m, m, 1).setOnes();
  kkt.block(m, 0, 1, m).setOnes();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  lu.setThreshold(1e-10);
  if (lu.isInvertible()) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs(m) = 1.0;
    Eigen::VectorXd sol = lu.solve(rhs);
    if (sol.allFinite()) return sol.head(m);
  }
  Eigen::MatrixXd reg = gram;
  const double trace = gram.trace();
  reg.diagonal().array() += trace > 0 ? 1e-9 * trace : 1e-9;
  return reg.ldlt().solve(Eigen::VectorXd::Ones(m));
}

}  // namespace

std::vector<WeightRow> local_combination(const Matrix& points,
                                         const std::vector<std::vector<Index>>& neighbors) {
  if (static_cast<Index>(neighbors.size()) != points.rows()) {
    throw DimensionError("local_combination: " + std::to_string(neighbors.size()) +
                         " neighbour lists for " + std::to_string(points.rows()) + " points");
  }
  std::vector<WeightRow> rows(neighbors.size());
  for (Index i = 0; i < points.rows(); ++i) {
    const auto& nbrs = neighbors[static_cast<std::size_t>(i)];
    if (nbrs.empty()) {
      throw DegenerateInputError("local_combination: point " + std::to_string(i) +
                                 " has no neighbours");
    }
    const Index m = static_cast<Index>(nbrs.size());
    Matrix diffs(m, points.cols());
    for (Index a = 0; a < m; ++a) {
      const Index j = nbrs[static_cast<std::size_t>(a)];
      if (j == i || j < 0 || j >= points.rows()) {
        throw ParameterError("local_combination: invalid neighbour " + std::to_string(j) +
                             " for point " + std::to_string(i));
      }
      diffs.row(a) = points.row(i) - points.row(j);
    }
    Eigen::MatrixXd gram = diffs * diffs.transpose();
    const Eigen::VectorXd w = combination_weights(gram);
    const double total = w.sum();
    WeightRow row;
    row.reserve(static_cast<std::size_t>(m));
    for (Index a = 0; a < m; ++a) row.push_back({nbrs[static_cast<std::size_t>(a)], w(a) / total});
    rows[static_cast<std::size_t>(i)] = std::move(row);
  }
  return rows;
}

Matrix local_combination_matrix(const Matrix& points,
                                const std::vector<std::vector<Index>>& neighbors) {
  const auto rows = local_combination(points, neighbors);
  Matrix out = Matrix::Zero(points.rows(), points.rows());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& nb : rows[i]) out(static_cast<Index>(i), nb.index) = nb.weight;
  return out;
}

std::vector<std::vector<Index>> nearest_neighbors(const Matrix& points, Index k) {
  const Index n = points.rows();
  if (k < 1 || k >= n) {
    throw ParameterError("nearest_neighbors: k must be in [1, N-1], got " + std::to_string(k));
  }
  const Matrix d2 = pairwise_sqdist(points);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return d2(i, a) < d2(i, b); });
    auto& list = out[static_cast<std::size_t>(i)];
    for (Index j : order) {
      if (j == i) continue;
      list.push_back(j);
      if (static_cast<Index>(list.size()) == k) break;
    }
  }
  return out;
}

Matrix adjacency_power(const Matrix& adjacency, int k) {
  if (adjacency.rows() != adjacency.cols()) {
    throw DimensionError("adjacency_power: matrix must be square, got " +
                         shape_string(adjacency.rows(), adjacency.cols()));
  }
  if (k < 0) throw ParameterError("adjacency_power: k must be nonnegative, got " + std::to_string(k));
  if ((adjacency.array() < 0).any()) throw DomainError("adjacency_power: negative entry");
  Matrix out = Matrix::Identity(adjacency.rows(), adjacency.cols());
  for (int step = 0; step < k; ++step) out = matmul(out, adjacency);
  return out;
}

Matrix inflate(const Matrix& m, const InflationMode& mode) {
  Matrix out(m.rows(), m.cols());
  if (const auto* power = std::get_if<PowerInflation>(&mode)) {
    const double r = power->r;
    const bool integral = std::floor(r) == r;
    const double s = sign_of(r);
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (!integral && m(i, j) < 0) {
          throw DomainError("inflate: negative entry at (" + std::to_string(i) + "," +
                            std::to_string(j) + ") with fractional power " + std::to_string(r));
        }
        out(i, j) = s * std::pow(m(i, j), r);
      }
    }
  } else {
    const Vector& eps = std::get<ExpInflation>(mode).eps;
    if (eps.size() != m.rows()) {
      throw DimensionError("inflate: " + std::to_string(eps.size()) + " scales for " +
                           std::to_string(m.rows()) + " rows");
    }
    for (Index i = 0; i < m.rows(); ++i) {
      if (eps(i) == 0.0) throw ParameterError("inflate: eps_" + std::to_string(i) + " is zero");
      for (Index j = 0; j < m.cols(); ++j) out(i, j) = std::exp(m(i, j) / eps(i));
    }
  }
  require_finite(out, "inflate");
  return out;
}

Matrix normalize(const Matrix& m, NormalizeMode mode) {
  if ((m.array() < 0).any()) throw DomainError("normalize: entries must be nonnegative");
  const Index rows = m.rows();
  const Index cols = m.cols();
  Vector row_sums = Vector::Zero(rows);
  Vector col_sums = Vector::Zero(cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      row_sums(i) += m(i, j);
      col_sums(j) += m(i, j);
    }
  }
  auto require_rows = [&](const char* what) {
    for (Index i = 0; i < rows; ++i) {
      if (!(row_sums(i) > 0)) {
        throw DegenerateInputError(std::string("normalize(") + what + "): row " +
                                   std::to_string(i) + " sums to zero");
      }
    }
  };
  Matrix out(rows, cols);
  switch (mode) {
    case NormalizeMode::kRow:
      require_rows("row");
      for (Index i = 0; i < rows; ++i) out.row(i) = m.row(i) / row_sums(i);
      break;
    case NormalizeMode::kColumn:
      for (Index j = 0; j < cols; ++j) {
        if (!(col_sums(j) > 0)) {
          throw DegenerateInputError("normalize(column): column " + std::to_string(j) +
                                     " sums to zero");
        }
      }
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) out(i, j) = m(i, j) / col_sums(j);
      break;
    case NormalizeMode::kTwoSide:
      if (rows != cols) {
        throw DimensionError("normalize(two-side): matrix must be square, got " +
                             shape_string(rows, cols));
      }
      require_rows("two-side");
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) out(i, j) = m(i, j) / (row_sums(i) * row_sums(j));
      break;
    case NormalizeMode::kGlobal: {
      double total = 0.0;
      for (Index i = 0; i < rows; ++i) total += row_sums(i);
      if (!(total > 0)) throw DegenerateInputError("normalize(global): total sums to zero");
      out = m / total;
      break;
    }
  }
  return out;
}

}  // namespace attnlab::simkit

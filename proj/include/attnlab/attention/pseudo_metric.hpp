#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>

#include "attnlab/core/autodiff.hpp"
#include "attnlab/core/types.hpp"

namespace attnlab::attention {

/// f(x, y) = -x^T Q^T K y, with Q and K of shape m x n.
struct DotQK {
  Matrix q;
  Matrix k;
};

/// f(x, y) = |Ax - Ay|^2, A of shape m x n.
struct L2Linear {
  Matrix a;
};

/// f(x, y) = |g(x) - g(y)|^2 with the residual MLP g(x) = x + W2 tanh(W1 x + b1) + b2.
/// Biases are stored as 1 x h and 1 x n rows.
struct MetricMLP {
  Matrix w1;  ///< h x n
  Matrix b1;  ///< 1 x h
  Matrix w2;  ///< n x h
  Matrix b2;  ///< 1 x n
};

using PseudoMetricKind = std::variant<DotQK, L2Linear, MetricMLP>;

std::string kind_name(const PseudoMetricKind& kind);
/// Width n of the features the metric accepts.
Index input_width(const PseudoMetricKind& kind);
void validate(const PseudoMetricKind& kind);

/// Per-point form of a pseudo-metric: F_ij = score(query_i, key_j), which is
/// either |query_i - key_j|^2 (L2 and metric kinds, query = key) or
/// -query_i . key_j (dot kind). Lets large point sets be scored row by row.
struct PreparedMetric {
  Matrix query;
  Matrix key;
  bool squared_distance = true;

  Index size() const { return query.rows(); }
  /// Row i of F.
  RowVector row(Index i) const;
  double operator()(Index i, Index j) const;
};

PreparedMetric prepare(const Matrix& h, const PseudoMetricKind& kind);

/// F_ij = f(h_i, h_j).
Matrix pseudo_metric_matrix(const Matrix& h, const PseudoMetricKind& kind);

/// Number of parameter matrices: 2 (q, k), 1 (a) or 4 (w1, b1, w2, b2).
std::size_t parameter_count(const PseudoMetricKind& kind);

/// Differentiable F on a tape, `params` in the order listed above. MetricMLP's b2 is not recorded: it cancels in
/// g(x) - g(y), so F does not depend on it.
ad::Var pseudo_metric_matrix(ad::Var h, const PseudoMetricKind& kind, std::span<const ad::Var> params);

}  // namespace attnlab::attention

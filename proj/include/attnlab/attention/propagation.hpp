#pragma once

#include <vector>

#include "attnlab/attention/pseudo_metric.hpp"
#include "attnlab/core/autodiff.hpp"
#include "attnlab/core/types.hpp"

namespace attnlab::attention {

/// S = row_softmax(-F, 2 eps).
Matrix similarity(const Matrix& h, const PseudoMetricKind& kind, double eps);

/// H_new = S H.
Matrix propagate(const Matrix& h, const PseudoMetricKind& kind, double eps);

ad::Var propagate(ad::Var h, const PseudoMetricKind& kind, std::span<const ad::Var> params, double eps);

struct Head {
  PseudoMetricKind kind;
  double eps = 0.5;
  Matrix value;  ///< n x w
};

struct MultiHeadSpec {
  std::vector<Head> heads;
};

/// sum_i S_i(H) H V_i.
Matrix multi_head_propagate(const Matrix& h, const MultiHeadSpec& spec);

}  // namespace attnlab::attention

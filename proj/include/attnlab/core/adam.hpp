#pragma once

#include <span>
#include <vector>

#include "attnlab/core/types.hpp"

namespace attnlab {

struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  std::vector<Matrix> m;
  std::vector<Matrix> v;
  long step = 0;
};

/// One Adam step with bias correction. Weight decay is decoupled and applied
/// first: p <- p - lr * weight_decay * p.
void adam_update(std::span<Matrix* const> params, std::span<const Matrix> grads,
                 AdamState& state, double lr, double weight_decay);

}  // namespace attnlab

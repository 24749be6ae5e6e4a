#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "attnlab/core/autodiff.hpp"

namespace attnlab {

/// Builds a scalar loss on `tape` from the parameter leaves (same order as the
/// parameter values handed to grad_check). Must be pure and deterministic.
using LossBuilder = std::function<ad::Var(ad::Tape& tape, std::span<const ad::Var> params)>;

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_param = 0;
  Index worst_row = 0;
  Index worst_col = 0;
  double autodiff_value = 0.0;
  double finite_difference_value = 0.0;
};

/// Compares reverse-mode gradients against central differences with step h.
/// Error per entry is |ad - fd| / max(1e-8, |fd|); the maximum is reported.
GradCheckReport grad_check(const LossBuilder& build, const std::vector<Matrix>& params, double h);

/// Reverse-mode gradients of the loss at `params`.
std::vector<Matrix> gradients(const LossBuilder& build, const std::vector<Matrix>& params,
                              double* loss_out = nullptr);

}  // namespace attnlab

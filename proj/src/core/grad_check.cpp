#include "attnlab/core/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace attnlab {

namespace {

double evaluate(const LossBuilder& build, const std::vector<Matrix>& params) {
  ad::Tape tape;
  std::vector<ad::Var> leaves;
  leaves.reserve(params.size());
  for (const Matrix& p : params) leaves.push_back(tape.parameter(p));
  return build(tape, leaves).value()(0, 0);
}

}  // namespace

std::vector<Matrix> gradients(const LossBuilder& build, const std::vector<Matrix>& params,
                              double* loss_out) {
  ad::Tape tape;
  std::vector<ad::Var> leaves;
  leaves.reserve(params.size());
  for (const Matrix& p : params) leaves.push_back(tape.parameter(p));
  const ad::Var loss = build(tape, leaves);
  tape.backward(loss);
  if (loss_out != nullptr) *loss_out = loss.value()(0, 0);
  std::vector<Matrix> grads;
  grads.reserve(leaves.size());
  for (const ad::Var& leaf : leaves) grads.push_back(leaf.grad());
  return grads;
}

GradCheckReport grad_check(const LossBuilder& build, const std::vector<Matrix>& params, double h) {
  const std::vector<Matrix> analytic = gradients(build, params);
  GradCheckReport report;
  std::vector<Matrix> probe = params;
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (Index i = 0; i < params[k].rows(); ++i) {
      for (Index j = 0; j < params[k].cols(); ++j) {
        const double original = params[k](i, j);
        probe[k](i, j) = original + h;
        const double up = evaluate(build, probe);
        probe[k](i, j) = original - h;
        const double down = evaluate(build, probe);
        probe[k](i, j) = original;
        const double fd = (up - down) / (2.0 * h);
        const double err = std::abs(analytic[k](i, j) - fd) / std::max(1e-8, std::abs(fd));
        if (err > report.max_relative_error || (k == 0 && i == 0 && j == 0)) {
          report.max_relative_error = std::max(report.max_relative_error, err);
          report.worst_param = k;
          report.worst_row = i;
          report.worst_col = j;
          report.autodiff_value = analytic[k](i, j);
          report.finite_difference_value = fd;
        }
      }
    }
  }
  return report;
}

}  // namespace attnlab

#include "attnlab/attention/propagation.hpp"

#include <string>

#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"

namespace attnlab::attention {

namespace {

void check_eps(double eps) {
  if (!(eps > 0)) throw ParameterError("propagate: eps must be positive, got " + std::to_string(eps));
}

}  // namespace

Matrix similarity(const Matrix& h, const PseudoMetricKind& kind, double eps) {
  check_eps(eps);
  return row_softmax(Matrix(-pseudo_metric_matrix(h, kind)), 2.0 * eps);
}

Matrix propagate(const Matrix& h, const PseudoMetricKind& kind, double eps) {
  return matmul(similarity(h, kind, eps), h);
}

ad::Var propagate(ad::Var h, const PseudoMetricKind& kind, std::span<const ad::Var> params, double eps) {
  check_eps(eps);
  ad::Var s = ad::row_softmax(ad::scale(pseudo_metric_matrix(h, kind, params), -1.0), 2.0 * eps);
  return ad::matmul(s, h);
}

Matrix multi_head_propagate(const Matrix& h, const MultiHeadSpec& spec) {
  if (spec.heads.empty()) throw ParameterError("multi_head_propagate: no heads");
  const Index width = spec.heads.front().value.cols();
  Matrix out = Matrix::Zero(h.rows(), width);
  for (std::size_t i = 0; i < spec.heads.size(); ++i) {
    const Head& head = spec.heads[i];
    if (head.value.rows() != h.cols() || head.value.cols() != width) {
      throw DimensionError("multi_head_propagate: head " + std::to_string(i) + " value matrix " +
                           shape_string(head.value.rows(), head.value.cols()) + ", expected " +
                           shape_string(h.cols(), width));
    }
    out += matmul(similarity(h, head.kind, head.eps), matmul(h, head.value));
  }
  return out;
}

}  // namespace attnlab::attention

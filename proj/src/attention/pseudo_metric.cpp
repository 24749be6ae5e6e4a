#include "attnlab/attention/pseudo_metric.hpp"

#include <string>

#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"

namespace attnlab::attention {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void expect_shape(const Matrix& m, Index rows, Index cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(what + " has shape " + shape_string(m.rows(), m.cols()) + ", expected " +
                         shape_string(rows, cols));
  }
}

}  // namespace

std::string kind_name(const PseudoMetricKind& kind) {
  return std::visit(Overloaded{[](const DotQK&) { return std::string("dot-product"); },
                               [](const L2Linear&) { return std::string("l2"); },
                               [](const MetricMLP&) { return std::string("metric"); }},
                    kind);
}

Index input_width(const PseudoMetricKind& kind) {
  return std::visit(Overloaded{[](const DotQK& d) { return d.q.cols(); },
                               [](const L2Linear& l) { return l.a.cols(); },
                               [](const MetricMLP& m) { return m.w1.cols(); }},
                    kind);
}

std::size_t parameter_count(const PseudoMetricKind& kind) {
  return std::visit(Overloaded{[](const DotQK&) { return std::size_t{2}; },
                               [](const L2Linear&) { return std::size_t{1}; },
                               [](const MetricMLP&) { return std::size_t{4}; }},
                    kind);
}

void validate(const PseudoMetricKind& kind) {
  std::visit(Overloaded{[](const DotQK& d) { expect_shape(d.k, d.q.rows(), d.q.cols(), "K"); },
                        [](const L2Linear&) {},
                        [](const MetricMLP& m) {
                          const Index h = m.w1.rows();
                          const Index n = m.w1.cols();
                          expect_shape(m.b1, 1, h, "b1");
                          expect_shape(m.w2, n, h, "W2");
                          expect_shape(m.b2, 1, n, "b2");
                        }},
             kind);
}

RowVector PreparedMetric::row(Index i) const {
  if (squared_distance) return (key.rowwise() - query.row(i)).rowwise().squaredNorm().transpose();
  return -(key * query.row(i).transpose()).transpose();
}

double PreparedMetric::operator()(Index i, Index j) const {
  if (squared_distance) return (query.row(i) - key.row(j)).squaredNorm();
  return -query.row(i).dot(key.row(j));
}

PreparedMetric prepare(const Matrix& h, const PseudoMetricKind& kind) {
  validate(kind);
  if (h.cols() != input_width(kind)) {
    throw DimensionError("pseudo-metric (" + kind_name(kind) + ") expects width " +
                         std::to_string(input_width(kind)) + ", got features " +
                         shape_string(h.rows(), h.cols()));
  }
  return std::visit(
      Overloaded{[&](const DotQK& d) {
                   return PreparedMetric{matmul_transposed(h, d.q), matmul_transposed(h, d.k), false};
                 },
                 [&](const L2Linear& l) {
                   Matrix e = matmul_transposed(h, l.a);
                   return PreparedMetric{e, e, true};
                 },
                 [&](const MetricMLP& m) {
                   Matrix pre = matmul_transposed(h, m.w1);
                   pre.rowwise() += m.b1.row(0);
                   Matrix e = h + matmul_transposed(Matrix(pre.array().tanh()), m.w2);
                   e.rowwise() += m.b2.row(0);
                   return PreparedMetric{e, e, true};
                 }},
      kind);
}

Matrix pseudo_metric_matrix(const Matrix& h, const PseudoMetricKind& kind) {
  const PreparedMetric p = prepare(h, kind);
  if (p.squared_distance) return pairwise_sqdist(p.query);
  return -matmul_transposed(p.query, p.key);
}

ad::Var pseudo_metric_matrix(ad::Var h, const PseudoMetricKind& kind, std::span<const ad::Var> params) {
  if (params.size() != parameter_count(kind)) {
    throw DimensionError("pseudo-metric (" + kind_name(kind) + ") needs " +
                         std::to_string(parameter_count(kind)) + " parameters, got " +
                         std::to_string(params.size()));
  }
  if (h.cols() != params[0].cols()) {
    throw DimensionError("pseudo-metric (" + kind_name(kind) + ") expects width " +
                         std::to_string(params[0].cols()) + ", got features " +
                         shape_string(h.rows(), h.cols()));
  }
  return std::visit(
      Overloaded{[&](const DotQK&) {
                   return ad::scale(ad::matmul_transposed(ad::matmul_transposed(h, params[0]),
                                                          ad::matmul_transposed(h, params[1])),
                                    -1.0);
                 },
                 [&](const L2Linear&) { return ad::pairwise_sqdist(ad::matmul_transposed(h, params[0])); },
                 [&](const MetricMLP&) {
                   ad::Var hidden = ad::tanh(ad::add_row(ad::matmul_transposed(h, params[0]), params[1]));
                   return ad::pairwise_sqdist(ad::add(h, ad::matmul_transposed(hidden, params[2])));
                 }},
      kind);
}

}  // namespace attnlab::attention

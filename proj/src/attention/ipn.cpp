#include "attnlab/attention/ipn.hpp"

#include <cmath>
#include <string>

#include "attnlab/attention/propagation.hpp"
#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"

namespace attnlab::attention {

namespace {

Matrix init_weight(Index rows, Index cols, RandomSource& rng) {
  return rng.normal_matrix(rows, cols, 1.0 / std::sqrt(static_cast<double>(cols)));
}

void check_linear(const Linear& l, const std::string& what) {
  if (l.bias.rows() != 1 || l.bias.cols() != l.weight.rows()) {
    throw DimensionError(what + ".bias has shape " + shape_string(l.bias.rows(), l.bias.cols()) +
                         ", expected " + shape_string(1, l.weight.rows()));
  }
}

std::vector<Matrix*> metric_matrices(PseudoMetricKind& kind) {
  if (auto* d = std::get_if<DotQK>(&kind)) return {&d->q, &d->k};
  if (auto* l = std::get_if<L2Linear>(&kind)) return {&l->a};
  auto& m = std::get<MetricMLP>(kind);
  return {&m.w1, &m.b1, &m.w2, &m.b2};
}

std::vector<std::string> metric_names(const PseudoMetricKind& kind) {
  if (std::holds_alternative<DotQK>(kind)) return {"q", "k"};
  if (std::holds_alternative<L2Linear>(kind)) return {"a"};
  return {"w1", "b1", "w2", "b2"};
}

}  // namespace

std::string attention_kind_name(AttentionKind kind) {
  switch (kind) {
    case AttentionKind::kDotProduct: return "dot-product";
    case AttentionKind::kL2: return "l2";
    case AttentionKind::kMetric: return "metric";
  }
  return "unknown";
}

AttentionKind parse_attention_kind(const std::string& name) {
  if (name == "dot-product") return AttentionKind::kDotProduct;
  if (name == "l2") return AttentionKind::kL2;
  if (name == "metric") return AttentionKind::kMetric;
  throw ParameterError("unknown attention kind '" + name + "' (expected dot-product, l2 or metric)");
}

void validate(const IPNSpec& spec) {
  if (spec.input_dim < 1 || spec.hidden_dim < 1 || spec.n_classes < 2 || spec.mlp_width < 1) {
    throw ParameterError("IPN: widths must be positive and n_classes >= 2");
  }
  if (spec.n_blocks < 1) throw ParameterError("IPN: at least one propagation block is required");
  if (!(spec.eps > 0)) throw ParameterError("IPN: eps must be positive");
}

IPNModel make_ipn(const IPNSpec& spec, RandomSource& rng) {
  validate(spec);
  const Index n = spec.hidden_dim;
  IPNModel model;
  model.input = {init_weight(n, spec.input_dim, rng), Matrix::Zero(1, n)};
  for (Index b = 0; b < spec.n_blocks; ++b) {
    PropagationBlock block;
    block.eps = spec.eps;
    switch (spec.kind) {
      case AttentionKind::kDotProduct: {
        Matrix q = init_weight(n, n, rng);
        Matrix k = init_weight(n, n, rng);
        block.metric = DotQK{std::move(q), std::move(k)};
        break;
      }
      case AttentionKind::kL2:
        block.metric = L2Linear{init_weight(n, n, rng)};
        break;
      case AttentionKind::kMetric:
        block.metric = MetricMLP{init_weight(spec.mlp_width, n, rng), Matrix::Zero(1, spec.mlp_width),
                                 Matrix::Zero(n, spec.mlp_width), Matrix::Zero(1, n)};
        break;
    }
    model.blocks.push_back(std::move(block));
  }
  model.output = {init_weight(spec.n_classes, n, rng), Matrix::Zero(1, spec.n_classes)};
  return model;
}

void validate(const IPNModel& model) {
  if (model.blocks.empty()) throw ParameterError("IPN: at least one propagation block is required");
  check_linear(model.input, "input");
  check_linear(model.output, "output");
  Index width = model.input.weight.rows();
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    const auto& block = model.blocks[b];
    validate(block.metric);
    if (!(block.eps > 0)) throw ParameterError("IPN: block " + std::to_string(b) + " eps must be positive");
    if (input_width(block.metric) != width) {
      throw DimensionError("IPN: block " + std::to_string(b) + " expects width " +
                           std::to_string(input_width(block.metric)) + ", previous layer gives " +
                           std::to_string(width));
    }
  }
  if (model.output.weight.cols() != width) {
    throw DimensionError("IPN: output map expects width " + std::to_string(model.output.weight.cols()) +
                         ", blocks give " + std::to_string(width));
  }
}

std::vector<NamedParameter> parameters(IPNModel& model) {
  std::vector<NamedParameter> out{{"input.weight", &model.input.weight}, {"input.bias", &model.input.bias}};
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    const auto names = metric_names(model.blocks[b].metric);
    const auto mats = metric_matrices(model.blocks[b].metric);
    for (std::size_t i = 0; i < names.size(); ++i)
      out.push_back({"blocks." + std::to_string(b) + "." + names[i], mats[i]});
  }
  out.push_back({"output.weight", &model.output.weight});
  out.push_back({"output.bias", &model.output.bias});
  return out;
}

std::vector<Matrix> parameter_values(const IPNModel& model) {
  std::vector<Matrix> out;
  for (const auto& p : parameters(const_cast<IPNModel&>(model))) out.push_back(*p.value);
  return out;
}

void set_parameter_values(IPNModel& model, std::span<const Matrix> values) {
  auto params = parameters(model);
  if (params.size() != values.size()) {
    throw DimensionError("IPN: " + std::to_string(values.size()) + " parameter values for " +
                         std::to_string(params.size()) + " parameters");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].value->rows() != values[i].rows() || params[i].value->cols() != values[i].cols()) {
      throw DimensionError("IPN: parameter " + params[i].name + " has shape " +
                           shape_string(params[i].value->rows(), params[i].value->cols()) + ", got " +
                           shape_string(values[i].rows(), values[i].cols()));
    }
    *params[i].value = values[i];
  }
}

ad::Var ipn_forward(ad::Tape& tape, const IPNModel& model, const Matrix& x,
                    std::span<const ad::Var> params) {
  validate(model);
  if (x.cols() != model.input.weight.cols()) {
    throw DimensionError("IPN: input width " + std::to_string(x.cols()) + ", model expects " +
                         std::to_string(model.input.weight.cols()));
  }
  std::size_t next = 0;
  auto take = [&](std::size_t count) {
    if (next + count > params.size()) throw DimensionError("IPN: too few parameter leaves");
    auto out = params.subspan(next, count);
    next += count;
    return out;
  };
  auto in = take(2);
  ad::Var h = ad::add_row(ad::matmul_transposed(tape.constant(x), in[0]), in[1]);
  for (const auto& block : model.blocks)
    h = propagate(h, block.metric, take(parameter_count(block.metric)), block.eps);
  auto out = take(2);
  if (next != params.size()) throw DimensionError("IPN: too many parameter leaves");
  return ad::add_row(ad::matmul_transposed(h, out[0]), out[1]);
}

Matrix ipn_forward(const IPNModel& model, const Matrix& x) {
  ad::Tape tape;
  std::vector<ad::Var> leaves;
  for (const Matrix& p : parameter_values(model)) leaves.push_back(tape.constant(p));
  return ipn_forward(tape, model, x, leaves).value();
}

std::vector<int> predict(const IPNModel& model, const Matrix& x) {
  const Matrix logits = ipn_forward(model, x);
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

nlohmann::json parameters_to_json(const IPNModel& model) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& p : parameters(const_cast<IPNModel&>(model))) {
    const Matrix& m = *p.value;
    j[p.name] = {{"shape", {m.rows(), m.cols()}},
                 {"values", std::vector<double>(m.data(), m.data() + m.size())}};
  }
  return j;
}

void load_parameters(IPNModel& model, const nlohmann::json& j) {
  for (const auto& p : parameters(model)) {
    if (!j.contains(p.name)) throw FormatError("model snapshot is missing parameter " + p.name);
    const auto& entry = j.at(p.name);
    const auto shape = entry.at("shape").get<std::vector<Index>>();
    const auto values = entry.at("values").get<std::vector<double>>();
    if (shape.size() != 2 || shape[0] != p.value->rows() || shape[1] != p.value->cols() ||
        static_cast<Index>(values.size()) != shape[0] * shape[1]) {
      throw FormatError("model snapshot parameter " + p.name + " does not match shape " +
                        shape_string(p.value->rows(), p.value->cols()));
    }
    std::copy(values.begin(), values.end(), p.value->data());
  }
  if (j.size() != parameters(model).size()) throw FormatError("model snapshot has unexpected parameters");
}

}  // namespace attnlab::attention

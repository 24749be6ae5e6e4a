#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attnlab/attention/pseudo_metric.hpp"
#include "attnlab/core/autodiff.hpp"
#include "attnlab/core/random.hpp"
#include "attnlab/core/types.hpp"

namespace attnlab::attention {

enum class AttentionKind { kDotProduct, kL2, kMetric };

std::string attention_kind_name(AttentionKind kind);
AttentionKind parse_attention_kind(const std::string& name);

/// Affine map y = x W^T + b with W of shape out x in and b of shape 1 x out.
struct Linear {
  Matrix weight;
  Matrix bias;
};

struct PropagationBlock {
  PseudoMetricKind metric;
  double eps = 0.5;
};

/// Linear -> propagation blocks -> linear -> softmax (the softmax lives in the loss
/// and in predict). The whole batch is one token set.
struct IPNModel {
  Linear input;
  std::vector<PropagationBlock> blocks;
  Linear output;
};

struct IPNSpec {
  Index input_dim = 2;
  Index hidden_dim = 10;  ///< feature width inside the blocks (d_Q is hidden x hidden)
  Index n_classes = 2;
  Index n_blocks = 2;
  AttentionKind kind = AttentionKind::kMetric;
  Index mlp_width = 10;
  double eps = 0.5;
};

void validate(const IPNSpec& spec);

/// Weights from normal(0, 1/sqrt(fan_in)), biases zero, MetricMLP W2 zero.
IPNModel make_ipn(const IPNSpec& spec, RandomSource& rng);

void validate(const IPNModel& model);

struct NamedParameter {
  std::string name;
  Matrix* value;
};

/// Every trainable matrix in a fixed order ("input.weight", "blocks.0.q", ...).
std::vector<NamedParameter> parameters(IPNModel& model);
std::vector<Matrix> parameter_values(const IPNModel& model);
void set_parameter_values(IPNModel& model, std::span<const Matrix> values);

/// Logits on a tape, using `params` (same order as parameters()) as leaves.
ad::Var ipn_forward(ad::Tape& tape, const IPNModel& model, const Matrix& x,
                    std::span<const ad::Var> params);
Matrix ipn_forward(const IPNModel& model, const Matrix& x);

/// Argmax logit per row, ties to the lowest class.
std::vector<int> predict(const IPNModel& model, const Matrix& x);

/// {name: {"shape": [r, c], "values": [row-major]}}.
nlohmann::json parameters_to_json(const IPNModel& model);
void load_parameters(IPNModel& model, const nlohmann::json& j);

}  // namespace attnlab::attention

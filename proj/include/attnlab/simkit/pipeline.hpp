#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "attnlab/core/types.hpp"
#include "attnlab/simkit/operators.hpp"

namespace attnlab::simkit {

struct MetricInit {
  double t = 1.0;
  Vector c;  ///< per-point offsets; empty means zero
};
struct QkInit {
  Matrix q;
  Matrix k;
};
struct LocalCombinationInit {
  Index neighbors = 2;
};
struct AdjacencyPowerInit {
  int k = 1;
};
struct InflatePower {
  double r = 1.0;
};
struct InflateExp {
  Vector eps;  ///< one entry per row, or a single entry broadcast to all rows
};
struct Normalize {
  NormalizeMode mode = NormalizeMode::kRow;
};

using Stage = std::variant<MetricInit, QkInit, LocalCombinationInit, AdjacencyPowerInit,
                           InflatePower, InflateExp, Normalize>;

/// Ordered similarity computation: exactly one initialisation stage, first,
/// followed by any strengthening / normalisation stages.
struct PipelineSpec {
  std::vector<Stage> stages;
};

/// Data a pipeline may draw on. Metric init uses `distances` when present,
/// otherwise Euclidean distances between `points`.
struct PipelineInput {
  Matrix points;
  std::optional<Matrix> distances;
  std::optional<Matrix> adjacency;
};

void validate(const PipelineSpec& spec);
bool is_init_stage(const Stage& stage);
Matrix apply_stage(const Stage& stage, const Matrix& current, const PipelineInput& input);
Matrix run_pipeline(const PipelineSpec& spec, const PipelineInput& input);

/// Metric init (t = 2) -> exp inflation with eps -> two-side -> row normalisation.
PipelineSpec diffusion_map_pipeline(double eps);

nlohmann::json to_json(const PipelineSpec& spec);
PipelineSpec pipeline_from_json(const nlohmann::json& j);

std::string normalize_mode_name(NormalizeMode mode);
NormalizeMode parse_normalize_mode(const std::string& name);

}  // namespace attnlab::simkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attnlab/core/types.hpp"

namespace attnlab::lab {

struct DensityConfig {
  std::string family = "uniform";
  double a = 0.0;

  bool operator==(const DensityConfig&) const = default;
};

struct ManifoldConfig {
  std::string shape = "circle";
  Index n = 20000;
  DensityConfig density;

  bool operator==(const ManifoldConfig&) const = default;
};

struct FieldConfig {
  std::string name = "cos";
  int k = 1;
  double constant = 1.0;

  bool operator==(const FieldConfig&) const = default;
};

struct SweepConfig {
  std::vector<Index> n_values{1250, 5000, 20000};
  int seeds = 8;

  bool operator==(const SweepConfig&) const = default;
};

struct PdeConfig {
  Index grid_size = 512;
  double t_end = 0.1;
  double courant = 0.4;  ///< dt = t_end / ceil(t_end / (courant h^2))

  bool operator==(const PdeConfig&) const = default;
};

struct ConformalConfig {
  int manifold_dim = 1;
  Index grid_size = 1000;
  std::string mode = "analytic";

  bool operator==(const ConformalConfig&) const = default;
};

struct ArgminConfig {
  std::vector<double> x{1.0, 0.0};
  std::vector<double> a{2.0, 1.0};
  std::vector<std::vector<double>> rotation;  ///< empty means identity
  Index directions = 10000;

  bool operator==(const ArgminConfig&) const = default;
};

struct ClusteringConfig {
  Index rows = 40;
  Index dim = 3;
  double feature_sd = 0.5;
  int steps = 20;
  int clusters = 1;
  double separation = 4.0;  ///< distance between the two cluster centres
  double eps = 0.5;

  bool operator==(const ClusteringConfig&) const = default;
};

struct MoonsConfig {
  Index n_train = 400;
  Index n_test = 100;
  double noise = 0.2;

  bool operator==(const MoonsConfig&) const = default;
};

struct ModelConfig {
  std::string kind = "metric";
  Index hidden_dim = 10;
  int n_blocks = 2;
  Index mlp_width = 10;
  double eps = 0.5;

  bool operator==(const ModelConfig&) const = default;
};

struct TrainingConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  int epochs = 600;
  int eval_every = 10;

  bool operator==(const TrainingConfig&) const = default;
};

struct ComparisonConfig {
  int seeds = 10;
  std::vector<std::string> kinds{"dot-product", "l2", "metric"};

  bool operator==(const ComparisonConfig&) const = default;
};

struct IdxConfig {
  std::string images;
  std::string labels;

  bool operator==(const IdxConfig&) const = default;
};

/// One experiment invocation. Every section has defaults, so a config names
/// only what it changes; to_json writes the fully resolved form.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string out;
  double eps = 0.05;
  std::vector<double> eps_list{0.1, 0.05, 0.025};
  std::string metric = "negative-dot";
  ManifoldConfig manifold;
  FieldConfig field;
  SweepConfig sweep;
  PdeConfig pde;
  ConformalConfig conformal;
  ArgminConfig argmin;
  ClusteringConfig clustering;
  MoonsConfig moons;
  ModelConfig model;
  TrainingConfig training;
  ComparisonConfig comparison;
  IdxConfig idx;
  /// Pass thresholds; experiments fill in the defaults they use.
  nlohmann::json assertions = nlohmann::json::object();

  bool operator==(const ExperimentConfig&) const = default;
};

/// The JSON schema shipped in schemas/experiment.schema.json.
const std::string& config_schema();

/// Throws FormatError naming the offending location and schema keyword.
void validate_config_json(const nlohmann::json& doc);

/// Validates, then reads typed values. Accepts a report.json produced by the
/// runner as well, in which case its embedded resolved config is used.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& config);

/// Reads assertions[key], storing `fallback` there first when absent.
double threshold(ExperimentConfig& config, const std::string& key, double fallback);

}  // namespace attnlab::lab

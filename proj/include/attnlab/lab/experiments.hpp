#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attnlab/lab/config.hpp"
#include "attnlab/lab/csv.hpp"

namespace attnlab::lab {

/// One pass/fail assertion, recorded in report.json.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  ///< "<=", ">=", ">", "in [lo, hi]", ...
  double threshold = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  CsvWriter data;
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  std::vector<Check> checks;
  /// Extra artefacts written next to data.csv, e.g. model snapshots.
  std::vector<std::pair<std::string, std::string>> files;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::function<ExperimentResult(ExperimentConfig&)> run;
};

const std::vector<ExperimentInfo>& experiment_registry();
/// Throws ParameterError listing the registry when `name` is unknown.
const ExperimentInfo& find_experiment(const std::string& name);

struct RunOutcome {
  bool pass = false;
  nlohmann::json report;
  std::filesystem::path out_dir;
};

/// Runs the experiment and writes <out>/report.json and <out>/data.csv. A
/// failing check or an exception thrown by the experiment gives pass = false;
/// in the latter case the report carries the error and no data.csv is written.
RunOutcome run_experiment(ExperimentConfig config, const std::filesystem::path& out_dir);

/// Out directory: config.out when set, else "attnlab-out/<experiment>".
std::filesystem::path default_out_dir(const ExperimentConfig& config);

/// Keeps freed large matrices in the heap instead of returning them to the OS
/// after every use (glibc only; no-op elsewhere). Training allocates many
/// N x N temporaries per epoch and otherwise pays a page fault for each.
void tune_allocator();

}  // namespace attnlab::lab

// attnlab <experiment> --config <path.json> [--out <dir>] [--seed <u64>]
// attnlab list
// attnlab validate --config <path.json>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "attnlab/lab/config.hpp"
#include "attnlab/lab/experiments.hpp"

namespace lab = attnlab::lab;

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitUsage = 2;

int list_experiments() {
  for (const auto& e : lab::experiment_registry()) std::printf("%-22s %s\n", e.name.c_str(), e.description.c_str());
  return 0;
}

int validate(const std::string& path) {
  const lab::ExperimentConfig config = lab::load_config(path);
  std::printf("%s: valid (%s)\n", path.c_str(), config.experiment.c_str());
  return 0;
}

int run(const std::string& name, const std::string& path, const std::string& out, std::optional<std::uint64_t> seed) {
  const lab::ExperimentInfo& info = lab::find_experiment(name);
  lab::ExperimentConfig config = lab::load_config(path);
  if (config.experiment != info.name) {
    std::cerr << "error: " << path << " configures '" << config.experiment << "', not '" << info.name << "'\n";
    return kExitUsage;
  }
  if (seed) config.seed = *seed;
  const auto out_dir = out.empty() ? lab::default_out_dir(config) : std::filesystem::path(out);
  lab::tune_allocator();
  const lab::RunOutcome outcome = lab::run_experiment(config, out_dir);
  const auto& report = outcome.report;
  if (report.contains("error")) std::printf("error: %s\n", report.at("error").get<std::string>().c_str());
  if (report.contains("checks")) {
    for (const auto& ch : report.at("checks")) {
      std::printf("%s  %s = %s %s %s\n", ch.at("pass").get<bool>() ? "PASS" : "FAIL",
                  ch.at("name").get<std::string>().c_str(), ch.at("value").dump().c_str(),
                  ch.at("relation").get<std::string>().c_str(), ch.at("threshold").dump().c_str());
    }
  }
  std::printf("%s: %s, report in %s\n", info.name.c_str(), outcome.pass ? "pass" : "FAIL",
              (out_dir / "report.json").string().c_str());
  return outcome.pass ? 0 : kExitFailedChecks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attnlab: manifold and attention experiments"};
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "experiment name, 'list' or 'validate'")->required();
  app.add_option("--config", config_path, "experiment config (JSON) or a previous report.json");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "override the config seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (command == "list") return list_experiments();
    if (config_path.empty()) {
      std::cerr << "error: --config is required for '" << command << "'\n";
      return kExitUsage;
    }
    if (command == "validate") return validate(config_path);
    return run(command, config_path, out_dir, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

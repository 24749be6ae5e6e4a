#include "attnlab/lab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <map>
#include <optional>
#include <stdexcept>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "attnlab/attention/ipn.hpp"
#include "attnlab/core/error.hpp"
#include "attnlab/core/random.hpp"
#include "attnlab/lab/idx.hpp"
#include "attnlab/lab/moons.hpp"
#include "attnlab/manifold/argmin.hpp"
#include "attnlab/manifold/attention_limit.hpp"
#include "attnlab/manifold/laplacian.hpp"
#include "attnlab/manifold/pde.hpp"
#include "attnlab/manifold/point_cloud.hpp"

namespace attnlab::lab {

using nlohmann::json;
namespace mf = manifold;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// --- config translation ---

mf::DensitySpec density_spec(const ExperimentConfig& c) {
  const auto& d = c.manifold.density;
  if (d.family == "uniform") return {mf::DensityFamily::kUniform, 0.0};
  return {mf::DensityFamily::kCosineTilt, d.a};
}

mf::PointCloud sample(const ExperimentConfig& c, std::uint64_t seed, Index n) {
  const mf::DensitySpec d = density_spec(c);
  return c.manifold.shape == "sphere" ? mf::sample_sphere(n, d, seed) : mf::sample_circle(n, d, seed);
}

mf::PointCloud sample(const ExperimentConfig& c) { return sample(c, c.seed, c.manifold.n); }

mf::FieldSpec field_spec(const ExperimentConfig& c) {
  return mf::parse_field(c.field.name, c.field.k, c.field.constant);
}

attention::PseudoMetricKind metric_kind(const std::string& name, Index dim) {
  if (name == "negative-dot") return attention::DotQK{Matrix::Identity(dim, dim), Matrix::Identity(dim, dim)};
  return attention::L2Linear{Matrix::Identity(dim, dim)};
}

attention::IPNSpec ipn_spec(const ExperimentConfig& c, const std::string& kind) {
  attention::IPNSpec s;
  s.kind = attention::parse_attention_kind(kind);
  s.hidden_dim = c.model.hidden_dim;
  s.n_blocks = c.model.n_blocks;
  s.mlp_width = c.model.mlp_width;
  s.eps = c.model.eps;
  return s;
}

attention::TrainConfig train_config(const ExperimentConfig& c) {
  attention::TrainConfig t;
  t.lr = c.training.lr;
  t.weight_decay = c.training.weight_decay;
  t.epochs = c.training.epochs;
  t.eval_every = c.training.eval_every;
  t.seed = c.seed;
  return t;
}

MoonSpec moon_spec(const ExperimentConfig& c, std::uint64_t seed) {
  return {c.moons.n_train, c.moons.n_test, c.moons.noise, seed};
}

// --- checks ---

Check at_least(const std::string& name, double value, double bound) { return {name, value, ">=", bound, value >= bound}; }
Check at_most(const std::string& name, double value, double bound) { return {name, value, "<=", bound, value <= bound}; }
Check above(const std::string& name, double value, double bound) { return {name, value, ">", bound, value > bound}; }

void regression_checks(ExperimentResult& r, ExperimentConfig& c, const mf::OperatorCheck& check, double slope_lo,
                       double slope_hi, double r2_min) {
  const mf::RegressionReport& reg = check.regression;
  r.metrics["n"] = reg.n;
  r.metrics["degenerate"] = reg.degenerate;
  r.metrics["max_abs_estimate"] = reg.max_abs_estimate;
  if (reg.degenerate) {
    r.checks.push_back(at_most("max_abs_estimate", reg.max_abs_estimate, threshold(c, "max_abs_estimate", 0.0)));
    return;
  }
  r.metrics["slope"] = reg.slope;
  r.metrics["intercept"] = reg.intercept;
  r.metrics["r2"] = reg.r2;
  r.checks.push_back(at_least("slope", reg.slope, threshold(c, "slope_min", slope_lo)));
  r.checks.push_back(at_most("slope", reg.slope, threshold(c, "slope_max", slope_hi)));
  r.checks.push_back(at_least("r2", reg.r2, threshold(c, "r2_min", r2_min)));
}

ExperimentResult operator_result(const mf::OperatorCheck& check) {
  ExperimentResult r{CsvWriter({"point_index", "estimate", "target"})};
  for (Index i = 0; i < check.estimate.size(); ++i) {
    r.data.field(static_cast<std::int64_t>(i)).field(check.estimate(i)).field(check.target(i));
    r.data.end_row();
  }
  return r;
}

// --- experiments ---

ExperimentResult laplacian_convergence(ExperimentConfig& c) {
  if (density_spec(c).tilt() != 0.0) {
    throw PreconditionError("laplacian-convergence needs a uniform density; use drift-deviation for a tilted one");
  }
  const auto check = mf::laplacian_convergence_check(sample(c), c.eps, field_spec(c));
  ExperimentResult r = operator_result(check);
  const bool sphere = c.manifold.shape == "sphere";
  regression_checks(r, c, check, sphere ? 0.8 : 0.85, sphere ? 1.2 : 1.15, sphere ? 0.85 : 0.9);
  r.seeds["sample"] = c.seed;
  return r;
}

ExperimentResult laplacian_sweep(ExperimentConfig& c) {
  if (density_spec(c).tilt() != 0.0) throw PreconditionError("laplacian-sweep needs a uniform density");
  ExperimentResult r{CsvWriter({"n", "seed", "slope", "r2"})};
  const std::size_t m = c.sweep.n_values.size();
  std::vector<double> dev(m, 0.0), r2(m, 0.0);
  json seeds = json::array();
  for (int s = 0; s < c.sweep.seeds; ++s) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
    seeds.push_back(seed);
    for (std::size_t k = 0; k < m; ++k) {
      const Index n = c.sweep.n_values[k];
      const auto reg = mf::laplacian_convergence_check(sample(c, seed, n), c.eps, field_spec(c)).regression;
      if (reg.degenerate) throw DegenerateInputError("laplacian-sweep: field has a constant target");
      r.data.field(static_cast<std::int64_t>(n)).field(static_cast<std::int64_t>(seed)).field(reg.slope).field(reg.r2);
      r.data.end_row();
      dev[k] += std::abs(reg.slope - 1.0) / c.sweep.seeds;
      r2[k] += reg.r2 / c.sweep.seeds;
    }
  }
  r.seeds["samples"] = seeds;
  r.metrics["mean_abs_slope_error"] = dev;
  r.metrics["mean_r2"] = r2;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::string step = std::to_string(c.sweep.n_values[k]) + "->" + std::to_string(c.sweep.n_values[k + 1]);
    r.checks.push_back(above("slope_error_drop " + step, dev[k] - dev[k + 1], 0.0));
    r.checks.push_back(above("r2_gain " + step, r2[k + 1] - r2[k], 0.0));
  }
  return r;
}

ExperimentResult drift_deviation(ExperimentConfig& c) {
  const auto check = mf::drift_deviation_check(sample(c), density_spec(c), c.eps, field_spec(c));
  ExperimentResult r = operator_result(check);
  regression_checks(r, c, check, 0.8, 1.2, 0.85);
  r.seeds["sample"] = c.seed;
  return r;
}

ExperimentResult attention_step(ExperimentConfig& c) {
  const auto check = mf::drift_diffusion_step_check(sample(c), density_spec(c), c.eps, field_spec(c));
  ExperimentResult r = operator_result(check);
  regression_checks(r, c, check, 0.8, 1.2, 0.85);
  r.seeds["sample"] = c.seed;
  return r;
}

ExperimentResult pde_reference(ExperimentConfig& c) {
  const Index g = c.pde.grid_size;
  const double h = kTwoPi / static_cast<double>(g);
  const double dt_max = c.pde.courant * h * h;
  const int steps = static_cast<int>(std::ceil(c.pde.t_end / dt_max));
  const double dt = steps > 0 ? c.pde.t_end / steps : dt_max;
  const mf::DensitySpec density = density_spec(c);
  const mf::FieldSpec field = field_spec(c);
  const Vector u = mf::pde_euler_reference(g, density, field, dt, steps);

  // Closed form for Fourier modes under uniform density: exp(-k^2 t) f.
  const bool closed = density.tilt() == 0.0 && field.kind != mf::FieldKind::kZ;
  const double k = field.kind == mf::FieldKind::kConstant ? 0.0 : field.kind == mf::FieldKind::kCosK ? field.k : 1.0;
  ExperimentResult r{CsvWriter({"grid_index", "theta", "value", "exact"})};
  double worst = 0.0;
  for (Index i = 0; i < g; ++i) {
    const double theta = h * static_cast<double>(i);
    r.data.field(static_cast<std::int64_t>(i)).field(theta).field(u(i));
    if (closed) {
      const double exact = std::exp(-k * k * c.pde.t_end) * mf::circle_field(field, theta);
      worst = std::max(worst, std::abs(u(i) - exact));
      r.data.field(exact);
    } else {
      r.data.field(std::string_view{});
    }
    r.data.end_row();
  }
  r.metrics["dt"] = dt;
  r.metrics["steps"] = steps;
  r.metrics["closed_form_available"] = closed;
  if (closed) {
    r.metrics["max_error"] = worst;
    r.checks.push_back(at_most("max_error", worst, threshold(c, "max_error", 1e-3)));
  }
  return r;
}

ExperimentResult conformal_identity(ExperimentConfig& c) {
  const bool analytic = c.conformal.mode == "analytic";
  const double worst = mf::conformal_identity_check(
      density_spec(c), field_spec(c), c.conformal.manifold_dim, c.conformal.grid_size,
      analytic ? mf::DerivativeMode::kAnalytic : mf::DerivativeMode::kFiniteDifference);
  ExperimentResult r{CsvWriter({"manifold_dim", "grid_size", "mode", "max_discrepancy"})};
  r.data.field(c.conformal.manifold_dim).field(static_cast<std::int64_t>(c.conformal.grid_size));
  r.data.field(c.conformal.mode).field(worst);
  r.data.end_row();
  r.metrics["max_discrepancy"] = worst;
  r.checks.push_back(at_most("max_discrepancy", worst, threshold(c, "max_discrepancy", analytic ? 1e-10 : 1e-3)));
  return r;
}

ExperimentResult zeroth_order(ExperimentConfig& c) {
  for (std::size_t i = 0; i + 1 < c.eps_list.size(); ++i) {
    if (!(c.eps_list[i] > c.eps_list[i + 1])) throw ParameterError("zeroth-order: eps_list must be strictly decreasing");
  }
  const mf::PointCloud cloud = sample(c);
  const auto rows =
      mf::zeroth_order_check(cloud, metric_kind(c.metric, cloud.ambient.cols()), field_spec(c), c.eps_list);
  ExperimentResult r{CsvWriter({"eps", "max_error"})};
  json errors = json::array();
  for (const auto& row : rows) {
    r.data.field(row.eps).field(row.max_error);
    r.data.end_row();
    errors.push_back(row.max_error);
  }
  r.metrics["max_error"] = errors;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    r.checks.push_back(above("error_drop eps=" + format_number(rows[i].eps) + "->" + format_number(rows[i + 1].eps),
                             rows[i].max_error - rows[i + 1].max_error, 0.0));
  }
  r.seeds["sample"] = c.seed;
  return r;
}

ExperimentResult argmin(ExperimentConfig& c) {
  const Index n = static_cast<Index>(c.argmin.x.size());
  if (static_cast<Index>(c.argmin.a.size()) != n) throw DimensionError("argmin: x and a differ in length");
  const Vector x = Eigen::Map<const Vector>(c.argmin.x.data(), n);
  const Vector a = Eigen::Map<const Vector>(c.argmin.a.data(), n);
  Matrix p = Matrix::Identity(n, n);
  if (!c.argmin.rotation.empty()) {
    if (static_cast<Index>(c.argmin.rotation.size()) != n) throw DimensionError("argmin: rotation has wrong row count");
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(c.argmin.rotation[i].size()) != n) throw DimensionError("argmin: rotation row length");
      for (Index j = 0; j < n; ++j) p(i, j) = c.argmin.rotation[i][j];
    }
  }
  const auto rep = mf::argmin_pseudo_metric(x, a, p, c.argmin.directions);
  ExperimentResult r{CsvWriter({"component", "x", "a", "closed_form", "brute_force"})};
  for (Index i = 0; i < n; ++i) {
    r.data.field(static_cast<std::int64_t>(i)).field(x(i)).field(a(i));
    r.data.field(rep.closed_form(i)).field(rep.brute_force(i));
    r.data.end_row();
  }
  r.metrics["angular_error"] = rep.angular_error;
  r.metrics["grid_spacing"] = rep.grid_spacing;
  r.metrics["sign"] = rep.sign;
  r.metrics["closed_form_is"] = rep.sign > 0 ? "minimiser" : "maximiser";
  r.metrics["agree_up_to_sign"] = rep.agree_up_to_sign;
  r.checks.push_back(at_most("angular_error", rep.angular_error, 2.0 * rep.grid_spacing));
  return r;
}

ExperimentResult clustering_decay(ExperimentConfig& c) {
  const auto& k = c.clustering;
  RandomSource rng = RandomSource(c.seed).derive("clustering");
  Matrix h = rng.normal_matrix(k.rows, k.dim, k.feature_sd);
  std::optional<std::vector<int>> labels;
  if (k.clusters == 2) {
    labels.emplace(static_cast<std::size_t>(k.rows));
    for (Index i = 0; i < k.rows; ++i) {
      const bool first = i < k.rows / 2;
      (*labels)[static_cast<std::size_t>(i)] = first ? 0 : 1;
      h(i, 0) += first ? -0.5 * k.separation : 0.5 * k.separation;
    }
  }
  const auto traj = mf::clustering_decay(h, metric_kind("squared-distance", k.dim), k.eps, k.steps, labels);
  ExperimentResult r{CsvWriter({"step", "total", "within", "between"})};
  double worst_rise = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < traj.total.size(); ++s) {
    r.data.field(static_cast<std::int64_t>(s)).field(traj.total[s]);
    if (labels) r.data.field(traj.within[s]).field(traj.between[s]);
    else r.data.field(std::string_view{}).field(std::string_view{});
    r.data.end_row();
    if (s > 0) worst_rise = std::max(worst_rise, traj.total[s] - traj.total[s - 1]);
  }
  r.metrics["roundoff_floor"] = traj.roundoff_floor;
  r.metrics["largest_step_increase"] = worst_rise;
  r.checks.push_back(at_most("largest_step_increase", worst_rise, traj.roundoff_floor));
  if (!labels) {
    const double ratio = traj.total[0] > 0 ? traj.total.back() / traj.total[0] : 0.0;
    r.metrics["variance_ratio"] = ratio;
    r.checks.push_back(at_most("variance_ratio", ratio, threshold(c, "variance_ratio_max", 1e-6)));
  } else {
    const double within = mf::decay_rate(traj.within, k.steps);
    const double between = mf::decay_rate(traj.between, k.steps);
    const double ratio = within / std::max(std::abs(between), 1e-300);
    r.metrics["within_rate"] = within;
    r.metrics["between_rate"] = between;
    r.metrics["rate_ratio"] = ratio;
    r.checks.push_back(at_least("rate_ratio", ratio, threshold(c, "rate_factor", 10.0)));
  }
  r.seeds["features"] = c.seed;
  return r;
}

ExperimentResult generate_moons_csv(ExperimentConfig& c) {
  const MoonData d = generate_moons(moon_spec(c, c.seed));
  ExperimentResult r{CsvWriter({"split", "index", "x", "y", "label"})};
  auto emit = [&](const char* split, const attention::Dataset& set) {
    for (Index i = 0; i < set.x.rows(); ++i) {
      r.data.field(split).field(static_cast<std::int64_t>(i)).field(set.x(i, 0)).field(set.x(i, 1));
      r.data.field(set.y[static_cast<std::size_t>(i)]);
      r.data.end_row();
    }
  };
  emit("train", d.train);
  emit("test", d.test);
  r.metrics["n_train"] = d.train.x.rows();
  r.metrics["n_test"] = d.test.x.rows();
  r.seeds["moons"] = c.seed;
  return r;
}

ExperimentResult train_ipn(ExperimentConfig& c) {
  const MoonRun run = train_moon_run(moon_spec(c, c.seed), ipn_spec(c, c.model.kind), train_config(c));
  ExperimentResult r{CsvWriter({"epoch", "train_loss", "test_acc"})};
  for (const auto& row : run.history.rows) {
    r.data.field(row.epoch).field(row.train_loss).field(row.test_acc);
    r.data.end_row();
  }
  r.metrics["test_accuracy"] = run.test_accuracy;
  r.metrics["train_loss"] = run.train_loss;
  r.checks.push_back(at_least("test_accuracy", run.test_accuracy, threshold(c, "min_accuracy", 0.0)));
  r.files.emplace_back("model.json", attention::parameters_to_json(run.model).dump(2) + "\n");
  r.seeds["moons"] = c.seed;
  r.seeds["model"] = "derive(" + std::to_string(c.seed) + ", \"model\")";
  return r;
}

ExperimentResult moon_comparison(ExperimentConfig& c) {
  ExperimentResult r{CsvWriter({"kind", "seed", "test_accuracy", "train_loss"})};
  std::map<std::string, std::vector<double>> acc;
  json seeds = json::array();
  for (int s = 0; s < c.comparison.seeds; ++s) seeds.push_back(c.seed + static_cast<std::uint64_t>(s));
  for (const std::string& kind : c.comparison.kinds) {
    for (int s = 0; s < c.comparison.seeds; ++s) {
      const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
      const MoonRun run = train_moon_run(moon_spec(c, seed), ipn_spec(c, kind), train_config(c));
      r.data.field(kind).field(static_cast<std::int64_t>(seed)).field(run.test_accuracy).field(run.train_loss);
      r.data.end_row();
      acc[kind].push_back(run.test_accuracy);
    }
  }
  json summary = json::object();
  for (const auto& [kind, values] : acc) {
    summary[kind] = {{"median", median(values)}, {"stddev", sample_stddev(values)}};
  }
  r.metrics["accuracy"] = summary;
  r.seeds["runs"] = seeds;
  if (acc.count("metric") && acc.count("dot-product") && acc.count("l2")) {
    const double m = median(acc["metric"]), d = median(acc["dot-product"]), l = median(acc["l2"]);
    const double margin = threshold(c, "l2_margin", 0.01);
    r.checks.push_back(at_least("metric_median_vs_dot", m, d));
    r.checks.push_back(at_least("metric_median_vs_l2", m, l - margin));
    r.checks.push_back(at_least("metric_median", m, threshold(c, "min_accuracy", 0.90)));
    r.checks.push_back(at_most("metric_stddev_vs_dot", sample_stddev(acc["metric"]), sample_stddev(acc["dot-product"])));
  }
  return r;
}

ExperimentResult idx_summary(ExperimentConfig& c) {
  if (c.idx.images.empty() && c.idx.labels.empty()) throw ParameterError("idx-summary: set idx.images and/or idx.labels");
  ExperimentResult r{CsvWriter({"label", "count"})};
  if (!c.idx.images.empty()) {
    const IdxTensor t = read_idx_file(c.idx.images);
    const Matrix images = idx_images(t);
    r.metrics["images"] = {{"count", t.dims[0]}, {"rows", t.dims[1]}, {"cols", t.dims[2]},
                           {"pixel_scaling", "value / 255, range [0, 1]"},
                           {"min", images.size() ? images.minCoeff() : 0.0},
                           {"max", images.size() ? images.maxCoeff() : 0.0}};
  }
  if (!c.idx.labels.empty()) {
    const std::vector<int> labels = idx_labels(read_idx_file(c.idx.labels));
    std::map<int, std::int64_t> counts;
    for (int y : labels) ++counts[y];
    for (const auto& [y, n] : counts) {
      r.data.field(y).field(n);
      r.data.end_row();
    }
    r.metrics["labels"] = {{"count", labels.size()}, {"classes", counts.size()}};
  }
  return r;
}

json check_to_json(const Check& ch) {
  return {{"name", ch.name}, {"value", ch.value}, {"relation", ch.relation}, {"threshold", ch.threshold},
          {"pass", ch.pass}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> registry{
      {"laplacian-convergence", "(1/eps) L f against half the Laplace-Beltrami operator on a uniform cloud",
       laplacian_convergence},
      {"laplacian-sweep", "laplacian-convergence over increasing N, averaged over seeds", laplacian_sweep},
      {"drift-deviation", "(1/eps) L f against the drift-corrected target on a tilted density", drift_deviation},
      {"attention-step", "(2/eps)(S H - H) against the drift-diffusion operator", attention_step},
      {"pde-reference", "explicit Euler for the drift-diffusion equation on the circle", pde_reference},
      {"conformal-identity", "drift-diffusion operator vs conformally rescaled Laplacian", conformal_identity},
      {"zeroth-order", "attention output vs the field at the pseudo-metric argmin, per eps", zeroth_order},
      {"argmin", "closed-form stationary point vs grid minimiser of a diagonal bilinear pseudo-metric", argmin},
      {"clustering-decay", "feature variance under stacked self-attention steps", clustering_decay},
      {"generate-moons", "emit the Moon train/test sets", generate_moons_csv},
      {"train-ipn", "train one IPN on Moon", train_ipn},
      {"moon-comparison", "dot-product vs l2 vs metric attention on Moon over several seeds", moon_comparison},
      {"idx-summary", "read IDX image/label files and summarise them", idx_summary},
  };
  return registry;
}

const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : experiment_registry())
    if (e.name == name) return e;
  std::string names;
  for (const auto& e : experiment_registry()) names += (names.empty() ? "" : ", ") + e.name;
  throw ParameterError("unknown experiment '" + name + "'; valid names: " + names);
}

std::filesystem::path default_out_dir(const ExperimentConfig& config) {
  if (!config.out.empty()) return config.out;
  return std::filesystem::path("attnlab-out") / config.experiment;
}

RunOutcome run_experiment(ExperimentConfig config, const std::filesystem::path& out_dir) {
  const ExperimentInfo& info = find_experiment(config.experiment);
  std::filesystem::create_directories(out_dir);
  RunOutcome outcome;
  outcome.out_dir = out_dir;
  json report;
  report["kind"] = "attnlab-report";
  report["experiment"] = config.experiment;
  const auto start = std::chrono::steady_clock::now();
  try {
    ExperimentResult result = info.run(config);
    bool pass = true;
    json checks = json::array();
    for (const Check& ch : result.checks) {
      pass = pass && ch.pass;
      checks.push_back(check_to_json(ch));
    }
    report["pass"] = pass;
    for (const auto& [key, value] : result.metrics.items()) report[key] = value;
    report["checks"] = checks;
    report["seeds"] = result.seeds;
    json files = json::array({"data.csv"});
    result.data.save((out_dir / "data.csv").string());
    for (const auto& [name, text] : result.files) {
      write_text(out_dir / name, text);
      files.push_back(name);
    }
    report["files"] = files;
    outcome.pass = pass;
  } catch (const std::exception& e) {
    report["pass"] = false;
    report["error"] = e.what();
    outcome.pass = false;
  }
  report["config"] = to_json(config);
  report["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  outcome.report = std::move(report);
  return outcome;
}

void tune_allocator() {
#ifdef __GLIBC__
  mallopt(M_MMAP_THRESHOLD, 256 * 1024 * 1024);
  mallopt(M_TRIM_THRESHOLD, 256 * 1024 * 1024);
#endif
}

}  // namespace attnlab::lab

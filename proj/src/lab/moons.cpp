#include "attnlab/lab/moons.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "attnlab/core/error.hpp"

namespace attnlab::lab {

attention::Dataset generate_moon_set(Index n, double noise, RandomSource& rng) {
  if (n < 2) throw ParameterError("generate_moons: need at least 2 points, got " + std::to_string(n));
  if (!(noise >= 0)) throw ParameterError("generate_moons: noise must be nonnegative");
  const Index first = (n + 1) / 2;
  attention::Dataset out{Matrix(n, 2), std::vector<int>(static_cast<std::size_t>(n))};
  for (Index i = 0; i < n; ++i) {
    const double t = rng.uniform(0.0, std::numbers::pi);
    const bool upper = i < first;
    out.x(i, 0) = upper ? std::cos(t) : 1.0 - std::cos(t);
    out.x(i, 1) = upper ? std::sin(t) : 0.5 - std::sin(t);
    if (noise > 0) {
      out.x(i, 0) += rng.normal(0.0, noise);
      out.x(i, 1) += rng.normal(0.0, noise);
    }
    out.y[static_cast<std::size_t>(i)] = upper ? 0 : 1;
  }
  return out;
}

MoonData generate_moons(const MoonSpec& spec) {
  const RandomSource root(spec.seed);
  RandomSource train_rng = root.derive("moons/train");
  RandomSource test_rng = root.derive("moons/test");
  return {generate_moon_set(spec.n_train, spec.noise, train_rng),
          generate_moon_set(spec.n_test, spec.noise, test_rng)};
}

MoonRun train_moon_run(const MoonSpec& data, attention::IPNSpec model, const attention::TrainConfig& training) {
  const MoonData sets = generate_moons(data);
  RandomSource rng = RandomSource(data.seed).derive("model");
  MoonRun run;
  run.kind = model.kind;
  run.seed = data.seed;
  run.model = attention::make_ipn(model, rng);
  attention::TrainConfig cfg = training;
  cfg.seed = data.seed;
  run.history = attention::train_ipn(run.model, sets.train, sets.test, cfg);
  run.test_accuracy = run.history.rows.back().test_acc;
  run.train_loss = run.history.rows.back().train_loss;
  return run;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DegenerateInputError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace attnlab::lab

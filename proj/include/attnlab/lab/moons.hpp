#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "attnlab/attention/ipn.hpp"
#include "attnlab/attention/trainer.hpp"

namespace attnlab::lab {

struct MoonSpec {
  Index n_train = 400;
  Index n_test = 100;
  double noise = 0.2;
  std::uint64_t seed = 0;
};

struct MoonData {
  attention::Dataset train;
  attention::Dataset test;
};

/// Two interleaved half circles: class 0 at (cos t, sin t), class 1 at
/// (1 - cos t, 0.5 - sin t), t ~ U[0, pi], plus isotropic N(0, noise^2).
/// The first ceil(n/2) points are class 0. Train and test use independent
/// streams derived from the seed.
MoonData generate_moons(const MoonSpec& spec);

attention::Dataset generate_moon_set(Index n, double noise, RandomSource& rng);

/// One IPN trained on the Moon set of `seed`; the model is initialised from
/// RandomSource(seed).derive("model").
struct MoonRun {
  attention::AttentionKind kind = attention::AttentionKind::kMetric;
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;  ///< after the final epoch
  double train_loss = 0.0;     ///< at the final epoch, before its update
  attention::TrainHistory history;
  attention::IPNModel model;
};

MoonRun train_moon_run(const MoonSpec& data, attention::IPNSpec model, const attention::TrainConfig& training);

double median(std::vector<double> values);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> values);

}  // namespace attnlab::lab

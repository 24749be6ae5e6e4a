#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "attnlab/core/types.hpp"

namespace attnlab {

std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++ seeded through splitmix64, with Box–Muller normals.
///
/// Independent streams are obtained with derive(label): the child seed is a
/// function of (seed, label) only, so adding a new component never shifts the
/// numbers another component sees.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  RandomSource derive(std::string_view label) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  double normal(double mean, double stddev);
  Matrix normal_matrix(Index rows, Index cols, double stddev);

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  std::optional<double> spare_normal_;
};

}  // namespace attnlab

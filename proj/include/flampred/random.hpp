// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace flampred {

// Stream tags used when deriving child seeds. Values are part of the
// reproducibility contract; never renumber them.
enum class Stream : std::uint64_t {
  kTree = 1,
  kSynthTrain = 2,
  kSynthTest = 3,
  kCvShuffle = 4,
  kRepeat = 5,
  kSweepPoint = 6,
  kClassifier = 7,
  kCopula = 8,
  kTarget = 9,
};

// One SplitMix64 step: the generator's output when its state is x.
std::uint64_t mix64(std::uint64_t x) noexcept;

// derive_seed(seed, stream, index) = mix64(mix64(seed ^ mix64(stream)) + index).
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0) noexcept;

// Seedable generator with distributions defined here rather than by the
// standard library, whose distribution algorithms are implementation-defined.
// The engine is std::mt19937_64, which the standard specifies exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1): ((bits >> 11) + 0.5) * 2^-53.
  double uniform01();

  // Uniform integer in [0, n) by rejection sampling; n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Standard normal via inverse CDF of uniform01().
  double standard_normal();

 private:
  std::mt19937_64 engine_;
};

// Standard normal CDF and its inverse (Wichura AS241, ~1e-16 relative).
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace flampred

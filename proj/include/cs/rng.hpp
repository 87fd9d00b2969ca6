// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace cs {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Folds a list of identifiers into a seed: derive_seed(s, {a, b}) is a
/// distinct, well-mixed key for every (s, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

/// Counter-based generator: the i-th output is mix64(key + i * golden).
/// Streams are addressed by key, so results never depend on which thread
/// or in which order trials run. Distributions are implemented here rather
/// than through <random> so draws are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(mix64(key)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, bound), bound > 0, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  bool coin() { return ((*this)() >> 63) != 0; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cs

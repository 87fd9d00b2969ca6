// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cs/linear_operator.hpp"
#include "cs/sampling.hpp"

namespace cs {

/// Coherence under the U*U = nI normalization: mu(U) = max |U_kj|, a value in
/// [1, sqrt(n)]. (For an orthonormal U the same quantity reads
/// sqrt(n) * max |U_kj|.)
struct CoherenceResult {
  double mu = 0.0;
  bool exact = true;            // false when only a column subsample was swept
  std::size_t columns_swept = 0;
};

inline constexpr std::size_t kExactCoherenceLimit = 4096;

/// Sweeps every column for n <= kExactCoherenceLimit; above that, or when
/// `max_columns` is smaller than n, sweeps a seeded column subsample and
/// reports a lower bound with exact = false.
CoherenceResult coherence(const LinearOperator& U, std::optional<std::size_t> max_columns = std::nullopt,
                          std::uint64_t seed = 0);

/// Extreme eigenvalues of (1/m) U_{Omega T}^* U_{Omega T}.
struct SpectralReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double deviation = 0.0;  // || (1/m) G - I ||
  std::size_t m = 0;
  std::size_t s = 0;
};

/// Columns U e_t for t in T, each of length U.rows().
std::vector<CVec> support_columns(const LinearOperator& U, const std::vector<std::size_t>& support);

/// Dense Hermitian eigensolve of the s x s Gram. An empty Omega yields the
/// zero matrix, reported as lambda = 0 and deviation = 1.
SpectralReport gram_spectrum(const LinearOperator& U, const SampleSet& omega,
                             const std::vector<std::size_t>& support);
SpectralReport gram_spectrum_from_columns(const std::vector<CVec>& columns,
                                          const std::vector<std::size_t>& rows);

struct UncertaintyCheck {
  double energy_ratio = 0.0;  // ||U_Omega x||^2 / ||x||^2
  bool bounds_hold = false;   // m/2 <= energy_ratio <= 3m/2
};

UncertaintyCheck uncertainty_check(std::span<const double> x, const LinearOperator& U, const SampleSet& omega);

/// Monte-Carlo frequency of { deviation >= 1/2 } over `trials` draws of Omega.
struct DeviationTail {
  double frequency = 0.0;
  std::size_t exceed = 0;
  std::size_t trials = 0;
  double mean_deviation = 0.0;
  double max_deviation = 0.0;
};

DeviationTail deviation_tail(const LinearOperator& U, const std::vector<std::size_t>& support, std::size_t m,
                             std::size_t trials, std::uint64_t seed,
                             SamplingModel model = SamplingModel::BernoulliMOverN, unsigned workers = 1);

}  // namespace cs

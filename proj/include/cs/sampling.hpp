// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cs/linear_operator.hpp"

namespace cs {

enum class SamplingModel { UniformM, BernoulliMOverN };

std::string to_string(SamplingModel model);
SamplingModel sampling_model_from_string(const std::string& s);

/// A measurement set Omega: sorted distinct 0-based row indices.
struct SampleSet {
  std::size_t n = 0;  // size of the row domain
  std::vector<std::size_t> indices;
  SamplingModel model = SamplingModel::UniformM;
  std::uint64_t seed = 0;

  std::size_t size() const { return indices.size(); }
};

/// Support T (sorted, 0-based) with a +-1 sign on each entry.
struct SparseModel {
  std::size_t n = 0;
  std::vector<std::size_t> support;
  std::vector<int> signs;

  std::size_t sparsity() const { return support.size(); }
  /// The signal equal to the signs on T and zero elsewhere.
  RVec signal() const;
};

/// Omega uniform over all size-m subsets of {0..n-1} by partial Fisher-Yates.
/// With a fixed seed the draws are nested: the set for m is contained in the
/// set for any m' > m.
SampleSet sample_uniform(std::size_t n, std::size_t m, std::uint64_t seed);

/// Each index independently with probability m/n; may be empty.
SampleSet sample_bernoulli(std::size_t n, std::size_t m, std::uint64_t seed);

SampleSet sample(SamplingModel model, std::size_t n, std::size_t m, std::uint64_t seed);

/// The first m entries of a seeded uniform permutation of {0..n-1}, unsorted.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t m, std::uint64_t seed);

/// Uniform support of size S and independent fair signs. S = 0 gives the
/// empty model.
SparseModel random_model(std::size_t n, std::size_t S, std::uint64_t seed);

/// Like random_model but the listed coordinates are always in the support;
/// the remaining S - |forced| entries are uniform over the rest.
SparseModel random_model_with(std::size_t n, std::size_t S, const std::vector<std::size_t>& forced,
                              std::uint64_t seed);

/// U_Omega: rows of A indexed by Omega. Adjoint zero-pads. No scaling.
LinearOperator restrict_rows(const LinearOperator& A, const SampleSet& omega);
LinearOperator restrict_rows(const LinearOperator& A, const std::vector<std::size_t>& rows);

}  // namespace cs

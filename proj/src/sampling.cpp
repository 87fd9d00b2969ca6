// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/sampling.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cs/rng.hpp"

namespace cs {

std::string to_string(SamplingModel model) {
  return model == SamplingModel::UniformM ? "uniform_m" : "bernoulli_m_over_n";
}

SamplingModel sampling_model_from_string(const std::string& s) {
  if (s == "uniform_m" || s == "uniform") return SamplingModel::UniformM;
  if (s == "bernoulli_m_over_n" || s == "bernoulli") return SamplingModel::BernoulliMOverN;
  throw std::invalid_argument("unknown sampling model '" + s + "'");
}

RVec SparseModel::signal() const {
  RVec x(n, 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) x[support[i]] = signs[i];
  return x;
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m > n) throw std::invalid_argument("random_subset: m > n");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CounterRng rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(m);
  return perm;
}

SampleSet sample_uniform(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m == 0 || m > n)
    throw std::invalid_argument("sample_uniform: need 0 < m <= n (m=" + std::to_string(m) +
                                ", n=" + std::to_string(n) + ")");
  auto idx = random_subset(n, m, seed);
  std::sort(idx.begin(), idx.end());
  return SampleSet{n, std::move(idx), SamplingModel::UniformM, seed};
}

SampleSet sample_bernoulli(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m == 0 || m > n)
    throw std::invalid_argument("sample_bernoulli: need 0 < m <= n (m=" + std::to_string(m) +
                                ", n=" + std::to_string(n) + ")");
  const double p = static_cast<double>(m) / static_cast<double>(n);
  CounterRng rng(seed);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; ++k)
    if (rng.uniform() < p) idx.push_back(k);
  return SampleSet{n, std::move(idx), SamplingModel::BernoulliMOverN, seed};
}

SampleSet sample(SamplingModel model, std::size_t n, std::size_t m, std::uint64_t seed) {
  return model == SamplingModel::UniformM ? sample_uniform(n, m, seed) : sample_bernoulli(n, m, seed);
}

SparseModel random_model(std::size_t n, std::size_t S, std::uint64_t seed) {
  return random_model_with(n, S, {}, seed);
}

SparseModel random_model_with(std::size_t n, std::size_t S, const std::vector<std::size_t>& forced,
                              std::uint64_t seed) {
  if (S > n) throw std::invalid_argument("random_model: S > n");
  if (forced.size() > S) throw std::invalid_argument("random_model: more forced entries than S");
  std::vector<bool> taken(n, false);
  for (std::size_t t : forced) {
    if (t >= n) throw std::out_of_range("random_model: forced index out of range");
    if (taken[t]) throw std::invalid_argument("random_model: duplicate forced index");
    taken[t] = true;
  }
  std::vector<std::size_t> free;
  free.reserve(n - forced.size());
  for (std::size_t t = 0; t < n; ++t)
    if (!taken[t]) free.push_back(t);

  SparseModel model;
  model.n = n;
  model.support = forced;
  for (std::size_t k : random_subset(free.size(), S - forced.size(), derive_seed(seed, {0})))
    model.support.push_back(free[k]);
  std::sort(model.support.begin(), model.support.end());

  CounterRng signs(derive_seed(seed, {1}));
  model.signs.reserve(S);
  for (std::size_t i = 0; i < S; ++i) model.signs.push_back(signs.coin() ? 1 : -1);
  return model;
}

LinearOperator restrict_rows(const LinearOperator& A, const std::vector<std::size_t>& rows) {
  for (std::size_t r : rows)
    if (r >= A.rows()) throw std::out_of_range("restrict: row index " + std::to_string(r) + " out of range");
  const std::size_t full = A.rows();
  auto sel = std::make_shared<const std::vector<std::size_t>>(rows);

  auto fwd = [f = A.forward_fn(), sel, full](std::span<const cplx> x, std::span<cplx> y) {
    CVec all(full);
    f(x, all);
    for (std::size_t i = 0; i < sel->size(); ++i) y[i] = all[(*sel)[i]];
  };
  auto adj = [a = A.adjoint_fn(), sel, full](std::span<const cplx> y, std::span<cplx> x) {
    CVec padded(full);
    for (std::size_t i = 0; i < sel->size(); ++i) padded[(*sel)[i]] += y[i];
    a(padded, x);
  };

  LinearOperator::Partner partner;
  if (A.has_conjugate_pairs()) {
    std::vector<std::optional<std::size_t>> local(rows.size());
    std::vector<std::ptrdiff_t> position(full, -1);
    for (std::size_t i = 0; i < rows.size(); ++i) position[rows[i]] = static_cast<std::ptrdiff_t>(i);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto p = A.conjugate_partner(rows[i]);
      if (p && position[*p] >= 0) local[i] = static_cast<std::size_t>(position[*p]);
    }
    partner = [local = std::make_shared<const std::vector<std::optional<std::size_t>>>(std::move(local))](
                  std::size_t r) { return (*local)[r]; };
  }
  return LinearOperator(rows.size(), A.cols(), A.field(), std::nullopt, fwd, adj, partner,
                        A.name() + "[rows]");
}

LinearOperator restrict_rows(const LinearOperator& A, const SampleSet& omega) {
  if (omega.n != A.rows())
    throw std::invalid_argument("restrict: sample set domain (" + std::to_string(omega.n) +
                                ") does not match operator rows (" + std::to_string(A.rows()) + ")");
  return restrict_rows(A, omega.indices);
}

}  // namespace cs

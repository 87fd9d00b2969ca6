// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cs/parallel.hpp"
#include "cs/rng.hpp"

namespace cs {

CoherenceResult coherence(const LinearOperator& U, std::optional<std::size_t> max_columns, std::uint64_t seed) {
  const std::size_t n = U.cols();
  const std::size_t budget =
      max_columns ? std::min(n, *max_columns) : (n <= kExactCoherenceLimit ? n : kExactCoherenceLimit);

  std::vector<std::size_t> cols;
  if (budget >= n) {
    cols.resize(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;
  } else {
    cols = random_subset(n, budget, seed);
  }

  CoherenceResult out;
  out.exact = cols.size() == n;
  out.columns_swept = cols.size();
  CVec e(n), col(U.rows());
  for (std::size_t j : cols) {
    e[j] = 1.0;
    U.forward(e, col);
    e[j] = 0.0;
    for (const cplx& v : col) out.mu = std::max(out.mu, std::abs(v));
  }
  return out;
}

std::vector<CVec> support_columns(const LinearOperator& U, const std::vector<std::size_t>& support) {
  std::vector<CVec> cols;
  cols.reserve(support.size());
  CVec e(U.cols());
  for (std::size_t t : support) {
    if (t >= U.cols()) throw std::out_of_range("support index out of range");
    e[t] = 1.0;
    cols.push_back(U.forward(e));
    e[t] = 0.0;
  }
  return cols;
}

SpectralReport gram_spectrum_from_columns(const std::vector<CVec>& columns, const std::vector<std::size_t>& rows) {
  const std::size_t s = columns.size();
  if (s == 0) throw std::invalid_argument("gram_spectrum: empty support");
  SpectralReport rep;
  rep.s = s;
  rep.m = rows.size();
  if (rows.empty()) {
    rep.lambda_min = rep.lambda_max = 0.0;
    rep.deviation = 1.0;
    return rep;
  }
  Eigen::MatrixXcd block(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(s));
  for (std::size_t c = 0; c < s; ++c)
    for (std::size_t r = 0; r < rows.size(); ++r)
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][rows[r]];
  const Eigen::MatrixXcd gram = (block.adjoint() * block) / static_cast<double>(rows.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  rep.lambda_min = std::max(0.0, ev.minCoeff());
  rep.lambda_max = ev.maxCoeff();
  rep.deviation = std::max(std::abs(rep.lambda_max - 1.0), std::abs(rep.lambda_min - 1.0));
  return rep;
}

SpectralReport gram_spectrum(const LinearOperator& U, const SampleSet& omega,
                             const std::vector<std::size_t>& support) {
  if (support.empty()) throw std::invalid_argument("gram_spectrum: empty support");
  if (omega.n != U.rows()) throw std::invalid_argument("gram_spectrum: sample set does not match operator");
  return gram_spectrum_from_columns(support_columns(U, support), omega.indices);
}

UncertaintyCheck uncertainty_check(std::span<const double> x, const LinearOperator& U, const SampleSet& omega) {
  double xx = 0.0;
  for (double v : x) xx += v * v;
  if (xx == 0.0) throw std::invalid_argument("uncertainty_check: x must be nonzero");
  const CVec y = U.forward(to_complex(x));
  double yy = 0.0;
  for (std::size_t k : omega.indices) yy += std::norm(y.at(k));
  UncertaintyCheck out;
  out.energy_ratio = yy / xx;
  const double m = static_cast<double>(omega.size());
  out.bounds_hold = out.energy_ratio >= 0.5 * m && out.energy_ratio <= 1.5 * m;
  return out;
}

DeviationTail deviation_tail(const LinearOperator& U, const std::vector<std::size_t>& support, std::size_t m,
                             std::size_t trials, std::uint64_t seed, SamplingModel model, unsigned workers) {
  if (trials == 0) throw std::invalid_argument("deviation_tail: trials must be >= 1");
  const auto columns = support_columns(U, support);
  std::vector<double> dev(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const auto omega = sample(model, U.rows(), m, derive_seed(seed, {t}));
    dev[t] = gram_spectrum_from_columns(columns, omega.indices).deviation;
  });
  DeviationTail out;
  out.trials = trials;
  for (double d : dev) {
    if (d >= 0.5) ++out.exceed;
    out.mean_deviation += d;
    out.max_deviation = std::max(out.max_deviation, d);
  }
  out.mean_deviation /= static_cast<double>(trials);
  out.frequency = static_cast<double>(out.exceed) / static_cast<double>(trials);
  return out;
}

}  // namespace cs

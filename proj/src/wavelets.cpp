// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "cs/transforms.hpp"

namespace cs {

namespace {

// Daubechies orthonormal lowpass, 8 taps / 4 vanishing moments (minimum
// phase), normalized to sum sqrt(2). Digits from spectral factorization in
// extended precision.
constexpr double kDaub8[8] = {
    0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
    -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
    0.032883011666885199735, -0.010597401785069032105,
};

WaveletFilter make_filter(std::vector<double> h) {
  const std::size_t L = h.size();
  std::vector<double> g(L);
  for (std::size_t l = 0; l < L; ++l) g[l] = ((l % 2) ? -1.0 : 1.0) * h[L - 1 - l];
  return {std::move(h), std::move(g)};
}

// One periodized analysis stage on a[0..M): approx -> out[0..M/2), detail -> out[M/2..M).
void analysis_step(const WaveletFilter& f, std::span<const cplx> a, std::span<cplx> out) {
  const std::size_t M = a.size();
  const std::size_t half = M / 2;
  const std::size_t L = f.lowpass.size();
  for (std::size_t k = 0; k < half; ++k) {
    cplx lo = 0.0, hi = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      const cplx v = a[(2 * k + l) % M];
      lo += f.lowpass[l] * v;
      hi += f.highpass[l] * v;
    }
    out[k] = lo;
    out[half + k] = hi;
  }
}

// Adjoint (= inverse) of analysis_step.
void synthesis_step(const WaveletFilter& f, std::span<const cplx> in, std::span<cplx> a) {
  const std::size_t M = a.size();
  const std::size_t half = M / 2;
  const std::size_t L = f.lowpass.size();
  std::fill(a.begin(), a.end(), cplx{0.0});
  for (std::size_t k = 0; k < half; ++k) {
    const cplx lo = in[k];
    const cplx hi = in[half + k];
    for (std::size_t l = 0; l < L; ++l) a[(2 * k + l) % M] += f.lowpass[l] * lo + f.highpass[l] * hi;
  }
}

}  // namespace

WaveletFilter wavelet_filter(Wavelet w) {
  switch (w) {
    case Wavelet::Haar:
      return make_filter({M_SQRT1_2, M_SQRT1_2});
    case Wavelet::Daubechies8:
      return make_filter(std::vector<double>(std::begin(kDaub8), std::end(kDaub8)));
  }
  throw std::invalid_argument("wavelet_filter: unknown wavelet");
}

LinearOperator wavelet_transform(std::size_t n, Wavelet w, unsigned levels) {
  const unsigned q = log2_exact(n);
  if (levels > q) throw std::invalid_argument("wavelet_transform: too many levels for n");
  auto filter = std::make_shared<const WaveletFilter>(wavelet_filter(w));

  auto fwd = [filter, n, levels](std::span<const cplx> x, std::span<cplx> y) {
    CVec work(x.begin(), x.end());
    CVec tmp(n);
    std::size_t M = n;
    for (unsigned s = 0; s < levels; ++s, M /= 2) {
      analysis_step(*filter, std::span<const cplx>(work.data(), M), std::span<cplx>(tmp.data(), M));
      std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(M), work.begin());
    }
    std::copy(work.begin(), work.end(), y.begin());
  };
  auto adj = [filter, n, levels](std::span<const cplx> y, std::span<cplx> x) {
    CVec work(y.begin(), y.end());
    CVec tmp(n);
    std::size_t M = n >> levels;
    for (unsigned s = 0; s < levels; ++s) {
      M *= 2;
      synthesis_step(*filter, std::span<const cplx>(work.data(), M), std::span<cplx>(tmp.data(), M));
      std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(M), work.begin());
    }
    std::copy(work.begin(), work.end(), x.begin());
  };
  const std::string name = (w == Wavelet::Haar ? "haar(" : "daub8(") + std::to_string(n) + ")";
  auto self = [](std::size_t r) -> std::optional<std::size_t> { return r; };
  return LinearOperator(n, n, Field::Real, 1.0, fwd, adj, self, name);
}

LinearOperator haar(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("haar: n must be a power of 2");
  return wavelet_transform(n, Wavelet::Haar, log2_exact(n));
}

LinearOperator daub8(std::size_t n, std::optional<unsigned> levels) {
  if (!is_power_of_two(n) || n < 16) throw std::invalid_argument("daub8: n must be a power of 2 and >= 16");
  const unsigned q = log2_exact(n);
  return wavelet_transform(n, Wavelet::Daubechies8, levels.value_or(q - 3));
}

DetailBlock detail_block(std::size_t n, unsigned j) {
  const unsigned q = log2_exact(n);
  if (j < 1 || j > q) throw std::invalid_argument("detail_block: scale out of range");
  return {n >> j, n >> j};
}

RVec scale_wavelet(std::size_t n, unsigned j, Wavelet w, std::size_t shift_index) {
  const auto block = detail_block(n, j);
  if (shift_index >= block.length) throw std::out_of_range("scale_wavelet: shift index out of range");
  const auto op = wavelet_transform(n, w, j);
  CVec coeffs(n);
  coeffs[block.offset + shift_index] = 1.0;
  const CVec psi = op.adjoint(coeffs);
  RVec out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = psi[t].real();
  return out;
}

}  // namespace cs

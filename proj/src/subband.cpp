// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cs/transforms.hpp"

namespace cs {

namespace {

std::size_t wrap(long omega, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((omega % m) + m) % m);
}

void check_scale(std::size_t n, unsigned j) {
  if (!is_power_of_two(n)) throw std::invalid_argument("subband: n must be a power of 2");
  if (j < 1 || (std::size_t{1} << j) > n / 16)
    throw std::invalid_argument("subband: need 1 <= j and 2^j <= n/16 (n=" + std::to_string(n) +
                                ", j=" + std::to_string(j) + ")");
}

CVec wavelet_fourier(std::size_t n, unsigned j, Wavelet w) {
  return dft(n).forward(to_complex(scale_wavelet(n, j, w)));
}

}  // namespace

std::vector<long> subband_frequencies(std::size_t n, unsigned j) {
  check_scale(n, j);
  const long nj = static_cast<long>(n >> j);
  std::vector<long> band;
  band.reserve(static_cast<std::size_t>(nj));
  for (long w = -nj + 1; w <= -nj / 2; ++w) band.push_back(w);
  for (long w = nj / 2 + 1; w <= nj; ++w) band.push_back(w);
  return band;
}

SubbandSystem subband_system(std::size_t n, unsigned j, Wavelet w) {
  check_scale(n, j);
  const std::size_t nj = n >> j;
  auto band = subband_frequencies(n, j);
  const CVec spectrum = wavelet_fourier(n, j, w);

  CVec diag(nj);
  auto index = std::make_shared<std::vector<std::size_t>>(nj);
  for (std::size_t i = 0; i < nj; ++i) {
    (*index)[i] = wrap(band[i], n);
    diag[i] = spectrum[(*index)[i]];
    if (std::abs(diag[i]) < 1e-12)
      throw std::domain_error("subband_system: wavelet spectrum vanishes at omega=" + std::to_string(band[i]));
  }
  auto weights = std::make_shared<const CVec>(diag);
  auto fourier = dft(n);
  auto wavelets = wavelet_transform(n, w, j);
  const auto block = detail_block(n, j);

  auto fwd = [fourier, wavelets, block, index, weights, n](std::span<const cplx> coeffs, std::span<cplx> y) {
    CVec full(n);
    std::copy(coeffs.begin(), coeffs.end(), full.begin() + static_cast<std::ptrdiff_t>(block.offset));
    const CVec x = wavelets.adjoint(full);
    const CVec X = fourier.forward(x);
    for (std::size_t i = 0; i < index->size(); ++i) y[i] = X[(*index)[i]] / (*weights)[i];
  };
  auto adj = [fourier, wavelets, block, index, weights, n](std::span<const cplx> z, std::span<cplx> coeffs) {
    CVec X(n);
    for (std::size_t i = 0; i < index->size(); ++i) X[(*index)[i]] = z[i] / std::conj((*weights)[i]);
    const CVec x = fourier.adjoint(X);
    const CVec full = wavelets.forward(x);
    std::copy_n(full.begin() + static_cast<std::ptrdiff_t>(block.offset), block.length, coeffs.begin());
  };

  // The assembled system depends on omega only through omega mod n_j, so
  // rows pair up by residue.
  std::vector<std::size_t> by_residue(nj);
  for (std::size_t i = 0; i < nj; ++i) by_residue[wrap(band[i], nj)] = i;
  std::vector<std::size_t> pairs(nj);
  for (std::size_t i = 0; i < nj; ++i) pairs[i] = by_residue[(nj - wrap(band[i], nj)) % nj];
  auto partner = [pairs = std::make_shared<const std::vector<std::size_t>>(std::move(pairs))](
                     std::size_t r) -> std::optional<std::size_t> { return (*pairs)[r]; };

  LinearOperator op(nj, nj, Field::Complex, static_cast<double>(nj), fwd, adj, partner,
                    "subband(" + std::to_string(n) + ",j=" + std::to_string(j) + ")");
  return SubbandSystem{n, j, nj, std::move(band), std::move(diag), std::move(op)};
}

RVec wavelet_spectrum(std::size_t n, unsigned j, Wavelet w) {
  check_scale(n, j);
  const CVec spectrum = wavelet_fourier(n, j, w);
  RVec out;
  out.reserve(n);
  const long half = static_cast<long>(n / 2);
  for (long omega = -half + 1; omega <= half; ++omega) out.push_back(std::abs(spectrum[wrap(omega, n)]));
  return out;
}

double band_flatness(std::size_t n, unsigned j, Wavelet w) {
  const CVec spectrum = wavelet_fourier(n, j, w);
  double lo = INFINITY, hi = 0.0;
  for (long omega : subband_frequencies(n, j)) {
    const double m = std::abs(spectrum[wrap(omega, n)]);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi / lo;
}

}  // namespace cs

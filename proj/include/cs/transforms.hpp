// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cs/linear_operator.hpp"

namespace cs {

bool is_power_of_two(std::size_t n);
unsigned log2_exact(std::size_t n);

/// Unnormalized DFT, y_k = sum_t x_t exp(-2 pi i t k / n), k = 0..n-1.
/// A*A = n I. Rows k and n-k are conjugate partners.
LinearOperator dft(std::size_t n);

enum class Wavelet { Haar, Daubechies8 };

/// Orthonormal periodized wavelet analysis filters.
struct WaveletFilter {
  std::vector<double> lowpass;
  std::vector<double> highpass;  // g[l] = (-1)^l h[L-1-l]
};

WaveletFilter wavelet_filter(Wavelet w);

/// Orthonormal periodized Haar analysis transform with full decomposition.
/// Coefficients use the Mallat layout [a_J | d_J | ... | d_1]: the scaling
/// coefficient first, the finest details (scale 1) in the upper half.
LinearOperator haar(std::size_t n);

/// Orthonormal periodized Daubechies 8-tap analysis transform. The
/// decomposition stops when the approximation has 8 coefficients unless
/// `levels` is given. Requires n >= 16.
LinearOperator daub8(std::size_t n, std::optional<unsigned> levels = std::nullopt);

/// Generic periodized analysis transform with `levels` decomposition stages.
LinearOperator wavelet_transform(std::size_t n, Wavelet w, unsigned levels);

/// Offset and length of the scale-j detail block in the Mallat layout.
struct DetailBlock {
  std::size_t offset;
  std::size_t length;
};
DetailBlock detail_block(std::size_t n, unsigned j);

/// Complex noiselet system, Phi*Phi = n I, applied by an O(n log n) butterfly.
/// Each entry has real and imaginary parts equal to +-1/sqrt(2).
/// Rows r and n-1-r are conjugate partners (up to a unit phase).
LinearOperator noiselet(std::size_t n);

/// U = Phi Psi where Phi is a measurement system with Phi*Phi = n I and Psi is
/// the synthesis side of an orthonormal sparsity transform. `sparsity` is the
/// analysis transform as returned by haar()/daub8(); its adjoint is applied.
LinearOperator compose(const LinearOperator& measurement, const LinearOperator& sparsity);

/// Fourier sampling of a single wavelet subband.
///
/// The band holds the n_j = n 2^-j frequencies
///   {n_j/2+1, ..., n_j} U {-n_j+1, ..., -n_j/2}
/// over which scale-j wavelets are nearly flat. `op` maps the n_j scale-j
/// wavelet coefficients w to (D_j^-1 F_j Psi_j w), one entry per band frequency
/// in the order of `band`; it is an n_j-point Fourier system with unit-modulus
/// entries and U*U = n_j I.
struct SubbandSystem {
  std::size_t n = 0;
  unsigned scale = 0;
  std::size_t n_j = 0;
  std::vector<long> band;      // two-sided frequencies
  CVec diag;                   // psi_hat_{j,1}(omega) on the band
  LinearOperator op;
};

SubbandSystem subband_system(std::size_t n, unsigned j, Wavelet w = Wavelet::Daubechies8);

/// The two-sided band B_j as frequencies.
std::vector<long> subband_frequencies(std::size_t n, unsigned j);

/// First wavelet psi_{j,1} at scale j, synthesized from a unit detail coefficient.
RVec scale_wavelet(std::size_t n, unsigned j, Wavelet w, std::size_t shift_index = 0);

/// |psi_hat_{j,1}(omega)| for omega = -n/2+1, ..., n/2 (in that order).
RVec wavelet_spectrum(std::size_t n, unsigned j, Wavelet w = Wavelet::Daubechies8);

/// max/min of |psi_hat_{j,1}| over B_j.
double band_flatness(std::size_t n, unsigned j, Wavelet w = Wavelet::Daubechies8);

}  // namespace cs

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include <cmath>
#include <stdexcept>
#include <string>

#include "cs/transforms.hpp"

namespace cs {

namespace {

const cplx kMinus{1.0, -1.0};  // 1 - i
const cplx kPlus{1.0, 1.0};    // 1 + i

// Global factor making Phi*Phi = nI with every entry on the diagonals of the
// complex plane. (1 +- i)^q lands on the axes for even q, hence the phase.
cplx output_factor(unsigned q) {
  const double mag = std::pow(2.0, -0.5 * q);
  return (q % 2 == 0) ? mag * std::polar(1.0, M_PI / 4) : cplx{mag, 0.0};
}

}  // namespace

// Row r is the noiselet f_{n+r} sampled on t/n. The recursion
//   f_{2m}   = (1-i) f_m(2x) + (1+i) f_m(2x-1)
//   f_{2m+1} = (1+i) f_m(2x) + (1-i) f_m(2x-1)
// turns into a butterfly that merges the transforms of adjacent halves.
LinearOperator noiselet(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("noiselet: n must be a power of 2");
  const unsigned q = log2_exact(n);
  const cplx factor = output_factor(q);

  auto fwd = [n, factor](std::span<const cplx> x, std::span<cplx> y) {
    CVec cur(x.begin(), x.end());
    CVec next(n);
    for (std::size_t len = 1; len < n; len *= 2) {
      for (std::size_t base = 0; base < n; base += 2 * len) {
        const cplx* a = cur.data() + base;
        const cplx* b = a + len;
        cplx* out = next.data() + base;
        for (std::size_t r = 0; r < len; ++r) {
          out[2 * r] = kMinus * a[r] + kPlus * b[r];
          out[2 * r + 1] = kPlus * a[r] + kMinus * b[r];
        }
      }
      cur.swap(next);
    }
    for (std::size_t k = 0; k < n; ++k) y[k] = factor * cur[k];
  };

  auto adj = [n, factor](std::span<const cplx> y, std::span<cplx> x) {
    CVec cur(n);
    const cplx cf = std::conj(factor);
    for (std::size_t k = 0; k < n; ++k) cur[k] = cf * y[k];
    CVec next(n);
    for (std::size_t len = n / 2; len >= 1; len /= 2) {
      for (std::size_t base = 0; base < n; base += 2 * len) {
        const cplx* in = cur.data() + base;
        cplx* a = next.data() + base;
        cplx* b = a + len;
        for (std::size_t r = 0; r < len; ++r) {
          a[r] = kPlus * in[2 * r] + kMinus * in[2 * r + 1];
          b[r] = kMinus * in[2 * r] + kPlus * in[2 * r + 1];
        }
      }
      cur.swap(next);
    }
    std::copy(cur.begin(), cur.end(), x.begin());
  };

  auto partner = [n](std::size_t r) -> std::optional<std::size_t> { return n - 1 - r; };
  return LinearOperator(n, n, Field::Complex, static_cast<double>(n), fwd, adj, partner,
                        "noiselet(" + std::to_string(n) + ")");
}

}  // namespace cs

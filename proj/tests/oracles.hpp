// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors
//
// Dense reference implementations used only by tests. They are written from
// the defining formulas, not from the fast paths they check.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "cs/linear_operator.hpp"
#include "cs/rng.hpp"
#include "cs/solver.hpp"

namespace oracle {

using cs::cplx;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline MatrixXcd materialize(const cs::LinearOperator& op) {
  MatrixXcd M(static_cast<Eigen::Index>(op.rows()), static_cast<Eigen::Index>(op.cols()));
  cs::CVec e(op.cols());
  for (std::size_t c = 0; c < op.cols(); ++c) {
    e[c] = 1.0;
    const cs::CVec col = op.forward(e);
    e[c] = 0.0;
    for (std::size_t r = 0; r < op.rows(); ++r) M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
  }
  return M;
}

inline MatrixXd materialize(const cs::RealMap& map) {
  MatrixXd M(static_cast<Eigen::Index>(map.rows), static_cast<Eigen::Index>(map.cols));
  cs::RVec e(map.cols, 0.0);
  for (std::size_t c = 0; c < map.cols; ++c) {
    e[c] = 1.0;
    const cs::RVec col = map.apply(e);
    e[c] = 0.0;
    for (std::size_t r = 0; r < map.rows; ++r) M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
  }
  return M;
}

inline VectorXcd to_eigen(const cs::CVec& v) {
  return Eigen::Map<const VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// y_k = sum_t x_t exp(-2 pi i t k / n)
inline MatrixXcd dft(std::size_t n) {
  MatrixXcd F(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t t = 0; t < n; ++t)
      F(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
          std::polar(1.0, -2.0 * M_PI * static_cast<double>((k * t) % n) / static_cast<double>(n));
  return F;
}

// Periodized pyramid: each level maps the current approximation a (length M)
// to [h-filtered, downsampled | g-filtered, downsampled].
inline MatrixXd wavelet_analysis(std::size_t n, const std::vector<double>& h, unsigned levels) {
  const std::size_t L = h.size();
  std::vector<double> g(L);
  for (std::size_t l = 0; l < L; ++l) g[l] = ((l % 2) ? -1.0 : 1.0) * h[L - 1 - l];
  MatrixXd W = MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t M = n;
  for (unsigned lev = 0; lev < levels; ++lev) {
    MatrixXd stage = MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    stage.topLeftCorner(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M)).setZero();
    for (std::size_t k = 0; k < M / 2; ++k)
      for (std::size_t l = 0; l < L; ++l) {
        stage(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>((2 * k + l) % M)) += h[l];
        stage(static_cast<Eigen::Index>(M / 2 + k), static_cast<Eigen::Index>((2 * k + l) % M)) += g[l];
      }
    W = stage * W;
    M /= 2;
  }
  return W;
}

// Noiselet f_m on [0,1): f_1 = 1,
//   f_{2m}(x)   = (1-i) f_m(2x) + (1+i) f_m(2x-1),
//   f_{2m+1}(x) = (1+i) f_m(2x) + (1-i) f_m(2x-1).
inline cplx noiselet_function(std::size_t m, double x) {
  if (m == 1) return 1.0;
  const bool left = x < 0.5;
  const double xs = left ? 2.0 * x : 2.0 * x - 1.0;
  const cplx minus{1.0, -1.0}, plus{1.0, 1.0};
  const cplx w = (m % 2 == 0) == left ? minus : plus;
  return w * noiselet_function(m / 2, xs);
}

// Row r is f_{n+r}(t/n), scaled to unit-modulus entries; for even log2(n) an
// extra e^{i pi/4} keeps every entry off the axes.
inline MatrixXcd noiselet(std::size_t n) {
  unsigned q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  cplx factor = std::pow(2.0, -0.5 * q);
  if (q % 2 == 0) factor *= std::polar(1.0, M_PI / 4);
  MatrixXcd P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t t = 0; t < n; ++t)
      P(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) =
          factor * noiselet_function(n + r, static_cast<double>(t) / static_cast<double>(n));
  return P;
}

// Stacked real rows (Re then Im per complex row) of a complex matrix acting
// on real vectors.
inline MatrixXd realify(const MatrixXcd& A) {
  MatrixXd R(2 * A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    R.row(2 * i) = A.row(i).real();
    R.row(2 * i + 1) = A.row(i).imag();
  }
  return R;
}

// min ||x||_1 s.t. A x = y by enumerating basic solutions: every vertex of
// the lifted LP is x_B = A_B^+ y on r = rank(A) linearly independent columns.
inline double l1_vertex_enumeration(const MatrixXd& A, const VectorXd& y) {
  const auto n = A.cols();
  Eigen::FullPivLU<MatrixXd> lu(A);
  const auto r = lu.rank();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - r, pick.end(), 1);
  do {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index c = 0; c < n; ++c)
      if (pick[static_cast<std::size_t>(c)]) cols.push_back(c);
    MatrixXd B(A.rows(), r);
    for (Eigen::Index k = 0; k < r; ++k) B.col(k) = A.col(cols[static_cast<std::size_t>(k)]);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(B);
    if (qr.rank() < r) continue;
    const VectorXd xb = qr.solve(y);
    if ((B * xb - y).norm() > 1e-9 * std::max(1.0, y.norm())) continue;
    best = std::min(best, xb.lpNorm<1>());
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

inline cs::CVec random_complex(std::size_t n, cs::CounterRng& rng) {
  cs::CVec v(n);
  for (auto& z : v) z = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  return v;
}

inline cs::RVec random_real(std::size_t n, cs::CounterRng& rng) {
  cs::RVec v(n);
  for (auto& z : v) z = 2.0 * rng.uniform() - 1.0;
  return v;
}

inline double norm(const cs::CVec& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline cplx inner(const cs::CVec& a, const cs::CVec& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

}  // namespace oracle

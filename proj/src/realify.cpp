// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "cs/solver.hpp"

namespace cs {

RVec RealMap::apply(std::span<const double> x) const {
  if (x.size() != cols) throw std::invalid_argument("RealMap::apply: dimension mismatch");
  RVec y(rows);
  forward(x, y);
  return y;
}

RVec RealMap::apply_adjoint(std::span<const double> y) const {
  if (y.size() != rows) throw std::invalid_argument("RealMap::apply_adjoint: dimension mismatch");
  RVec x(cols);
  adjoint(y, x);
  return x;
}

RealSystem realify(const LinearOperator& A) {
  RealSystem sys;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    bool real_only = A.field() == Field::Real;
    if (!real_only && A.has_conjugate_pairs()) {
      const auto p = A.conjugate_partner(i);
      if (p && *p == i) {
        real_only = true;
      } else if (p && *p < i) {
        continue;  // same information as the earlier partner row
      }
    }
    sys.source_row.push_back(i);
    sys.imaginary.push_back(false);
    if (!real_only) {
      sys.source_row.push_back(i);
      sys.imaginary.push_back(true);
    }
  }

  auto rows = std::make_shared<const std::vector<std::size_t>>(sys.source_row);
  auto imag = std::make_shared<const std::vector<bool>>(sys.imaginary);
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();

  sys.map.rows = rows->size();
  sys.map.cols = n;
  sys.map.forward = [f = A.forward_fn(), rows, imag, m](std::span<const double> x, std::span<double> y) {
    CVec xc(x.begin(), x.end());
    CVec yc(m);
    f(xc, yc);
    for (std::size_t c = 0; c < rows->size(); ++c) {
      const cplx v = yc[(*rows)[c]];
      y[c] = (*imag)[c] ? v.imag() : v.real();
    }
  };
  sys.map.adjoint = [a = A.adjoint_fn(), rows, imag, m, n](std::span<const double> r, std::span<double> x) {
    CVec z(m);
    for (std::size_t c = 0; c < rows->size(); ++c) z[(*rows)[c]] += (*imag)[c] ? cplx{0.0, r[c]} : cplx{r[c], 0.0};
    CVec xc(n);
    a(z, xc);
    for (std::size_t t = 0; t < n; ++t) x[t] = xc[t].real();
  };
  return sys;
}

RVec RealSystem::measurements(std::span<const cplx> y) const {
  RVec out(source_row.size());
  for (std::size_t c = 0; c < source_row.size(); ++c) {
    const cplx v = y[source_row[c]];
    out[c] = imaginary[c] ? v.imag() : v.real();
  }
  return out;
}

RealMap dense_map(std::size_t rows, std::size_t cols, std::vector<double> row_major) {
  if (row_major.size() != rows * cols) throw std::invalid_argument("dense_map: size mismatch");
  auto a = std::make_shared<const std::vector<double>>(std::move(row_major));
  RealMap map;
  map.rows = rows;
  map.cols = cols;
  map.forward = [a, rows, cols](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) acc += (*a)[i * cols + j] * x[j];
      y[i] = acc;
    }
  };
  map.adjoint = [a, rows, cols](std::span<const double> y, std::span<double> x) {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) x[j] += (*a)[i * cols + j] * y[i];
  };
  return map;
}

}  // namespace cs

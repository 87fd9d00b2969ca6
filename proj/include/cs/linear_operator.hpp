// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cs {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

enum class Field { Real, Complex };

/// An implicit linear map given by forward/adjoint procedures.
///
/// Operators are immutable value objects: copies share the underlying
/// procedures, and forward/adjoint are re-entrant, so one operator may be
/// applied from many threads at once.
///
/// When `scaling()` is set to c, the operator is a scaled isometry,
/// A*A = c I. Full measurement systems carry c = n and sparsity transforms
/// carry c = 1.
///
/// Some complex operators have rows that come in conjugate pairs: for real
/// inputs, row `conjugate_partner(k)` equals a unit-modulus multiple of
/// conj(row k), so the two measurements carry the same real information.
/// A self-partnered row is real up to a unit phase. The solver uses this to
/// drop redundant real constraints.
class LinearOperator {
 public:
  using Apply = std::function<void(std::span<const cplx> in, std::span<cplx> out)>;
  using Partner = std::function<std::optional<std::size_t>(std::size_t row)>;

  LinearOperator(std::size_t rows, std::size_t cols, Field field,
                 std::optional<double> scaling, Apply forward, Apply adjoint,
                 Partner partner = {}, std::string name = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Field field() const { return field_; }
  std::optional<double> scaling() const { return scaling_; }
  const std::string& name() const { return name_; }

  /// Throws std::invalid_argument on length mismatch.
  void forward(std::span<const cplx> x, std::span<cplx> y) const;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const;
  CVec forward(std::span<const cplx> x) const;
  CVec adjoint(std::span<const cplx> y) const;

  bool has_conjugate_pairs() const { return static_cast<bool>(partner_); }
  std::optional<std::size_t> conjugate_partner(std::size_t row) const;

  const Apply& forward_fn() const { return forward_; }
  const Apply& adjoint_fn() const { return adjoint_; }
  const Partner& partner_fn() const { return partner_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  Field field_;
  std::optional<double> scaling_;
  Apply forward_;
  Apply adjoint_;
  Partner partner_;
  std::string name_;
};

/// Swaps forward and adjoint.
LinearOperator adjoint_of(const LinearOperator& op);

/// `factor * op`; scaling becomes factor^2 times the old one.
LinearOperator scaled(const LinearOperator& op, double factor);

LinearOperator identity(std::size_t n);

/// Builds the operator x -> op(x) restricted to the given input coordinates:
/// forward embeds a short vector into the listed columns, adjoint extracts them.
LinearOperator select_columns(const LinearOperator& op, std::vector<std::size_t> columns);

/// Dense column-major realization, one forward call per impulse.
std::vector<CVec> materialize_columns(const LinearOperator& op);

CVec to_complex(std::span<const double> x);

}  // namespace cs

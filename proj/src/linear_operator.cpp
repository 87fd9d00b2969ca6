// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/linear_operator.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>

namespace cs {

LinearOperator::LinearOperator(std::size_t rows, std::size_t cols, Field field,
                               std::optional<double> scaling, Apply forward, Apply adjoint,
                               Partner partner, std::string name)
    : rows_(rows),
      cols_(cols),
      field_(field),
      scaling_(scaling),
      forward_(std::move(forward)),
      adjoint_(std::move(adjoint)),
      partner_(std::move(partner)),
      name_(std::move(name)) {
  if (!forward_ || !adjoint_) throw std::invalid_argument("LinearOperator: missing forward/adjoint");
  if (scaling_ && !(*scaling_ > 0.0)) throw std::invalid_argument("LinearOperator: scaling must be positive");
}

void LinearOperator::forward(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != cols_ || y.size() != rows_)
    throw std::invalid_argument("LinearOperator::forward: dimension mismatch in " + name_);
  forward_(x, y);
}

void LinearOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  if (y.size() != rows_ || x.size() != cols_)
    throw std::invalid_argument("LinearOperator::adjoint: dimension mismatch in " + name_);
  adjoint_(y, x);
}

CVec LinearOperator::forward(std::span<const cplx> x) const {
  CVec y(rows_);
  forward(x, y);
  return y;
}

CVec LinearOperator::adjoint(std::span<const cplx> y) const {
  CVec x(cols_);
  adjoint(y, x);
  return x;
}

std::optional<std::size_t> LinearOperator::conjugate_partner(std::size_t row) const {
  if (!partner_) return std::nullopt;
  return partner_(row);
}

LinearOperator adjoint_of(const LinearOperator& op) {
  // Row pairing describes the forward map only; it does not survive transposition.
  return LinearOperator(op.cols(), op.rows(), op.field(), op.scaling(), op.adjoint_fn(),
                        op.forward_fn(), {}, op.name() + "*");
}

LinearOperator scaled(const LinearOperator& op, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
  auto fwd = [f = op.forward_fn(), factor](std::span<const cplx> in, std::span<cplx> out) {
    f(in, out);
    for (auto& v : out) v *= factor;
  };
  auto adj = [a = op.adjoint_fn(), factor](std::span<const cplx> in, std::span<cplx> out) {
    a(in, out);
    for (auto& v : out) v *= factor;
  };
  std::optional<double> c;
  if (op.scaling()) c = *op.scaling() * factor * factor;
  return LinearOperator(op.rows(), op.cols(), op.field(), c, fwd, adj, op.partner_fn(),
                        op.name() + "*" + std::to_string(factor));
}

LinearOperator identity(std::size_t n) {
  auto copy = [](std::span<const cplx> in, std::span<cplx> out) {
    std::copy(in.begin(), in.end(), out.begin());
  };
  auto self = [](std::size_t r) -> std::optional<std::size_t> { return r; };
  return LinearOperator(n, n, Field::Real, 1.0, copy, copy, self, "identity");
}

LinearOperator select_columns(const LinearOperator& op, std::vector<std::size_t> columns) {
  for (std::size_t c : columns)
    if (c >= op.cols()) throw std::out_of_range("select_columns: column index out of range");
  const std::size_t n = op.cols();
  const std::size_t k = columns.size();
  auto cols = std::make_shared<const std::vector<std::size_t>>(std::move(columns));
  auto fwd = [f = op.forward_fn(), cols, n](std::span<const cplx> in, std::span<cplx> out) {
    CVec full(n);
    for (std::size_t i = 0; i < cols->size(); ++i) full[(*cols)[i]] = in[i];
    f(full, out);
  };
  auto adj = [a = op.adjoint_fn(), cols, n](std::span<const cplx> in, std::span<cplx> out) {
    CVec full(n);
    a(in, full);
    for (std::size_t i = 0; i < cols->size(); ++i) out[i] = full[(*cols)[i]];
  };
  return LinearOperator(op.rows(), k, op.field(), std::nullopt, fwd, adj, op.partner_fn(),
                        op.name() + "[cols]");
}

std::vector<CVec> materialize_columns(const LinearOperator& op) {
  std::vector<CVec> cols;
  cols.reserve(op.cols());
  CVec e(op.cols());
  for (std::size_t j = 0; j < op.cols(); ++j) {
    e[j] = 1.0;
    cols.push_back(op.forward(e));
    e[j] = 0.0;
  }
  return cols;
}

CVec to_complex(std::span<const double> x) { return CVec(x.begin(), x.end()); }

}  // namespace cs

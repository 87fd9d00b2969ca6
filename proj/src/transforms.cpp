// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace cs {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

unsigned log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("log2_exact: " + std::to_string(n) + " is not a power of 2");
  unsigned q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  return q;
}

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanPtr = std::shared_ptr<fftw_plan_s>;

PlanPtr make_plan(std::size_t n, int sign) {
  std::lock_guard lock(planner_mutex());
  std::vector<cplx> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("dft: FFTW planning failed");
  return PlanPtr(p, PlanDeleter{});
}

LinearOperator::Apply fft_apply(PlanPtr plan) {
  return [plan = std::move(plan)](std::span<const cplx> in, std::span<cplx> out) {
    std::copy(in.begin(), in.end(), out.begin());
    auto* buf = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan.get(), buf, buf);
  };
}

}  // namespace

LinearOperator dft(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dft: n must be positive");
  auto partner = [n](std::size_t k) -> std::optional<std::size_t> { return (n - k) % n; };
  return LinearOperator(n, n, Field::Complex, static_cast<double>(n),
                        fft_apply(make_plan(n, FFTW_FORWARD)), fft_apply(make_plan(n, FFTW_BACKWARD)),
                        partner, "dft(" + std::to_string(n) + ")");
}

LinearOperator compose(const LinearOperator& measurement, const LinearOperator& sparsity) {
  if (sparsity.rows() != sparsity.cols())
    throw std::invalid_argument("compose: sparsity transform must be square");
  if (measurement.cols() != sparsity.rows())
    throw std::invalid_argument("compose: inner dimensions disagree (" + std::to_string(measurement.cols()) +
                                " vs " + std::to_string(sparsity.rows()) + ")");
  const double n = static_cast<double>(measurement.cols());
  if (!sparsity.scaling() || std::abs(*sparsity.scaling() - 1.0) > 1e-12)
    throw std::invalid_argument("compose: sparsity transform must be orthonormal (scaling 1)");
  if (!measurement.scaling() || std::abs(*measurement.scaling() - n) > 1e-12 * n)
    throw std::invalid_argument("compose: measurement system must satisfy Phi*Phi = nI");

  const std::size_t inner = sparsity.rows();
  auto fwd = [phi = measurement.forward_fn(), psi_t = sparsity.adjoint_fn(), inner](
                 std::span<const cplx> w, std::span<cplx> y) {
    CVec f(inner);
    psi_t(w, f);
    phi(f, y);
  };
  auto adj = [phi_t = measurement.adjoint_fn(), psi = sparsity.forward_fn(), inner](
                 std::span<const cplx> y, std::span<cplx> w) {
    CVec f(inner);
    phi_t(y, f);
    psi(f, w);
  };
  const Field field =
      (measurement.field() == Field::Real && sparsity.field() == Field::Real) ? Field::Real : Field::Complex;
  // A real synthesis map keeps real inputs real, so row pairing carries over.
  LinearOperator::Partner partner;
  if (sparsity.field() == Field::Real) partner = measurement.partner_fn();
  return LinearOperator(measurement.rows(), sparsity.cols(), field, n, fwd, adj, partner,
                        measurement.name() + "." + sparsity.name());
}

}  // namespace cs

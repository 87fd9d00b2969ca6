// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cs/linear_operator.hpp"
#include "cs/sampling.hpp"

namespace cs {

/// A real linear map R^cols -> R^rows given by forward/adjoint procedures.
struct RealMap {
  using Apply = std::function<void(std::span<const double>, std::span<double>)>;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Apply forward;
  Apply adjoint;

  RVec apply(std::span<const double> x) const;
  RVec apply_adjoint(std::span<const double> y) const;
};

/// Complex constraints over a real unknown, rewritten as real rows.
///
/// Every complex row contributes its real and imaginary parts, except that a
/// row whose conjugate partner is also present is kept only once, and a
/// self-partnered (real) row contributes only its real part. For a complex
/// system the real constraint count is therefore at most 2m.
struct RealSystem {
  RealMap map;
  std::vector<std::size_t> source_row;  // complex row behind each real row
  std::vector<bool> imaginary;          // which part of that row

  RVec measurements(std::span<const cplx> y) const;
};

RealSystem realify(const LinearOperator& A);

/// Wraps a dense row-major matrix; used by tests and small oracles.
RealMap dense_map(std::size_t rows, std::size_t cols, std::vector<double> row_major);

struct SolverOptions {
  int max_outer_iterations = 60;
  double duality_gap_tol = 1e-8;
  double constraint_tol = 1e-8;
  double cg_tol = 1e-10;
  int cg_max_iters = 500;

  void validate() const;
};

/// Relative sup-norm error at or below which a recovery counts as exact.
inline constexpr double kExactnessThreshold = 1e-4;

enum class SolverStatus { Converged, ZeroMeasurements, MaxIterations, LinearSolveBreakdown, LineSearchStalled };
std::string to_string(SolverStatus s);

struct RecoveryResult {
  RVec x_hat;
  int iterations = 0;
  double final_gap = 0.0;            // surrogate duality gap at exit
  double constraint_residual = 0.0;  // ||A x_hat - y|| / max(1, ||y||)
  SolverStatus status = SolverStatus::Converged;
  bool converged = false;

  bool exact = false;
  double rel_error_inf = 0.0;  // NaN unless a reference signal was supplied

  /// Dual point nu with ||A^T nu||_inf <= 1; <nu, y> lower-bounds the optimum.
  RVec dual;
  double dual_objective = 0.0;

  /// Residual norm before and after each accepted step, at that step's
  /// barrier parameter.
  struct MeritStep {
    double before;
    double after;
  };
  std::vector<MeritStep> merit;
  int cg_iterations = 0;
  double cg_worst_residual = 0.0;
  std::string diagnostics;
};

/// min ||x||_1 subject to A x = y, by a primal-dual interior-point method on
/// the lift  min sum(u)  s.t.  -u <= x <= u, A x = y. Newton systems are
/// reduced to (A S A^T) dv = r and solved by conjugate gradients, so A is
/// touched only through forward/adjoint.
RecoveryResult basis_pursuit(const RealMap& A, std::span<const double> y, const SolverOptions& opts = {});

/// Complex-constraint overload: realifies A (a row restriction) and y.
RecoveryResult basis_pursuit(const LinearOperator& A, std::span<const cplx> y, const SolverOptions& opts = {});

/// ||x_hat - x0||_inf / ||x0||_inf (absolute error when x0 = 0).
double relative_error_inf(std::span<const double> x_hat, std::span<const double> x0);

/// Fills exact / rel_error_inf against a reference.
void grade(RecoveryResult& result, std::span<const double> reference, double threshold = kExactnessThreshold);

/// Synthesizes x0 from the model, measures y = U_Omega x0, solves, grades.
RecoveryResult recover(const LinearOperator& U, const SampleSet& omega, const SparseModel& model,
                       const SolverOptions& opts = {});

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradients for a symmetric positive (semi)definite map, started
/// at zero. Returns the iterate with the smallest residual seen.
CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                            std::span<const double> b, std::span<double> x, double tol, int max_iters);

}  // namespace cs

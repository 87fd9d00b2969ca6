// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#pragma once

#include <span>
#include <vector>

#include "cs/analysis.hpp"
#include "cs/linear_operator.hpp"
#include "cs/sampling.hpp"
#include "cs/solver.hpp"

namespace cs {

/// The least-squares dual vector
///   pi = A^T A_T (A_T^T A_T)^{-1} z
/// for the realified constraint rows A of U_Omega, and the three conditions
/// under which it certifies that x0 (signs z on T) is the unique l1
/// minimizer: pi lies in the row space of A (by construction), pi = z on T,
/// and |pi| < 1 off T.
///
/// For complex U the conditions are checked on the real dual of the
/// realified system, which is the right object for real-valued unknowns; a
/// complex-valued dual would not certify the real program.
struct CertificateReport {
  RVec pi;
  RVec coefficients;  // (Re, Im) pairs per sampled row: pi = real_dual(U_Omega, coefficients)
  bool invertible = false;
  bool on_support_ok = false;
  double on_support_error = 0.0;  // max_{t in T} |pi(t) - z(t)|
  double off_support_max = 0.0;   // max_{t notin T} |pi(t)|
  bool strict = false;            // invertible, on_support_ok, off_support_max < 1
  double gram_lambda_min = 0.0;   // of the realified s x s Gram, divided by m
  SpectralReport gram_spectrum;   // (1/m) U_OT^* U_OT, complex Gram
};

inline constexpr double kSingularGram = 1e-10;
inline constexpr double kOnSupportTol = 1e-8;

/// Re(U_Omega^* w) with w_r = coefficients[2r] + i coefficients[2r+1]: the
/// transpose of the real system whose rows are Re and Im of each sampled row.
RVec real_dual(const LinearOperator& U_omega, std::span<const double> coefficients);

CertificateReport dual_vector(const LinearOperator& U, const SampleSet& omega, const SparseModel& model);

struct CertifiedRecovery {
  CertificateReport certificate;
  RecoveryResult recovery;
  bool consistent = false;         // strict => exact
  bool expected_failure = false;   // invertible and off_support_max > 1 + 1e-6
};

CertifiedRecovery certify_then_solve(const LinearOperator& U, const SampleSet& omega, const SparseModel& model,
                                     const SolverOptions& opts = {});

}  // namespace cs

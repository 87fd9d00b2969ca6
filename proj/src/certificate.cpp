// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/certificate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cs {

RVec real_dual(const LinearOperator& U_omega, std::span<const double> coefficients) {
  if (coefficients.size() != 2 * U_omega.rows()) throw std::invalid_argument("real_dual: need two coefficients per row");
  CVec w(U_omega.rows());
  for (std::size_t r = 0; r < w.size(); ++r) w[r] = {coefficients[2 * r], coefficients[2 * r + 1]};
  const CVec x = U_omega.adjoint(w);
  RVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i].real();
  return out;
}

CertificateReport dual_vector(const LinearOperator& U, const SampleSet& omega, const SparseModel& model) {
  if (model.support.empty()) throw std::invalid_argument("dual_vector: empty support");
  if (model.n != U.cols()) throw std::invalid_argument("dual_vector: model dimension does not match operator");

  CertificateReport rep;
  const auto columns = support_columns(U, model.support);
  rep.gram_spectrum = gram_spectrum_from_columns(columns, omega.indices);

  // Both parts of every sampled row, with no conjugate-pair folding, so that
  // A^T A = Re(U_Omega^* U_Omega): the real dual then coincides with the
  // complex formula whenever that formula is real (e.g. Omega = all rows).
  const std::size_t m = omega.size();
  const auto rows = static_cast<Eigen::Index>(2 * m);
  const auto s = static_cast<Eigen::Index>(model.support.size());
  const std::size_t n = U.cols();
  rep.pi.assign(n, 0.0);
  rep.coefficients.assign(2 * m, 0.0);
  if (m == 0) return rep;

  Eigen::MatrixXd AT(rows, s);
  for (Eigen::Index c = 0; c < s; ++c)
    for (std::size_t r = 0; r < m; ++r) {
      const cplx v = columns[static_cast<std::size_t>(c)][omega.indices[r]];
      AT(static_cast<Eigen::Index>(2 * r), c) = v.real();
      AT(static_cast<Eigen::Index>(2 * r + 1), c) = v.imag();
    }
  const Eigen::MatrixXd gram = AT.transpose() * AT;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  rep.gram_lambda_min = eig.eigenvalues().minCoeff() / static_cast<double>(m);
  if (rep.gram_lambda_min < kSingularGram) return rep;

  Eigen::LLT<Eigen::MatrixXd> chol(gram);
  if (chol.info() != Eigen::Success) return rep;
  rep.invertible = true;

  Eigen::VectorXd z(s);
  for (Eigen::Index i = 0; i < s; ++i) z[i] = model.signs[static_cast<std::size_t>(i)];
  const Eigen::VectorXd coeffs = AT * chol.solve(z);
  rep.coefficients.assign(coeffs.data(), coeffs.data() + rows);
  rep.pi = real_dual(restrict_rows(U, omega), rep.coefficients);

  std::vector<bool> on(n, false);
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    const std::size_t t = model.support[i];
    on[t] = true;
    rep.on_support_error = std::max(rep.on_support_error, std::abs(rep.pi[t] - model.signs[i]));
  }
  for (std::size_t t = 0; t < n; ++t)
    if (!on[t]) rep.off_support_max = std::max(rep.off_support_max, std::abs(rep.pi[t]));
  rep.on_support_ok = rep.on_support_error <= kOnSupportTol;
  rep.strict = rep.on_support_ok && rep.off_support_max < 1.0;
  return rep;
}

CertifiedRecovery certify_then_solve(const LinearOperator& U, const SampleSet& omega, const SparseModel& model,
                                     const SolverOptions& opts) {
  CertifiedRecovery out;
  out.certificate = dual_vector(U, omega, model);
  out.recovery = recover(U, omega, model, opts);
  out.consistent = !out.certificate.strict || out.recovery.exact;
  out.expected_failure = out.certificate.invertible && out.certificate.off_support_max > 1.0 + 1e-6;
  return out;
}

}  // namespace cs

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include "cs/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace cs {

namespace {

using Vec = Eigen::VectorXd;

std::span<const double> view(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> view(Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Vec apply(const RealMap& A, const Vec& x) {
  Vec y(static_cast<Eigen::Index>(A.rows));
  A.forward(view(x), view(y));
  return y;
}

Vec apply_t(const RealMap& A, const Vec& y) {
  Vec x(static_cast<Eigen::Index>(A.cols));
  A.adjoint(view(y), view(x));
  return x;
}

// Algorithm constants: barrier growth, sufficient-decrease fraction,
// backtracking factor, step-to-boundary fraction.
constexpr double kMu = 10.0;
constexpr double kAlpha = 0.01;
constexpr double kBeta = 0.5;
constexpr double kBoundary = 0.99;
constexpr int kMaxBacktracks = 32;
// CG relative residual above which a Newton direction is useless.
constexpr double kCgBreakdown = 0.5;
// Relative surrogate gap below which support polishing is attempted.
constexpr double kPolishStart = 1e-3;

struct Polished {
  Vec x;
  Vec nu;
  Vec rpri;
  double gap = 0.0;
  std::size_t support = 0;
};

// Least-squares solve on the numerical support of an interior iterate, with
// a dual point matching sign(x) on that support. Accepted only when the pair
// certifies itself: residual within constraint_tol, ||A^T nu||_inf within
// 1 + 10 gap_tol, and ||x||_1 - <nu, y> within duality_gap_tol.
std::optional<Polished> polish(const RealMap& A, const Vec& y, const Vec& x, const Vec& nu_ipm,
                               const SolverOptions& opts) {
  const auto N = static_cast<Eigen::Index>(A.cols);
  const auto M = static_cast<Eigen::Index>(A.rows);
  const double xmax = x.cwiseAbs().maxCoeff();
  if (!(xmax > 0.0)) return std::nullopt;
  const double yscale = std::max(1.0, y.norm());

  std::vector<Eigen::Index> previous;
  for (double rel : {1e-2, 1e-4, 1e-6}) {
    std::vector<Eigen::Index> T;
    for (Eigen::Index i = 0; i < N; ++i)
      if (std::abs(x[i]) > rel * xmax) T.push_back(i);
    if (T == previous) continue;
    previous = T;
    const auto k = static_cast<Eigen::Index>(T.size());
    if (k > 2 * M) break;  // far from any vertex; dense work would dominate

    Eigen::MatrixXd AT(M, k);
    Vec e = Vec::Zero(N);
    Vec x0(k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto t = T[static_cast<std::size_t>(c)];
      e[t] = 1.0;
      AT.col(c) = apply(A, e);
      e[t] = 0.0;
      x0[c] = x[t];
    }
    // Minimum-norm correction of the truncated iterate; on a non-unique
    // optimal face (|T| > rank) this stays on the face as long as no sign flips.
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(AT);
    const Vec xT = x0 + cod.solve(y - AT * x0);
    const Vec r = AT * xT - y;
    if (r.norm() / yscale > opts.constraint_tol) continue;
    Vec sgn(k);
    bool flipped = false;
    for (Eigen::Index c = 0; c < k; ++c) {
      sgn[c] = x0[c] > 0 ? 1.0 : -1.0;
      flipped = flipped || xT[c] * x0[c] <= 0.0;
    }
    if (flipped) continue;

    // Least-squares dual, and the interior dual projected onto A_T^T nu = sgn.
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codt(AT.transpose());
    const Vec nu_ls = codt.solve(sgn);
    const Vec nu_fix = nu_ipm + codt.solve(sgn - AT.transpose() * nu_ipm);
    Polished best;
    double best_inf = std::numeric_limits<double>::infinity();
    for (const Vec* cand : {&nu_ls, &nu_fix}) {
      const double inf = apply_t(A, *cand).cwiseAbs().maxCoeff();
      if (inf < best_inf) {
        best_inf = inf;
        best.nu = *cand;
      }
    }
    if (!(best_inf <= 1.0 + 10.0 * opts.duality_gap_tol)) continue;

    best.x = Vec::Zero(N);
    for (Eigen::Index c = 0; c < k; ++c) best.x[T[static_cast<std::size_t>(c)]] = xT[c];
    best.rpri = apply(A, best.x) - y;
    best.gap = std::max(0.0, best.x.lpNorm<1>() - best.nu.dot(y));
    best.support = T.size();
    if (best.rpri.norm() / yscale <= opts.constraint_tol && best.gap <= opts.duality_gap_tol) return best;
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::ZeroMeasurements: return "zero_measurements";
    case SolverStatus::MaxIterations: return "max_iterations";
    case SolverStatus::LinearSolveBreakdown: return "linear_solve_breakdown";
    case SolverStatus::LineSearchStalled: return "line_search_stalled";
  }
  return "unknown";
}

void SolverOptions::validate() const {
  if (max_outer_iterations <= 0 || cg_max_iters <= 0) throw std::invalid_argument("SolverOptions: iteration limits must be positive");
  if (!(duality_gap_tol > 0) || !(constraint_tol > 0) || !(cg_tol > 0))
    throw std::invalid_argument("SolverOptions: tolerances must be positive");
}

CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply_op,
                            std::span<const double> b_in, std::span<double> x_out, double tol, int max_iters) {
  const auto n = static_cast<Eigen::Index>(b_in.size());
  Eigen::Map<const Vec> b(b_in.data(), n);
  Vec x = Vec::Zero(n), r = b, p = r, q(n);
  Vec best = x;
  const double bnorm = b.norm();
  CgResult res;
  if (bnorm == 0.0) {
    std::fill(x_out.begin(), x_out.end(), 0.0);
    return res;
  }
  double rho = r.squaredNorm();
  double best_rel = 1.0;
  int it = 0;
  for (; it < max_iters; ++it) {
    const double rel = std::sqrt(rho) / bnorm;
    if (rel < tol) break;
    apply_op(view(p), view(q));
    const double pq = p.dot(q);
    if (!(pq > 0.0)) break;
    const double alpha = rho / pq;
    x += alpha * p;
    r -= alpha * q;
    const double rho_next = r.squaredNorm();
    const double rel_next = std::sqrt(rho_next) / bnorm;
    if (rel_next < best_rel) {
      best = x;
      best_rel = rel_next;
    }
    p = r + (rho_next / rho) * p;
    rho = rho_next;
  }
  res.iterations = it;
  res.relative_residual = best_rel;
  std::copy(best.data(), best.data() + n, x_out.begin());
  return res;
}

RecoveryResult basis_pursuit(const RealMap& A, std::span<const double> y_in, const SolverOptions& opts) {
  opts.validate();
  if (y_in.size() != A.rows) throw std::invalid_argument("basis_pursuit: measurement length does not match operator");
  const auto N = static_cast<Eigen::Index>(A.cols);
  const auto M = static_cast<Eigen::Index>(A.rows);
  Eigen::Map<const Vec> y(y_in.data(), M);
  const double ynorm = y.norm();
  const double yscale = std::max(1.0, ynorm);

  RecoveryResult out;
  out.rel_error_inf = std::numeric_limits<double>::quiet_NaN();
  if (ynorm == 0.0 || N == 0) {
    out.x_hat.assign(A.cols, 0.0);
    out.dual.assign(A.rows, 0.0);
    out.status = SolverStatus::ZeroMeasurements;
    out.converged = true;
    return out;
  }

  auto normal = [&A](const Vec& weights) {
    return [&A, &weights](std::span<const double> z, std::span<double> outv) {
      Vec zt(static_cast<Eigen::Index>(A.cols));
      A.adjoint(z, view(zt));
      zt.array() *= weights.array();
      A.forward(view(zt), outv);
    };
  };

  // Minimum-energy feasible point x = A^T (A A^T)^{-1} y.
  Vec x;
  {
    const Vec ones = Vec::Ones(N);
    Vec w(M);
    const auto cg = conjugate_gradient(normal(ones), view(Vec(y)), view(w), opts.cg_tol, opts.cg_max_iters);
    out.cg_iterations += cg.iterations;
    out.cg_worst_residual = cg.relative_residual;
    x = apply_t(A, w);
  }
  const double xmax = x.cwiseAbs().maxCoeff();
  Vec u = 0.95 * x.cwiseAbs() + Vec::Constant(N, 0.10 * xmax);

  Vec fu1 = x - u, fu2 = -x - u;
  Vec lam1 = -fu1.cwiseInverse(), lam2 = -fu2.cwiseInverse();
  Vec v = -apply(A, lam1 - lam2);
  Vec Atv = apply_t(A, v);
  Vec rpri = apply(A, x) - y;

  double sdg = -(fu1.dot(lam1) + fu2.dot(lam2));
  double tau = kMu * 2.0 * static_cast<double>(N) / sdg;

  auto residual_norm = [&](const Vec& l1, const Vec& l2, const Vec& f1, const Vec& f2, const Vec& atv,
                           const Vec& rp, double t) {
    const Vec rd1 = l1 - l2 + atv;
    const Vec rd2 = Vec::Ones(N) - l1 - l2;
    const Vec rc1 = (-l1.array() * f1.array() - 1.0 / t).matrix();
    const Vec rc2 = (-l2.array() * f2.array() - 1.0 / t).matrix();
    return std::sqrt(rd1.squaredNorm() + rd2.squaredNorm() + rc1.squaredNorm() + rc2.squaredNorm() +
                     rp.squaredNorm());
  };
  double resnorm = residual_norm(lam1, lam2, fu1, fu2, Atv, rpri, tau);

  std::ostringstream diag;
  out.status = SolverStatus::MaxIterations;
  int iter = 0;
  std::optional<Polished> polished;
  for (;;) {
    if (sdg < opts.duality_gap_tol && rpri.norm() / yscale <= opts.constraint_tol) {
      out.status = SolverStatus::Converged;
      break;
    }
    if (sdg <= kPolishStart * std::max(1.0, x.lpNorm<1>()) && (polished = polish(A, y, x, -v, opts))) {
      out.status = SolverStatus::Converged;
      break;
    }
    if (iter >= opts.max_outer_iterations) break;
    ++iter;

    const Vec inv1 = fu1.cwiseInverse(), inv2 = fu2.cwiseInverse();
    const Vec w1 = -(1.0 / tau) * (-inv1 + inv2) - Atv;
    const Vec w2 = -Vec::Ones(N) - (1.0 / tau) * (inv1 + inv2);
    // a = lam1/(-fu1) > 0, b = lam2/(-fu2) > 0; sig1 - sig2^2/sig1 = 4ab/(a+b) without cancellation.
    const Vec a = (-lam1.array() * inv1.array()).matrix();
    const Vec b = (-lam2.array() * inv2.array()).matrix();
    const Vec sig1 = a + b;
    const Vec sig2 = b - a;
    const Vec sigx = (4.0 * a.array() * b.array() / sig1.array()).matrix();
    const Vec sigx_inv = sigx.cwiseInverse();

    // Reduced Newton system (A Sx^-1 A^T) dv = rhs.
    const Vec shifted = (w1.array() / sigx.array() - w2.array() * sig2.array() / (sigx.array() * sig1.array())).matrix();
    const Vec rhs = rpri + apply(A, shifted);
    Vec dv(M);
    const auto cg = conjugate_gradient(normal(sigx_inv), view(rhs), view(dv), opts.cg_tol, opts.cg_max_iters);
    out.cg_iterations += cg.iterations;
    out.cg_worst_residual = std::max(out.cg_worst_residual, cg.relative_residual);
    if (cg.relative_residual > kCgBreakdown) {
      out.status = SolverStatus::LinearSolveBreakdown;
      diag << "iteration " << iter << ": CG relative residual " << cg.relative_residual << " after "
           << cg.iterations << " iterations (tau=" << tau << ")";
      --iter;
      break;
    }

    const Vec Atdv = apply_t(A, dv);
    const Vec dx = ((w1 - (w2.array() * sig2.array() / sig1.array()).matrix() - Atdv).array() / sigx.array()).matrix();
    const Vec Adx = apply(A, dx);
    const Vec du = ((w2.array() - sig2.array() * dx.array()) / sig1.array()).matrix();
    const Vec dlam1 = ((lam1.array() * inv1.array()) * (-dx + du).array() - lam1.array() - (1.0 / tau) * inv1.array()).matrix();
    const Vec dlam2 = ((lam2.array() * inv2.array()) * (dx + du).array() - lam2.array() - (1.0 / tau) * inv2.array()).matrix();

    double s = 1.0;
    for (Eigen::Index i = 0; i < N; ++i) {
      if (dlam1[i] < 0) s = std::min(s, -lam1[i] / dlam1[i]);
      if (dlam2[i] < 0) s = std::min(s, -lam2[i] / dlam2[i]);
      const double g1 = dx[i] - du[i], g2 = -dx[i] - du[i];
      if (g1 > 0) s = std::min(s, -fu1[i] / g1);
      if (g2 > 0) s = std::min(s, -fu2[i] / g2);
    }
    s *= kBoundary;

    bool accepted = false;
    Vec xp, up, vp, Atvp, lam1p, lam2p, fu1p, fu2p, rpp;
    double newres = 0.0;
    for (int back = 0; back <= kMaxBacktracks; ++back, s *= kBeta) {
      xp = x + s * dx;
      up = u + s * du;
      vp = v + s * dv;
      Atvp = Atv + s * Atdv;
      lam1p = lam1 + s * dlam1;
      lam2p = lam2 + s * dlam2;
      fu1p = xp - up;
      fu2p = -xp - up;
      rpp = rpri + s * Adx;
      newres = residual_norm(lam1p, lam2p, fu1p, fu2p, Atvp, rpp, tau);
      if (newres <= (1.0 - kAlpha * s) * resnorm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.status = SolverStatus::LineSearchStalled;
      diag << "iteration " << iter << ": backtracking failed (tau=" << tau << ")";
      --iter;
      break;
    }
    out.merit.push_back({resnorm, newres});

    x = std::move(xp);
    u = std::move(up);
    v = std::move(vp);
    Atv = std::move(Atvp);
    lam1 = std::move(lam1p);
    lam2 = std::move(lam2p);
    fu1 = std::move(fu1p);
    fu2 = std::move(fu2p);
    rpri = apply(A, x) - y;

    sdg = -(fu1.dot(lam1) + fu2.dot(lam2));
    tau = kMu * 2.0 * static_cast<double>(N) / sdg;
    resnorm = residual_norm(lam1, lam2, fu1, fu2, Atv, rpri, tau);
  }

  if (out.status != SolverStatus::Converged && sdg > kPolishStart * std::max(1.0, x.lpNorm<1>()) &&
      (polished = polish(A, y, x, -v, opts)))
    out.status = SolverStatus::Converged;

  Vec nu = -v;
  if (polished) {
    x = polished->x;
    nu = polished->nu;
    rpri = polished->rpri;
    sdg = polished->gap;
    diag << "polished on a " << polished->support << "-column support after " << iter << " iterations";
  } else {
    // Scaled back into the dual feasible set if CG noise pushed it out.
    const double dual_inf = apply_t(A, nu).cwiseAbs().maxCoeff();
    if (dual_inf > 1.0) nu /= dual_inf;
  }

  out.iterations = iter;
  out.final_gap = sdg;
  out.constraint_residual = rpri.norm() / yscale;
  out.converged = out.status == SolverStatus::Converged;
  out.x_hat.assign(x.data(), x.data() + N);
  out.dual.assign(nu.data(), nu.data() + M);
  out.dual_objective = nu.dot(y);
  if (!out.converged && diag.tellp() == 0) diag << "stopped after " << iter << " iterations, gap " << sdg;
  out.diagnostics = diag.str();
  return out;
}

RecoveryResult basis_pursuit(const LinearOperator& A, std::span<const cplx> y, const SolverOptions& opts) {
  if (y.size() != A.rows()) throw std::invalid_argument("basis_pursuit: measurement length does not match operator");
  const RealSystem sys = realify(A);
  const RVec yr = sys.measurements(y);
  return basis_pursuit(sys.map, yr, opts);
}

double relative_error_inf(std::span<const double> x_hat, std::span<const double> x0) {
  if (x_hat.size() != x0.size()) throw std::invalid_argument("relative_error_inf: length mismatch");
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    err = std::max(err, std::abs(x_hat[i] - x0[i]));
    ref = std::max(ref, std::abs(x0[i]));
  }
  return ref > 0.0 ? err / ref : err;
}

void grade(RecoveryResult& result, std::span<const double> reference, double threshold) {
  result.rel_error_inf = relative_error_inf(result.x_hat, reference);
  result.exact = result.rel_error_inf <= threshold;
}

RecoveryResult recover(const LinearOperator& U, const SampleSet& omega, const SparseModel& model,
                       const SolverOptions& opts) {
  if (model.n != U.cols()) throw std::invalid_argument("recover: model dimension does not match operator");
  const RealSystem sys = realify(restrict_rows(U, omega));
  const RVec x0 = model.signal();
  const RVec y = sys.map.apply(x0);
  RecoveryResult res = basis_pursuit(sys.map, y, opts);
  grade(res, x0);
  return res;
}

}  // namespace cs

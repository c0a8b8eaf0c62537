#include "magma/minres.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace magma {

SolverReport minres(const LinearOperator& op, const LinearOperator& preconditioner,
                    std::span<const double> rhs, const MinresOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int n = op.size();
  if (preconditioner.size() != n || rhs.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("minres: dimension mismatch");
  }

  SolverReport report;
  report.solution.assign(n, 0.0);
  report.residual_history.push_back(1.0);
  report.preconditioned_history.push_back(1.0);

  auto finish = [&] {
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    report.residual_history.back() = 0.0;
    report.converged = true;
    return finish();
  }

  auto project = [&](std::span<double> x) {
    if (!options.nullspace) return;
    const auto& ns = *options.nullspace;
    project_constant_pressure(x.subspan(ns.offset, ns.q_ones.size()), ns.q_ones);
  };

  Vector& x = report.solution;
  Vector r1(rhs.begin(), rhs.end());
  Vector r2 = r1;
  Vector y(n);
  preconditioner.apply(r1, y);
  double beta1 = dot(r1, y);
  if (!(beta1 >= 0.0)) throw SolverBreakdown("minres: preconditioner is not positive definite");
  beta1 = std::sqrt(beta1);
  if (beta1 == 0.0) throw SolverBreakdown("minres: preconditioner annihilates the right-hand side");

  double oldb = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  Vector w(n, 0.0), w1(n, 0.0), w2(n, 0.0), v(n), residual(n);

  for (int it = 1; it <= options.max_iters; ++it) {
    const double s = 1.0 / beta;
    for (int i = 0; i < n; ++i) v[i] = s * y[i];
    op.apply(v, y);
    if (it >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    r1.swap(r2);
    r2 = y;
    preconditioner.apply(r2, y);
    oldb = beta;
    const double beta_sq = dot(r2, y);
    if (std::isnan(beta_sq) || std::isnan(alfa)) throw SolverBreakdown("minres: NaN in recurrence");
    if (beta_sq < 0.0) throw SolverBreakdown("minres: preconditioner is not positive definite");
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::epsilon());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    for (int i = 0; i < n; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    axpy(phi, w, x);
    project(x);

    op.apply(x, residual);
    for (int i = 0; i < n; ++i) residual[i] = rhs[i] - residual[i];
    const double rel = norm2(residual) / bnorm;
    if (!std::isfinite(rel)) throw SolverBreakdown("minres: NaN in iterate");
    report.residual_history.push_back(rel);
    report.preconditioned_history.push_back(phibar / beta1);
    report.iterations = it;
    if (rel <= options.tol) {
      report.converged = true;
      break;
    }
    if (beta == 0.0) break;  // invariant subspace reached; cannot improve further
  }
  return finish();
}

}  // namespace magma

#include "boxqp/ppa.hpp"

#include <chrono>
#include <cmath>

namespace boxqp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

MaxOuterReached::MaxOuterReached(int iters)
    : std::runtime_error("proximal loop did not converge within " +
                         std::to_string(iters) + " outer iterations") {}

double estimate_min_eigenvalue(const SymMatrix& q, double tol, int max_iter) {
  const int n = q.size();
  if (n == 0) return 0.0;
  const double shift = estimate_lipschitz(q, std::min(tol, 1e-6), max_iter);
  if (shift == 0.0) return 0.0;

  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector bv = shift * v - q.mul(v);
    const double norm = bv.norm();
    if (norm == 0.0) {
      estimate = 0.0;
      break;
    }
    v = bv / norm;
    const bool settled = std::abs(norm - estimate) <= tol * norm;
    estimate = norm;
    if (settled) break;
  }
  return shift - estimate - tol * shift;
}

BqpProblem prox_subproblem(const BqpProblem& p, const Vector& center,
                           double gamma) {
  Matrix h = p.h.dense();
  h.diagonal().array() += gamma;
  BqpProblem sub{SymMatrix::from_dense(std::move(h)), p.f - gamma * center,
                 p.lower, p.upper, Convexity::kStrictlyConvex};
  return sub;
}

Vector extrapolated_center(const Vector& x_k, const Vector& x_km1,
                           double omega) {
  return (x_k - omega * x_km1) / (1.0 - omega);
}

bool should_accelerate(std::span<const double> omega_history, double eps,
                       int window) {
  if (window < 1) return false;
  if (omega_history.size() < static_cast<std::size_t>(window) + 1) return false;
  const std::size_t last = omega_history.size() - 1;
  for (int j = 0; j < window; ++j) {
    const double cur = omega_history[last - j];
    const double prev = omega_history[last - j - 1];
    if (!(cur < 1.0) || !(std::abs(cur - prev) < eps)) return false;
  }
  return true;
}

namespace {

SolverReport run_outer(const BqpProblem& p, const Vector& x0,
                       const PpaParams& params, bool allow_accel,
                       PpaTrace* trace) {
  const auto start_time = Clock::now();
  p.validate();

  SolverReport report;
  Vector x = project_box(x0, p.lower, p.upper);

  const double f_eps = params.decrease_threshold >= 0.0
                           ? params.decrease_threshold
                           : 1e-6 * (1.0 + std::abs(p.objective(x)));

  // Strictly convex inputs need no proximal shift: one exact inner solve.
  double gamma = 0.0;
  if (params.gamma.has_value()) {
    gamma = *params.gamma;
  } else if (p.convexity != Convexity::kStrictlyConvex) {
    const double lambda_min = estimate_min_eigenvalue(p.h);
    if (lambda_min <= 0.0) {
      const double delta = params.shift_margin >= 0.0
                               ? params.shift_margin
                               : 1e-3 * (1.0 + p.h.inf_norm());
      gamma = delta - lambda_min;
    }
  }

  if (gamma == 0.0) {
    TwoStageResult direct = solve_strictly_convex(p, x, params.inner);
    report.x_star = direct.z;
    report.outer_iters = 1;
    report.inner_apg_iters = direct.apg.iterations;
    report.pas_steps = direct.pas.steps;
    report.chol_update_flops = direct.pas.update_flops;
    report.apg_stop = to_string(direct.apg.stop);
    report.objective = p.objective(report.x_star);
    report.kkt = kkt_residual(p, report.x_star);
    report.step_norms.push_back((direct.z - x).norm());
    report.wall_time_s = seconds_since(start_time);
    if (trace) trace->push_back(PpaTraceStep{report.x_star, false, false, 0.0});
    return report;
  }
  report.gamma = gamma;

  // H = Q + gamma*I is shared by every subproblem; only f moves.
  BqpProblem sub = prox_subproblem(p, x, gamma);
  ApgParams apg_params = params.inner.apg;
  if (apg_params.lipschitz <= 0.0) {
    apg_params.lipschitz = estimate_lipschitz(p.h) + gamma;
  }

  // Runs one proximal step about `center`; fills `early` with whether the
  // prediction stage alone was accepted.
  const auto inner_step = [&](const Vector& center, bool allow_early,
                              bool& early) {
    sub.f = p.f - gamma * center;
    const ApgResult apg = apg_solve(sub, x, apg_params);
    report.inner_apg_iters += apg.iterations;
    report.apg_stop = to_string(apg.stop);
    if (allow_early && p.objective(apg.y) <= p.objective(x) - f_eps) {
      early = true;
      return apg.y;
    }
    early = false;
    const PasResult pas = finish_with_pas(sub, apg.y, params.inner.pas,
                                          params.inner.sort_working_set);
    report.pas_steps += pas.steps;
    report.chol_update_flops += pas.update_flops;
    return pas.z;
  };

  Vector x_prev;
  std::vector<double> omegas;
  bool converged = false;

  for (int k = 0; k < params.max_outer; ++k) {
    const double omega = omegas.empty() ? 0.0 : omegas.back();
    bool accelerated = false;
    Vector cand;
    bool early = false;

    if (allow_accel && omega > 0.0 && omega < 1.0 &&
        should_accelerate(omegas, params.switch_eps, params.switch_window)) {
      const Vector center = extrapolated_center(x, x_prev, omega);
      cand = inner_step(center, true, early);
      // An extrapolated step that fails to decrease the objective is
      // discarded; the plain step below preserves monotonicity.
      accelerated = p.objective(cand) <= p.objective(x);
    }
    if (!accelerated) {
      cand = inner_step(x, true, early);
    }

    double step = (cand - x).norm();
    if (step <= params.tol && early) {
      // A prediction-only step is not exact enough to certify convergence;
      // take one exact plain step before stopping.
      accelerated = false;
      cand = inner_step(x, false, early);
      step = (cand - x).norm();
    }

    x_prev = x;
    x = std::move(cand);
    ++report.outer_iters;
    if (accelerated) ++report.accelerated_steps;
    report.step_norms.push_back(step);
    const std::size_t ns = report.step_norms.size();
    if (ns >= 2 && report.step_norms[ns - 2] > 0.0) {
      omegas.push_back(step / report.step_norms[ns - 2]);
    }
    if (trace) trace->push_back(PpaTraceStep{x, accelerated, early, omega});

    if (step <= params.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw MaxOuterReached(params.max_outer);

  report.x_star = x;
  report.objective = p.objective(x);
  report.kkt = kkt_residual(p, x);
  report.wall_time_s = seconds_since(start_time);
  return report;
}

}  // namespace

SolverReport ppa_solve(const BqpProblem& p, const Vector& x0,
                       const PpaParams& params, PpaTrace* trace) {
  return run_outer(p, x0, params, false, trace);
}

SolverReport appa_solve(const BqpProblem& p, const Vector& x0,
                        const PpaParams& params, PpaTrace* trace) {
  return run_outer(p, x0, params, true, trace);
}

}  // namespace boxqp

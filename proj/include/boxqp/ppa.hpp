#pragma once

#include <optional>
#include <span>

#include "boxqp/solve.hpp"

namespace boxqp {

struct PpaParams {
  /// Margin delta of the proximal weight gamma = delta + max(0, -lambda_min).
  /// Negative means the scale-aware default 1e-3 * (1 + ||Q||_inf).
  double shift_margin = -1.0;
  /// Explicit proximal weight; set it to bypass the eigenvalue estimate.
  std::optional<double> gamma;
  /// Outer loop stops when ||x_next - x|| falls to this value.
  double tol = 1e-11;
  /// Early-exit threshold f_eps: the prediction stage alone is accepted when
  /// it lowers the objective by at least this much. Negative means the
  /// default 1e-6 * (1 + |q(x0)|).
  double decrease_threshold = -1.0;
  double switch_eps = 0.1;  // step-ratio flatness enabling acceleration
  int switch_window = 1;    // consecutive flat ratio pairs required
  int max_outer = 1000;
  SolveOptions inner;
};

struct SolverReport {
  Vector x_star;
  int outer_iters = 0;
  long inner_apg_iters = 0;
  long pas_steps = 0;
  int accelerated_steps = 0;
  double objective = 0.0;
  KktResidual kkt;
  std::uint64_t chol_update_flops = 0;
  double wall_time_s = 0.0;
  double gamma = 0.0;
  std::string apg_stop;  // stop reason of the last prediction stage
  std::vector<double> step_norms;  // ||x^{k+1} - x^k|| per outer step
};

struct PpaTraceStep {
  Vector x;
  bool accelerated = false;
  bool early_exit = false;
  double omega = 0.0;  // step-norm ratio before this step; 0 if undefined
};
using PpaTrace = std::vector<PpaTraceStep>;

class MaxOuterReached : public std::runtime_error {
 public:
  explicit MaxOuterReached(int iters);
};

/// Lower estimate of the smallest eigenvalue: shifted power iteration on
/// s*I - Q with s = estimate_lipschitz(Q), minus a safety margin tol * s.
double estimate_min_eigenvalue(const SymMatrix& q, double tol = 1e-8,
                               int max_iter = 5000);

/// The strictly convex subproblem minimized by one proximal step about
/// `center`: H = Q + gamma*I, f = r - gamma*center, same box.
BqpProblem prox_subproblem(const BqpProblem& p, const Vector& center,
                           double gamma);

/// Extrapolated proximal center (x_k - omega * x_km1) / (1 - omega).
Vector extrapolated_center(const Vector& x_k, const Vector& x_km1,
                           double omega);

/// True when the last `window` consecutive ratio pairs are flat: each recent
/// ratio is < 1 and within eps of its predecessor.
bool should_accelerate(std::span<const double> omega_history, double eps,
                       int window);

/// Proximal outer loop for a possibly indefinite objective: each step
/// minimizes the shifted subproblem with the prediction stage, accepting the
/// prediction alone when it decreases the objective enough and finishing
/// with path tracking otherwise. Strictly convex inputs are solved directly
/// in a single phase.
SolverReport ppa_solve(const BqpProblem& p, const Vector& x0,
                       const PpaParams& params = {}, PpaTrace* trace = nullptr);

/// ppa_solve with step-ratio extrapolation: once the ratio history is flat,
/// the proximal center is extrapolated to the predicted limit of the current
/// linear regime. An extrapolated step that fails to decrease the objective
/// is discarded in favor of the plain step.
SolverReport appa_solve(const BqpProblem& p, const Vector& x0,
                        const PpaParams& params = {},
                        PpaTrace* trace = nullptr);

}  // namespace boxqp

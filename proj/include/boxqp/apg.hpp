#pragma once

#include "boxqp/problem.hpp"

namespace boxqp {

struct ApgParams {
  double lipschitz = 0.0;   // L >= ||H||; values <= 0 mean estimate internally
  int stability_window = 10;      // iterations the interior count must hold
  double interior_margin = 1e-3;  // relative margin of the interior count
  double step_tol = 1e-6;         // relative step tolerance
  int max_iter = 5000;
};

enum class ApgStop { kActiveSetStable, kStepSmall, kIterCap };

const char* to_string(ApgStop stop);

struct ApgResult {
  Vector y;
  int iterations = 0;
  ApgStop stop = ApgStop::kIterCap;
};

/// Componentwise clamp of z into [lower, upper]; infinite bounds are inert.
Vector project_box(const Vector& z, const Vector& lower, const Vector& upper);

/// Upper bound on the spectral norm of h: power iteration from the
/// normalized all-ones vector, stopped at relative stagnation `tol` or
/// `max_iter`, inflated by 1.01. Slow convergence only happens when the top
/// of the spectrum clusters, in which case the iterate already sits within
/// the inflation margin. Returns 0 for the zero matrix; callers must guard.
double estimate_lipschitz(const SymMatrix& h, double tol = 1e-4,
                          int max_iter = 1000);

/// Momentum recurrence rho' = (1 + sqrt(1 + 4 rho^2)) / 2.
double next_momentum(double rho);

/// |{j : lower_j + ||y|| eps < y_j < upper_j - ||y|| eps}| with the
/// Euclidean norm; infinite bounds never exclude a component.
int stable_active_count(const Vector& y, const Vector& lower,
                        const Vector& upper, double eps);

/// Accelerated projected gradient for p with positive definite H (the
/// caller guarantees it). Produces a feasible approximate solution meant to
/// seed the path-tracking stage: it stops early once the interior count is
/// unchanged for `stability_window` consecutive iterations, when the
/// relative step drops under `step_tol` (a zero iterate counts as
/// converged), or at the iteration cap.
ApgResult apg_solve(const BqpProblem& p, const Vector& z0,
                    const ApgParams& params);

}  // namespace boxqp

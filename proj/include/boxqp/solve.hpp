#pragma once

#include "boxqp/apg.hpp"
#include "boxqp/pas.hpp"

namespace boxqp {

struct SolveOptions {
  ApgParams apg;
  PasParams pas;
  /// Initialize the working order by bound margin instead of natural index
  /// order. Off only for cost comparisons between the two orderings.
  bool sort_working_set = true;
};

struct TwoStageResult {
  Vector z;
  ApgResult apg;
  PasResult pas;
};

/// Path-tracking stage alone: filtration of the approximate solution y,
/// homotopy offset, then pas_solve.
PasResult finish_with_pas(const BqpProblem& p, const Vector& y,
                          const PasParams& params, bool sorted,
                          PasTrace* trace = nullptr);

/// Full two-stage solve of a strictly convex problem: APG prediction from
/// z0, then path tracking to the exact solution.
TwoStageResult solve_strictly_convex(const BqpProblem& p, const Vector& z0,
                                     const SolveOptions& opts = {});

}  // namespace boxqp

#include "boxqp/solve.hpp"

#include <algorithm>

namespace boxqp {

PasResult finish_with_pas(const BqpProblem& p, const Vector& y,
                          const PasParams& params, bool sorted,
                          PasTrace* trace) {
  FilteredStart start =
      filter_warm_start(y, p.lower, p.upper, params.filter_eta);
  if (!sorted) {
    std::sort(start.partition.free.begin(), start.partition.free.end());
  }
  return pas_solve(p, start.z, std::move(start.partition), params, trace);
}

TwoStageResult solve_strictly_convex(const BqpProblem& p, const Vector& z0,
                                     const SolveOptions& opts) {
  TwoStageResult out;
  out.apg = apg_solve(p, z0, opts.apg);
  out.pas = finish_with_pas(p, out.apg.y, opts.pas, opts.sort_working_set);
  out.z = out.pas.z;
  return out;
}

}  // namespace boxqp

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "boxqp/problem.hpp"
#include "boxqp/working_factor.hpp"

namespace boxqp {

/// Index sets of a box-feasible point: components pinned at the lower
/// bound, strictly interior (free), and pinned at the upper bound.
/// `lower` and `upper` are kept sorted ascending; `free` carries the
/// working order of the factor.
struct Partition {
  std::vector<int> lower;
  std::vector<int> free;
  std::vector<int> upper;

  /// True when the three sets partition {0, ..., n-1} exactly.
  bool covers(int n) const;
};

enum class EventKind {
  kFreeHitsLower,   // a free component reaches its lower bound
  kFreeHitsUpper,   // a free component reaches its upper bound
  kLowerReleases,   // a lower-pinned component's gradient reaches zero
  kUpperReleases,   // an upper-pinned component's gradient reaches zero
  kFinished,        // no event left before t = 0
};

const char* to_string(EventKind kind);

struct PathEvent {
  EventKind kind = EventKind::kFinished;
  int index = -1;      // global component index; -1 for kFinished
  double t_next = 0.0; // homotopy value of the event
};

/// Tracker state between breakpoints of the homotopy
///   min 1/2 z'Hz + (f + t w)'z,  lower <= z <= upper,  t: 1 -> 0.
///
/// On the current segment the free components follow
///   z(t) = free_base - t * free_rate,
/// the gradient on lower-pinned components is lower_base - t * lower_rate
/// (kept positive), and on upper-pinned ones upper_base - t * upper_rate
/// (kept negative). Base/rate vectors are aligned with the partition lists.
struct HomotopyState {
  double t = 1.0;
  Partition partition;
  WorkingFactor factor;  // factor of H[free, free] in working order
  Vector free_base, free_rate;
  Vector lower_base, lower_rate;
  Vector upper_base, upper_rate;
  int step_index = 0;
};

struct PasParams {
  double offset_margin = 1.0;  // strict-complementarity margin of the start
  double filter_eta = 1e-6;    // warm-start filtration threshold
  int step_cap_factor = 20;    // step cap = factor * max(n, 1)
  double pivot_rel_tol = 1e-12;
};

struct FilteredStart {
  Vector z;
  Partition partition;
};

struct DegenerateEvent {
  EventKind kind;
  int index;
  double t;
};

/// Optional per-run record used by tests and diagnostics.
struct PasSegment {
  double t_hi = 1.0;
  double t_lo = 0.0;
  Partition partition;
  Vector free_base, free_rate;
};

struct PasTrace {
  std::vector<PathEvent> accepted;
  std::vector<PasSegment> segments;
};

struct PasResult {
  Vector z;
  int steps = 0;  // accepted breakpoints
  std::uint64_t factor_flops = 0;  // total, including the initial factorization
  std::uint64_t update_flops = 0;  // add/remove updates only
  std::vector<DegenerateEvent> degenerate;
  KktResidual kkt;
};

/// The path tracker exceeded its step cap; suspected cycling.
class StepCapExceeded : public std::runtime_error {
 public:
  explicit StepCapExceeded(int steps);
};

/// Snaps components of y within eta*||y|| of a finite bound onto that bound
/// (the lower bound wins a double overlap) and classifies the rest as free,
/// ordered by sort_working_set.
FilteredStart filter_warm_start(const Vector& y, const Vector& lower,
                                const Vector& upper, double eta);

/// Linear-term offset w that makes z_hat optimal for
/// min 1/2 z'Hz + (f + w)'z with strict complementarity margin >= `margin`:
/// the gradient is cancelled on free components and shifted by a common
/// constant on each pinned set.
Vector build_homotopy_offset(const SymMatrix& h, const Vector& f,
                             const Vector& z_hat, const Partition& partition,
                             double margin);

/// Recomputes all base/rate vectors from the current partition and factor:
/// two solves with H[free, free] plus full-space matrix-vector products.
void refresh_coefficients(HomotopyState& s, const SymMatrix& h,
                          const Vector& f, const Vector& w,
                          const Vector& lower, const Vector& upper);

/// Largest event candidate at or below `t_ceiling` (with a hair of relative
/// slack so simultaneous events split across steps are not lost). Candidate
/// families, in priority order used for ties, then smallest index:
///   free hits lower:  t = (free_base_j - lower_j) / free_rate_j, rate < 0
///   free hits upper:  t = (free_base_j - upper_j) / free_rate_j, rate > 0
///   lower releases:   t = lower_base_j / lower_rate_j, rate < 0
///   upper releases:   t = upper_base_j / upper_rate_j, rate > 0
/// Infinite bounds produce no candidates. If every candidate is <= 0 the
/// path is linear down to t = 0 and kFinished is returned.
PathEvent next_breakpoint(const HomotopyState& s, const Vector& lower,
                          const Vector& upper, double t_ceiling);

/// Tentatively moves ev.index between sets, updates the factor (added
/// indices go to the end of the order), refreshes the coefficients and
/// validates the sign condition of the new segment at the moved index.
/// On success the state advances to ev.t_next and `true` is returned;
/// otherwise the state is left untouched and `false` is returned.
bool apply_event(HomotopyState& s, const SymMatrix& h, const Vector& f,
                 const Vector& w, const Vector& lower, const Vector& upper,
                 const PathEvent& ev);

/// Tracks the solution path from the filtered start z_hat (optimal at t=1
/// for the offset objective) down to t=0 and returns the minimizer of the
/// target problem. H must be positive definite.
PasResult pas_solve(const BqpProblem& p, const Vector& z_hat, Partition start,
                    const PasParams& params = {}, PasTrace* trace = nullptr);

}  // namespace boxqp

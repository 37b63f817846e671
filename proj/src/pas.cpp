#include "boxqp/pas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace boxqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int position_of(const std::vector<int>& v, int j) {
  const auto it = std::find(v.begin(), v.end(), j);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

int sorted_position_of(const std::vector<int>& v, int j) {
  const auto it = std::lower_bound(v.begin(), v.end(), j);
  return (it != v.end() && *it == j) ? static_cast<int>(it - v.begin()) : -1;
}

void insert_sorted(std::vector<int>& v, int j) {
  v.insert(std::lower_bound(v.begin(), v.end(), j), j);
}

Vector gather_values(const Vector& full, const std::vector<int>& idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = full(idx[i]);
  }
  return out;
}

int rank_of(EventKind kind) { return static_cast<int>(kind); }

}  // namespace

bool Partition::covers(int n) const {
  std::vector<char> seen(n, 0);
  const auto mark = [&](const std::vector<int>& set) {
    for (int j : set) {
      if (j < 0 || j >= n || seen[j]) return false;
      seen[j] = 1;
    }
    return true;
  };
  if (!mark(lower) || !mark(free) || !mark(upper)) return false;
  return lower.size() + free.size() + upper.size() == static_cast<std::size_t>(n);
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kFreeHitsLower:
      return "free_hits_lower";
    case EventKind::kFreeHitsUpper:
      return "free_hits_upper";
    case EventKind::kLowerReleases:
      return "lower_releases";
    case EventKind::kUpperReleases:
      return "upper_releases";
    case EventKind::kFinished:
      return "finished";
  }
  return "unknown";
}

StepCapExceeded::StepCapExceeded(int steps)
    : std::runtime_error("path tracking exceeded " + std::to_string(steps) +
                         " steps; suspected cycling") {}

FilteredStart filter_warm_start(const Vector& y, const Vector& lower,
                                const Vector& upper, double eta) {
  const double margin = eta * y.norm();
  FilteredStart out;
  out.z = y;
  std::vector<int> free_idx;
  for (int j = 0; j < y.size(); ++j) {
    if (std::isfinite(lower(j)) && y(j) <= lower(j) + margin) {
      out.z(j) = lower(j);
      out.partition.lower.push_back(j);
    } else if (std::isfinite(upper(j)) && y(j) >= upper(j) - margin) {
      out.z(j) = upper(j);
      out.partition.upper.push_back(j);
    } else {
      free_idx.push_back(j);
    }
  }
  out.partition.free = sort_working_set(out.z, lower, upper, free_idx);
  return out;
}

Vector build_homotopy_offset(const SymMatrix& h, const Vector& f,
                             const Vector& z_hat, const Partition& partition,
                             double margin) {
  const Vector g = h.mul(z_hat) + f;
  Vector w = Vector::Zero(g.size());
  for (int j : partition.free) w(j) = -g(j);
  if (!partition.lower.empty()) {
    double g_min = kInf;
    for (int j : partition.lower) g_min = std::min(g_min, g(j));
    const double shift = -g_min + margin;
    for (int j : partition.lower) w(j) = shift;
  }
  if (!partition.upper.empty()) {
    double g_max = -kInf;
    for (int j : partition.upper) g_max = std::max(g_max, g(j));
    const double shift = -g_max - margin;
    for (int j : partition.upper) w(j) = shift;
  }
  return w;
}

void refresh_coefficients(HomotopyState& s, const SymMatrix& h,
                          const Vector& f, const Vector& w,
                          const Vector& lower, const Vector& upper) {
  const Partition& part = s.partition;
  const int n = h.size();
  const int m = static_cast<int>(part.free.size());

  Vector pinned = Vector::Zero(n);
  for (int j : part.lower) pinned(j) = lower(j);
  for (int j : part.upper) pinned(j) = upper(j);
  const Vector h_pinned = h.mul(pinned);

  Vector rhs_base(m);
  Vector rhs_rate(m);
  for (int i = 0; i < m; ++i) {
    const int j = part.free[i];
    rhs_base(i) = -(h_pinned(j) + f(j));
    rhs_rate(i) = w(j);
  }
  s.free_base = s.factor.solve(rhs_base);
  s.free_rate = s.factor.solve(rhs_rate);

  // Gradient along the segment: g(t) = g0 - t * g_rate. The free components
  // of g0 and g_rate are exactly the residuals of the two systems, so one
  // refinement pass comes out of products we need anyway. It keeps
  // representable fixed points of the proximal map bit-stable, which matters
  // next to saddle points where deviations are amplified.
  Vector z0(n), rate_full(n), g0(n), g_rate(n);
  const auto assemble = [&] {
    z0 = pinned;
    rate_full.setZero();
    for (int i = 0; i < m; ++i) {
      z0(part.free[i]) = s.free_base(i);
      rate_full(part.free[i]) = s.free_rate(i);
    }
    g0 = h.mul(z0) + f;
    g_rate = h.mul(rate_full) - w;
  };
  assemble();
  if (m > 0) {
    Vector resid_base(m), resid_rate(m);
    for (int i = 0; i < m; ++i) {
      resid_base(i) = -g0(part.free[i]);
      resid_rate(i) = -g_rate(part.free[i]);
    }
    s.free_base += s.factor.solve(resid_base);
    s.free_rate += s.factor.solve(resid_rate);
    assemble();
  }

  s.lower_base = gather_values(g0, part.lower);
  s.lower_rate = gather_values(g_rate, part.lower);
  s.upper_base = gather_values(g0, part.upper);
  s.upper_rate = gather_values(g_rate, part.upper);
}

PathEvent next_breakpoint(const HomotopyState& s, const Vector& lower,
                          const Vector& upper, double t_ceiling) {
  // Inclusive ceiling: simultaneous events are processed one per step.
  const double limit = t_ceiling;

  PathEvent best;
  bool found = false;
  const auto consider = [&](EventKind kind, int index, double value) {
    if (!(value <= limit)) return;
    if (found) {
      if (value < best.t_next) return;
      if (value == best.t_next &&
          (rank_of(kind) > rank_of(best.kind) ||
           (rank_of(kind) == rank_of(best.kind) && index >= best.index))) {
        return;
      }
    }
    best = PathEvent{kind, index, value};
    found = true;
  };

  const Partition& part = s.partition;
  for (std::size_t i = 0; i < part.free.size(); ++i) {
    const int j = part.free[i];
    const double rate = s.free_rate(static_cast<Eigen::Index>(i));
    const double base = s.free_base(static_cast<Eigen::Index>(i));
    if (rate < 0.0 && std::isfinite(lower(j))) {
      consider(EventKind::kFreeHitsLower, j, (base - lower(j)) / rate);
    } else if (rate > 0.0 && std::isfinite(upper(j))) {
      consider(EventKind::kFreeHitsUpper, j, (base - upper(j)) / rate);
    }
  }
  for (std::size_t i = 0; i < part.lower.size(); ++i) {
    const double rate = s.lower_rate(static_cast<Eigen::Index>(i));
    if (rate < 0.0) {
      consider(EventKind::kLowerReleases, part.lower[i],
               s.lower_base(static_cast<Eigen::Index>(i)) / rate);
    }
  }
  for (std::size_t i = 0; i < part.upper.size(); ++i) {
    const double rate = s.upper_rate(static_cast<Eigen::Index>(i));
    if (rate > 0.0) {
      consider(EventKind::kUpperReleases, part.upper[i],
               s.upper_base(static_cast<Eigen::Index>(i)) / rate);
    }
  }

  if (!found || best.t_next <= 0.0) {
    return PathEvent{EventKind::kFinished, -1, 0.0};
  }
  return best;
}

bool apply_event(HomotopyState& s, const SymMatrix& h, const Vector& f,
                 const Vector& w, const Vector& lower, const Vector& upper,
                 const PathEvent& ev) {
  HomotopyState backup = s;
  Partition& part = s.partition;
  const int j = ev.index;

  switch (ev.kind) {
    case EventKind::kFreeHitsLower:
    case EventKind::kFreeHitsUpper: {
      const int pos = position_of(part.free, j);
      s.factor.remove_position(h, pos);
      part.free.erase(part.free.begin() + pos);
      if (ev.kind == EventKind::kFreeHitsLower) {
        insert_sorted(part.lower, j);
      } else {
        insert_sorted(part.upper, j);
      }
      break;
    }
    case EventKind::kLowerReleases:
    case EventKind::kUpperReleases: {
      auto& from = ev.kind == EventKind::kLowerReleases ? part.lower : part.upper;
      from.erase(from.begin() + sorted_position_of(from, j));
      part.free.push_back(j);
      s.factor.add_index(h, j);
      break;
    }
    case EventKind::kFinished:
      return true;
  }

  refresh_coefficients(s, h, f, w, lower, upper);

  // The new segment is valid when the moved component strictly obeys its new
  // role just below the breakpoint; by continuity this reduces to one sign.
  bool ok = false;
  switch (ev.kind) {
    case EventKind::kFreeHitsLower:
      ok = s.lower_rate(sorted_position_of(part.lower, j)) > 0.0;
      break;
    case EventKind::kFreeHitsUpper:
      ok = s.upper_rate(sorted_position_of(part.upper, j)) < 0.0;
      break;
    case EventKind::kLowerReleases:
      ok = s.free_rate(static_cast<Eigen::Index>(part.free.size()) - 1) > 0.0;
      break;
    case EventKind::kUpperReleases:
      ok = s.free_rate(static_cast<Eigen::Index>(part.free.size()) - 1) < 0.0;
      break;
    case EventKind::kFinished:
      break;
  }

  if (!ok) {
    s = std::move(backup);
    return false;
  }
  s.t = ev.t_next;
  ++s.step_index;
  return true;
}

PasResult pas_solve(const BqpProblem& p, const Vector& z_hat, Partition start,
                    const PasParams& params, PasTrace* trace) {
  const int n = p.size();
  if (!start.covers(n)) {
    throw std::invalid_argument("pas_solve: partition does not cover problem");
  }
  for (int j : start.lower) {
    if (!std::isfinite(p.lower(j))) {
      throw std::invalid_argument("pas_solve: infinite bound marked active");
    }
  }
  for (int j : start.upper) {
    if (!std::isfinite(p.upper(j))) {
      throw std::invalid_argument("pas_solve: infinite bound marked active");
    }
  }

  const Vector w =
      build_homotopy_offset(p.h, p.f, z_hat, start, params.offset_margin);

  HomotopyState s;
  s.partition = std::move(start);
  s.factor =
      WorkingFactor::factorize(p.h, s.partition.free, params.pivot_rel_tol);
  refresh_coefficients(s, p.h, p.f, w, p.lower, p.upper);
  const std::uint64_t initial_flops = s.factor.flops();

  PasResult res;
  double ceiling = s.t;
  const int cap = params.step_cap_factor * std::max(n, 1);

  for (int attempt = 0;; ++attempt) {
    if (attempt > cap) throw StepCapExceeded(cap);

    PathEvent ev = next_breakpoint(s, p.lower, p.upper, ceiling);
    // Keep the accepted sequence monotone when a coincident event's ratio
    // lands a few ulps above the previous breakpoint.
    if (ev.kind != EventKind::kFinished) ev.t_next = std::min(ev.t_next, s.t);
    if (ev.kind == EventKind::kFinished) {
      if (trace) {
        trace->segments.push_back(
            PasSegment{s.t, 0.0, s.partition, s.free_base, s.free_rate});
      }
      Vector z(n);
      for (int j : s.partition.lower) z(j) = p.lower(j);
      for (int j : s.partition.upper) z(j) = p.upper(j);
      for (std::size_t i = 0; i < s.partition.free.size(); ++i) {
        z(s.partition.free[i]) = s.free_base(static_cast<Eigen::Index>(i));
      }
      res.z = std::move(z);
      res.kkt = kkt_residual(p, res.z);
      res.factor_flops = s.factor.flops();
      res.update_flops = res.factor_flops - initial_flops;
      return res;
    }

    PasSegment ending;
    if (trace) {
      ending = PasSegment{s.t, ev.t_next, s.partition, s.free_base, s.free_rate};
    }
    if (apply_event(s, p.h, p.f, w, p.lower, p.upper, ev)) {
      ++res.steps;
      // Allow coincident events a hair above the new breakpoint; the nudge
      // below is an order of magnitude stronger, so a reverted event can
      // never be re-selected.
      ceiling = s.t + 1e-13 * s.t;
      if (trace) {
        trace->segments.push_back(std::move(ending));
        trace->accepted.push_back(ev);
      }
    } else {
      res.degenerate.push_back(DegenerateEvent{ev.kind, ev.index, ev.t_next});
      double nudged = ev.t_next - 1e-14 * std::abs(ev.t_next);
      if (nudged == ev.t_next) nudged = std::nextafter(ev.t_next, -kInf);
      ceiling = nudged;
    }
  }
}

}  // namespace boxqp

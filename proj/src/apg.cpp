#include "boxqp/apg.hpp"

#include <cmath>

namespace boxqp {

const char* to_string(ApgStop stop) {
  switch (stop) {
    case ApgStop::kActiveSetStable:
      return "active_set_stable";
    case ApgStop::kStepSmall:
      return "step_small";
    case ApgStop::kIterCap:
      return "iter_cap";
  }
  return "unknown";
}

Vector project_box(const Vector& z, const Vector& lower, const Vector& upper) {
  return z.cwiseMax(lower).cwiseMin(upper);
}

double estimate_lipschitz(const SymMatrix& h, double tol, int max_iter) {
  const int n = h.size();
  if (n == 0) return 0.0;
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector hv = h.mul(v);
    const double norm = hv.norm();
    if (norm == 0.0) return 0.0;
    v = hv / norm;
    if (std::abs(norm - estimate) <= tol * norm) {
      estimate = norm;
      break;
    }
    estimate = norm;
  }
  return 1.01 * estimate;
}

double next_momentum(double rho) {
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * rho * rho));
}

int stable_active_count(const Vector& y, const Vector& lower,
                        const Vector& upper, double eps) {
  const double margin = y.norm() * eps;
  int count = 0;
  for (int j = 0; j < y.size(); ++j) {
    const bool above = !std::isfinite(lower(j)) || y(j) > lower(j) + margin;
    const bool below = !std::isfinite(upper(j)) || y(j) < upper(j) - margin;
    if (above && below) ++count;
  }
  return count;
}

ApgResult apg_solve(const BqpProblem& p, const Vector& z0,
                    const ApgParams& params) {
  double lip = params.lipschitz;
  if (lip <= 0.0) lip = estimate_lipschitz(p.h);
  if (lip <= 0.0) lip = 1.0;  // zero matrix: any positive step bound works

  Vector y_prev = project_box(z0, p.lower, p.upper);
  Vector z = y_prev;
  double rho = 1.0;

  ApgResult res;
  res.y = y_prev;
  int prev_count = stable_active_count(y_prev, p.lower, p.upper,
                                       params.interior_margin);
  int stable_run = 0;

  for (int it = 1; it <= params.max_iter; ++it) {
    const Vector grad = p.gradient(z);
    Vector y = project_box(z - grad / lip, p.lower, p.upper);
    const double rho_next = next_momentum(rho);
    z = y + ((rho - 1.0) / rho_next) * (y - y_prev);
    rho = rho_next;

    res.iterations = it;
    const double step = (y - y_prev).norm();
    const double norm_y = y.norm();
    const int count =
        stable_active_count(y, p.lower, p.upper, params.interior_margin);
    stable_run = (count == prev_count) ? stable_run + 1 : 0;
    prev_count = count;
    y_prev = y;
    res.y = std::move(y);

    if (stable_run >= params.stability_window) {
      res.stop = ApgStop::kActiveSetStable;
      return res;
    }
    if (norm_y == 0.0 || step < params.step_tol * norm_y) {
      res.stop = ApgStop::kStepSmall;
      return res;
    }
  }
  res.stop = ApgStop::kIterCap;
  return res;
}

}  // namespace boxqp

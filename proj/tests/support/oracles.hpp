#pragma once

// Test-only reference machinery. The enumeration oracle solves box QPs by
// trying every lower/free/upper classification with a dense LDLT solve, so
// it shares no code with the working-factor path it is used to check.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "boxqp/problem.hpp"
#include "boxqp/rng.hpp"

namespace boxqp::testing {

struct OracleSolution {
  Vector x;
  double objective = 0.0;
};

/// Global minimizer of a strictly convex box QP by exhaustive classification
/// (3^n cases, n <= ~12). Classifications violating feasibility or the
/// first-order sign conditions by more than `tol` are rejected; among the
/// rest the lowest objective wins.
inline std::optional<OracleSolution> enumerate_box_qp(const BqpProblem& p,
                                                      double tol = 1e-9) {
  const int n = p.size();
  std::vector<int> state(n, 0);  // 0 = lower, 1 = free, 2 = upper
  std::optional<OracleSolution> best;

  for (;;) {
    bool admissible = true;
    std::vector<int> free_idx;
    Vector x(n);
    for (int j = 0; j < n && admissible; ++j) {
      if (state[j] == 0) {
        if (!std::isfinite(p.lower(j))) admissible = false;
        x(j) = p.lower(j);
      } else if (state[j] == 2) {
        if (!std::isfinite(p.upper(j))) admissible = false;
        x(j) = p.upper(j);
      } else {
        free_idx.push_back(j);
      }
    }

    if (admissible) {
      const int m = static_cast<int>(free_idx.size());
      if (m > 0) {
        Matrix hff(m, m);
        Vector rhs(m);
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) {
            hff(a, b) = p.h(free_idx[a], free_idx[b]);
          }
          double carry = 0.0;
          for (int j = 0; j < n; ++j) {
            if (state[j] != 1) carry += p.h(free_idx[a], j) * x(j);
          }
          rhs(a) = -(p.f(free_idx[a]) + carry);
        }
        const Vector xf = hff.ldlt().solve(rhs);
        for (int a = 0; a < m; ++a) x(free_idx[a]) = xf(a);
      }

      bool ok = true;
      for (int j = 0; j < n && ok; ++j) {
        if (state[j] == 1) {
          ok = x(j) >= p.lower(j) - tol && x(j) <= p.upper(j) + tol;
        }
      }
      if (ok) {
        const Vector g = p.gradient(x);
        for (int j = 0; j < n && ok; ++j) {
          if (state[j] == 0) {
            ok = g(j) >= -tol;
          } else if (state[j] == 2) {
            ok = g(j) <= tol;
          } else {
            ok = std::abs(g(j)) <= tol * (1.0 + g.cwiseAbs().maxCoeff());
          }
        }
        if (ok) {
          const double obj = p.objective(x);
          if (!best || obj < best->objective) {
            best = OracleSolution{std::move(x), obj};
          }
        }
      }
    }

    int pos = 0;
    while (pos < n && state[pos] == 2) state[pos++] = 0;
    if (pos == n) break;
    ++state[pos];
  }
  return best;
}

/// Well-conditioned random SPD problem with finite bounds straddling zero.
inline BqpProblem random_spd_box(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  }
  Matrix h = g.transpose() * g / n;
  h.diagonal().array() += 0.5 + rng.uniform01();
  Vector f(n), lower(n), upper(n);
  for (int j = 0; j < n; ++j) {
    f(j) = rng.normal();
    lower(j) = -(0.2 + rng.uniform01());
    upper(j) = 0.2 + rng.uniform01();
  }
  return BqpProblem{SymMatrix::from_dense(std::move(h)), std::move(f),
                    std::move(lower), std::move(upper),
                    Convexity::kStrictlyConvex};
}

/// Random symmetric, generally indefinite problem on a finite box.
inline BqpProblem random_indefinite_box(int n, Rng& rng) {
  Matrix b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) = rng.normal();
  }
  Matrix q = 0.5 * (b + b.transpose());
  Vector f(n), lower(n), upper(n);
  for (int j = 0; j < n; ++j) {
    f(j) = rng.normal();
    lower(j) = -(0.5 + rng.uniform01());
    upper(j) = 0.5 + rng.uniform01();
  }
  return BqpProblem{SymMatrix::from_dense(std::move(q)), std::move(f),
                    std::move(lower), std::move(upper), Convexity::kUnknown};
}

/// Random SPD matrix for factor tests.
inline SymMatrix random_spd_matrix(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  }
  Matrix h = g.transpose() * g / n;
  h.diagonal().array() += 0.5;
  return SymMatrix::from_dense(std::move(h));
}

}  // namespace boxqp::testing

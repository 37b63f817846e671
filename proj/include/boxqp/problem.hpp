#pragma once

#include <algorithm>

#include "boxqp/sym_matrix.hpp"

namespace boxqp {

enum class Convexity { kStrictlyConvex, kUnknown };

/// min 1/2 x'Hx + f'x subject to lower <= x <= upper.
/// Bounds may be -inf / +inf componentwise; lower[j] < upper[j] always.
struct BqpProblem {
  SymMatrix h;
  Vector f;
  Vector lower;
  Vector upper;
  Convexity convexity = Convexity::kUnknown;

  int size() const { return static_cast<int>(f.size()); }
  double objective(const Vector& x) const {
    return 0.5 * x.dot(h.mul(x)) + f.dot(x);
  }
  Vector gradient(const Vector& x) const { return h.mul(x) + f; }
  bool is_feasible(const Vector& x) const {
    return (x.array() >= lower.array()).all() &&
           (x.array() <= upper.array()).all();
  }
  /// Throws std::invalid_argument on dimension or bound violations.
  void validate() const;
};

struct KktResidual {
  double grad_inf = 0.0;        // inf-norm of the gradient over free components
  double sign_violation = 0.0;  // inf-norm of wrong-sign gradient on bounds
  double max() const { return std::max(grad_inf, sign_violation); }
};

/// First-order residual at a feasible point. Components are classified by
/// exact equality with their bounds: the gradient must vanish on free
/// components, be >= 0 where the lower bound holds and <= 0 where the upper
/// bound holds.
KktResidual kkt_residual(const BqpProblem& p, const Vector& x);

}  // namespace boxqp

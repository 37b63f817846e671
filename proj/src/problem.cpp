#include "boxqp/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace boxqp {

void BqpProblem::validate() const {
  const int n = size();
  if (h.size() != n || lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("BqpProblem: dimension mismatch");
  }
  for (int j = 0; j < n; ++j) {
    if (!(lower(j) < upper(j))) {
      throw std::invalid_argument("BqpProblem: lower bound must be below upper");
    }
    if (lower(j) == std::numeric_limits<double>::infinity() ||
        upper(j) == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("BqpProblem: bound closes the box");
    }
    if (std::isnan(lower(j)) || std::isnan(upper(j)) || !std::isfinite(f(j))) {
      throw std::invalid_argument("BqpProblem: non-finite data");
    }
  }
}

KktResidual kkt_residual(const BqpProblem& p, const Vector& x) {
  KktResidual r;
  const Vector g = p.gradient(x);
  for (int j = 0; j < p.size(); ++j) {
    if (x(j) == p.lower(j)) {
      r.sign_violation = std::max(r.sign_violation, -g(j));
    } else if (x(j) == p.upper(j)) {
      r.sign_violation = std::max(r.sign_violation, g(j));
    } else {
      r.grad_inf = std::max(r.grad_inf, std::abs(g(j)));
    }
  }
  r.sign_violation = std::max(r.sign_violation, 0.0);
  return r;
}

}  // namespace boxqp

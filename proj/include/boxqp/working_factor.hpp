#pragma once

#include <cstdint>
#include <stdexcept>

#include "boxqp/sym_matrix.hpp"

namespace boxqp {

/// A Cholesky pivot fell at or below the positive-definiteness floor.
/// `position` is the offending position in the (new) working order.
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(int position, double pivot);
  int position() const { return position_; }
  double pivot() const { return pivot_; }

 private:
  int position_;
  double pivot_;
};

/// Orders `free_indices` so that the bound margin
/// min(|z_j - lower_j|, |z_j - upper_j|) is non-increasing along the
/// sequence; infinite bounds count as +inf, ties break by ascending index.
/// Indices likely to leave the working set land at its tail, which keeps
/// later factor removals cheap.
std::vector<int> sort_working_set(const Vector& z, const Vector& lower,
                                  const Vector& upper,
                                  std::span<const int> free_indices);

/// Upper-triangular Cholesky factor R with R^T R = H[order, order],
/// maintained incrementally as indices are appended at the tail or removed
/// anywhere in the order.
///
/// Every build and update accumulates a floating-op count: a multiply-add
/// pair is 2, a division or square root is 1. The counter exists for
/// relative comparisons between orderings, not as a machine cost model.
/// Solves do not touch it.
class WorkingFactor {
 public:
  WorkingFactor() = default;

  /// Full factorization of H[order, order]. Fixes the pivot floor at
  /// pivot_rel_tol * max|diag(H)| for this factor and all later updates.
  static WorkingFactor factorize(const SymMatrix& h, std::vector<int> order,
                                 double pivot_rel_tol = 1e-12);

  /// Appends j (must not be present) at the end of the order: one
  /// triangular solve for the new column plus a corner square root.
  void add_index(const SymMatrix& h, int j);

  /// Removes the index at position `pos`. The leading block of R is kept;
  /// the trailing block is refactored from
  /// H[tail, tail] - R[head, tail]^T R[head, tail]. Removing the last
  /// position costs no trailing-block flops.
  void remove_position(const SymMatrix& h, int pos);

  /// Solves H[order, order] x = rhs through the factor.
  Vector solve(const Vector& rhs) const;

  const std::vector<int>& order() const { return order_; }
  const Matrix& upper() const { return r_; }
  int size() const { return static_cast<int>(order_.size()); }
  std::uint64_t flops() const { return flops_; }

 private:
  // Factors `a` (dense symmetric, overwritten) in place into its upper
  // Cholesky factor. Reports failures at `a`'s local position.
  static void cholesky_in_place(Matrix& a, double pivot_floor,
                                std::uint64_t& flops, int error_offset);

  std::vector<int> order_;
  Matrix r_;
  std::uint64_t flops_ = 0;
  double pivot_floor_ = 0.0;
};

}  // namespace boxqp

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace boxqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One entry of a coordinate-format matrix.
struct Triplet {
  int row;
  int col;
  double value;
};

/// Dense symmetric matrix with finite entries. Immutable after construction,
/// so it is safe to share read-only across concurrent solves.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Wraps a dense matrix. The input must satisfy
  /// max|M - M^T| <= sym_tol * (1 + max|M|); the stored entries are
  /// (M + M^T)/2 so that (i,j) and (j,i) are bitwise equal.
  static SymMatrix from_dense(Matrix m, double sym_tol = 1e-10);

  /// Accumulates coordinate entries. Off-diagonal entries are mirrored, so a
  /// lower- (or upper-) triangle listing is enough; duplicates add up.
  static SymMatrix from_triplets(int n, std::span<const Triplet> entries);

  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& dense() const { return m_; }
  double max_abs_diag() const { return max_abs_diag_; }
  /// max_i sum_j |H_ij|.
  double inf_norm() const { return inf_norm_; }

  Vector mul(const Vector& x) const { return m_ * x; }

  /// H[rows, cols] as a dense block.
  Matrix gather(std::span<const int> rows, std::span<const int> cols) const;
  /// Column j restricted to rows.
  Vector gather_col(std::span<const int> rows, int j) const;

 private:
  explicit SymMatrix(Matrix m);

  Matrix m_;
  double max_abs_diag_ = 0.0;
  double inf_norm_ = 0.0;
};

}  // namespace boxqp

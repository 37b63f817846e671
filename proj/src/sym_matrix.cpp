#include "boxqp/sym_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace boxqp {

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  const auto n = m_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(m_(i, j))) {
        throw std::invalid_argument("SymMatrix: non-finite entry");
      }
      row_sum += std::abs(m_(i, j));
    }
    inf_norm_ = std::max(inf_norm_, row_sum);
    max_abs_diag_ = std::max(max_abs_diag_, std::abs(m_(i, i)));
  }
}

SymMatrix SymMatrix::from_dense(Matrix m, double sym_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("SymMatrix: matrix not square");
  }
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol * scale) {
    throw std::invalid_argument("SymMatrix: matrix not symmetric");
  }
  Matrix sym = 0.5 * (m + m.transpose());
  return SymMatrix(std::move(sym));
}

SymMatrix SymMatrix::from_triplets(int n, std::span<const Triplet> entries) {
  if (n < 0) throw std::invalid_argument("SymMatrix: negative size");
  Matrix m = Matrix::Zero(n, n);
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
      throw std::invalid_argument("SymMatrix: triplet index out of range");
    }
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return SymMatrix(std::move(m));
}

Matrix SymMatrix::gather(std::span<const int> rows,
                         std::span<const int> cols) const {
  Matrix out(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m_(rows[i], cols[j]);
    }
  }
  return out;
}

Vector SymMatrix::gather_col(std::span<const int> rows, int j) const {
  Vector out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = m_(rows[i], j);
  }
  return out;
}

}  // namespace boxqp

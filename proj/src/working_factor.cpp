#include "boxqp/working_factor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace boxqp {

namespace {

std::string npd_message(int position, double pivot) {
  return "matrix not positive definite: pivot " + std::to_string(pivot) +
         " at position " + std::to_string(position);
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(int position, double pivot)
    : std::runtime_error(npd_message(position, pivot)),
      position_(position),
      pivot_(pivot) {}

std::vector<int> sort_working_set(const Vector& z, const Vector& lower,
                                  const Vector& upper,
                                  std::span<const int> free_indices) {
  const auto margin = [&](int j) {
    const double lo = std::isfinite(lower(j))
                          ? std::abs(z(j) - lower(j))
                          : std::numeric_limits<double>::infinity();
    const double hi = std::isfinite(upper(j))
                          ? std::abs(z(j) - upper(j))
                          : std::numeric_limits<double>::infinity();
    return std::min(lo, hi);
  };
  std::vector<int> order(free_indices.begin(), free_indices.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = margin(a);
    const double mb = margin(b);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  return order;
}

void WorkingFactor::cholesky_in_place(Matrix& a, double pivot_floor,
                                      std::uint64_t& flops,
                                      int error_offset) {
  const int m = static_cast<int>(a.rows());
  for (int k = 0; k < m; ++k) {
    double d = a(k, k);
    if (k > 0) {
      d -= a.col(k).head(k).squaredNorm();
      flops += 2 * static_cast<std::uint64_t>(k);
    }
    if (d <= pivot_floor) {
      throw NotPositiveDefinite(error_offset + k, d);
    }
    const double rkk = std::sqrt(d);
    flops += 1;
    a(k, k) = rkk;
    for (int j = k + 1; j < m; ++j) {
      double s = a(k, j);
      if (k > 0) {
        s -= a.col(k).head(k).dot(a.col(j).head(k));
        flops += 2 * static_cast<std::uint64_t>(k);
      }
      a(k, j) = s / rkk;
      flops += 1;
    }
    a.row(k).head(k).setZero();
  }
}

WorkingFactor WorkingFactor::factorize(const SymMatrix& h,
                                       std::vector<int> order,
                                       double pivot_rel_tol) {
  WorkingFactor f;
  f.pivot_floor_ = pivot_rel_tol * h.max_abs_diag();
  f.order_ = std::move(order);
  f.r_ = h.gather(f.order_, f.order_);
  cholesky_in_place(f.r_, f.pivot_floor_, f.flops_, 0);
  return f;
}

void WorkingFactor::add_index(const SymMatrix& h, int j) {
  const int m = size();
  Vector col = h.gather_col(order_, j);
  // Forward substitution R^T r = H[order, j].
  for (int i = 0; i < m; ++i) {
    double s = col(i);
    if (i > 0) {
      s -= r_.col(i).head(i).dot(col.head(i));
      flops_ += 2 * static_cast<std::uint64_t>(i);
    }
    col(i) = s / r_(i, i);
    flops_ += 1;
  }
  double d = h(j, j);
  if (m > 0) {
    d -= col.squaredNorm();
    flops_ += 2 * static_cast<std::uint64_t>(m);
  }
  if (d <= pivot_floor_) {
    throw NotPositiveDefinite(m, d);
  }
  const double corner = std::sqrt(d);
  flops_ += 1;

  r_.conservativeResize(m + 1, m + 1);
  r_.col(m).head(m) = col;
  r_.row(m).head(m).setZero();
  r_(m, m) = corner;
  order_.push_back(j);
}

void WorkingFactor::remove_position(const SymMatrix& h, int pos) {
  const int m = size();
  if (pos < 0 || pos >= m) {
    throw std::out_of_range("WorkingFactor: position out of range");
  }
  const int head = pos;
  const int tail = m - pos - 1;

  Matrix next(m - 1, m - 1);
  next.topLeftCorner(head, head) = r_.topLeftCorner(head, head);
  next.bottomLeftCorner(tail, head).setZero();

  if (tail > 0) {
    const std::span<const int> tail_idx(order_.data() + pos + 1, tail);
    Matrix trailing = h.gather(tail_idx, tail_idx);
    if (head > 0) {
      const auto coupling = r_.block(0, pos + 1, head, tail);
      trailing.noalias() -= coupling.transpose() * coupling;
      flops_ += 2 * static_cast<std::uint64_t>(head) * tail * tail;
      next.topRightCorner(head, tail) = coupling;
    }
    cholesky_in_place(trailing, pivot_floor_, flops_, head);
    next.bottomRightCorner(tail, tail) = trailing;
  }

  r_ = std::move(next);
  order_.erase(order_.begin() + pos);
}

Vector WorkingFactor::solve(const Vector& rhs) const {
  const int m = size();
  if (rhs.size() != m) {
    throw std::invalid_argument("WorkingFactor: rhs size mismatch");
  }
  Vector x = rhs;
  for (int i = 0; i < m; ++i) {
    if (i > 0) x(i) -= r_.col(i).head(i).dot(x.head(i));
    x(i) /= r_(i, i);
  }
  for (int i = m - 1; i >= 0; --i) {
    if (i < m - 1) {
      x(i) -= r_.row(i).tail(m - 1 - i).dot(x.tail(m - 1 - i));
    }
    x(i) /= r_(i, i);
  }
  return x;
}

}  // namespace boxqp

#include <doctest.h>

#include "boxqp/working_factor.hpp"
#include "support/oracles.hpp"

using namespace boxqp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double reconstruction_error(const WorkingFactor& f, const SymMatrix& h) {
  const Matrix sub = h.gather(f.order(), f.order());
  if (sub.rows() == 0) return 0.0;
  const Matrix diff = f.upper().transpose() * f.upper() - sub;
  const double scale = sub.norm();
  return diff.norm() / (scale > 0 ? scale : 1.0);
}

}  // namespace

TEST_CASE("sort_working_set orders by non-increasing bound margin") {
  SUBCASE("singleton") {
    Vector z(1), l(1), u(1);
    z << 0.5;
    l << 0.0;
    u << 1.0;
    const std::vector<int> free = {0};
    CHECK(sort_working_set(z, l, u, free) == std::vector<int>{0});
  }
  SUBCASE("margins with index tie-break") {
    Vector z(3), l = Vector::Zero(3), u = Vector::Ones(3);
    z << 0.1, 0.5, 0.9;
    const std::vector<int> free = {0, 1, 2};
    // margins 0.1, 0.5, 0.1: ties 0 and 2 break ascending
    CHECK(sort_working_set(z, l, u, free) == std::vector<int>{1, 0, 2});
  }
  SUBCASE("infinite upper bounds never shrink the margin") {
    Vector z(2), l = Vector::Zero(2), u = Vector::Constant(2, kInf);
    z << 0.3, 0.7;
    const std::vector<int> free = {0, 1};
    CHECK(sort_working_set(z, l, u, free) == std::vector<int>{1, 0});
  }
  SUBCASE("empty set") {
    Vector z(0), l(0), u(0);
    CHECK(sort_working_set(z, l, u, {}).empty());
  }
}

TEST_CASE("factorize") {
  SUBCASE("identity") {
    const SymMatrix h = SymMatrix::from_dense(Matrix::Identity(3, 3));
    const auto f = WorkingFactor::factorize(h, {0, 1, 2});
    CHECK(f.upper().isApprox(Matrix::Identity(3, 3)));
  }
  SUBCASE("2x2 by hand") {
    Matrix m(2, 2);
    m << 4, 2, 2, 3;
    const auto f = WorkingFactor::factorize(SymMatrix::from_dense(m), {0, 1});
    CHECK(f.upper()(0, 0) == doctest::Approx(2.0));
    CHECK(f.upper()(0, 1) == doctest::Approx(1.0));
    CHECK(f.upper()(1, 0) == 0.0);
    CHECK(f.upper()(1, 1) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("indefinite matrix reports the failing pivot") {
    Matrix m(2, 2);
    m << 1, 2, 2, 1;
    try {
      WorkingFactor::factorize(SymMatrix::from_dense(m), {0, 1});
      FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
      CHECK(e.position() == 1);
    }
  }
  SUBCASE("empty order") {
    const SymMatrix h = SymMatrix::from_dense(Matrix::Identity(2, 2));
    const auto f = WorkingFactor::factorize(h, {});
    CHECK(f.size() == 0);
    CHECK(f.flops() == 0);
  }
}

TEST_CASE("add_index") {
  SUBCASE("identity growth") {
    const SymMatrix h = SymMatrix::from_dense(Matrix::Identity(2, 2));
    auto f = WorkingFactor::factorize(h, {0});
    f.add_index(h, 1);
    CHECK(f.order() == std::vector<int>{0, 1});
    CHECK(f.upper().isApprox(Matrix::Identity(2, 2)));
  }
  SUBCASE("matches the full factorization") {
    Matrix m(2, 2);
    m << 4, 2, 2, 3;
    const SymMatrix h = SymMatrix::from_dense(m);
    auto f = WorkingFactor::factorize(h, {0});
    f.add_index(h, 1);
    const auto fresh = WorkingFactor::factorize(h, {0, 1});
    CHECK(f.upper().isApprox(fresh.upper(), 1e-14));
  }
  SUBCASE("near-singular corner fails") {
    Matrix m(2, 2);
    const double off = 1.0 - 1e-14;
    m << 1, off, off, 1;
    const SymMatrix h = SymMatrix::from_dense(m);
    auto f = WorkingFactor::factorize(h, {0});
    CHECK_THROWS_AS(f.add_index(h, 1), NotPositiveDefinite);
  }
}

TEST_CASE("remove_position") {
  Rng rng(42);
  SUBCASE("last position costs no trailing-block flops") {
    const SymMatrix h = testing::random_spd_matrix(5, rng);
    auto f = WorkingFactor::factorize(h, {0, 1, 2, 3, 4});
    const auto flops_before = f.flops();
    f.remove_position(h, 4);
    CHECK(f.flops() == flops_before);
    CHECK(f.order() == std::vector<int>{0, 1, 2, 3});
    CHECK(reconstruction_error(f, h) < 1e-12);
  }
  SUBCASE("identity head removal") {
    const SymMatrix h = SymMatrix::from_dense(Matrix::Identity(3, 3));
    auto f = WorkingFactor::factorize(h, {0, 1, 2});
    f.remove_position(h, 0);
    CHECK(f.order() == std::vector<int>{1, 2});
    CHECK(f.upper().isApprox(Matrix::Identity(2, 2)));
  }
  SUBCASE("interior removal matches a fresh factorization") {
    const SymMatrix h = testing::random_spd_matrix(6, rng);
    auto f = WorkingFactor::factorize(h, {0, 1, 2, 3, 4, 5});
    f.remove_position(h, 2);
    const auto fresh = WorkingFactor::factorize(h, f.order());
    CHECK((f.upper() - fresh.upper()).norm() <=
          1e-10 * (1.0 + fresh.upper().norm()));
  }
}

TEST_CASE("solve_with_factor") {
  SUBCASE("identity") {
    const SymMatrix h = SymMatrix::from_dense(Matrix::Identity(2, 2));
    const auto f = WorkingFactor::factorize(h, {0, 1});
    Vector rhs(2);
    rhs << 3, -1;
    CHECK(f.solve(rhs).isApprox(rhs));
  }
  SUBCASE("2x2 by hand") {
    Matrix m(2, 2);
    m << 4, 2, 2, 3;
    const auto f = WorkingFactor::factorize(SymMatrix::from_dense(m), {0, 1});
    Vector rhs(2);
    rhs << 6, 5;
    const Vector x = f.solve(rhs);
    CHECK(x(0) == doctest::Approx(1.0));
    CHECK(x(1) == doctest::Approx(1.0));
  }
  SUBCASE("empty system") {
    const SymMatrix h = SymMatrix::from_dense(Matrix::Identity(2, 2));
    const auto f = WorkingFactor::factorize(h, {});
    CHECK(f.solve(Vector(0)).size() == 0);
  }
  SUBCASE("residual stays small on random systems") {
    Rng rng(7);
    const SymMatrix h = testing::random_spd_matrix(12, rng);
    std::vector<int> order(12);
    for (int i = 0; i < 12; ++i) order[i] = i;
    const auto f = WorkingFactor::factorize(h, order);
    Vector rhs(12);
    for (int i = 0; i < 12; ++i) rhs(i) = rng.normal();
    const Vector x = f.solve(rhs);
    const double resid = (h.dense() * x - rhs).lpNorm<Eigen::Infinity>();
    CHECK(resid <= 1e-10 * (1.0 + rhs.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("interleaved add/remove sequences reconstruct the submatrix") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform01() * 27);
    const SymMatrix h = testing::random_spd_matrix(n, rng);

    std::vector<int> inside, outside;
    for (int j = 0; j < n; ++j) {
      (rng.uniform01() < 0.5 ? inside : outside).push_back(j);
    }
    auto f = WorkingFactor::factorize(h, inside);

    for (int op = 0; op < 20; ++op) {
      const bool do_add = outside.empty()
                              ? false
                              : (f.size() == 0 || rng.uniform01() < 0.5);
      if (do_add) {
        const std::size_t pick =
            static_cast<std::size_t>(rng.uniform01() * outside.size());
        f.add_index(h, outside[pick]);
        outside.erase(outside.begin() + pick);
      } else if (f.size() > 0) {
        const int pos = static_cast<int>(rng.uniform01() * f.size());
        outside.push_back(f.order()[pos]);
        f.remove_position(h, pos);
      }
      REQUIRE(reconstruction_error(f, h) < 1e-10);
    }
  }
}

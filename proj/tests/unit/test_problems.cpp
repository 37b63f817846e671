#include <doctest.h>

#include "boxqp/ppa.hpp"
#include "boxqp/problems.hpp"
#include "boxqp/solve.hpp"

using namespace boxqp;

namespace {

double psnr(const Vector& image, const Vector& truth) {
  const double mse = (image - truth).squaredNorm() / truth.size();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace

TEST_CASE("gen_random_nnls") {
  SUBCASE("zero-regularization problems have a zero-residual solution") {
    const GeneratedProblem gen = gen_random_nnls(40, 15, 1.0, 3, 0.0);
    const TwoStageResult r =
        solve_strictly_convex(gen.problem, Vector::Zero(15));
    const double resid = (gen.design * r.z - gen.rhs).norm();
    CHECK(resid <= 1e-8 * gen.rhs.norm());
    CHECK(r.pas.kkt.grad_inf <= 1e-9 * (1 + gen.problem.f.lpNorm<Eigen::Infinity>()));
  }
  SUBCASE("same seed reproduces the checksum") {
    const GeneratedProblem a = gen_random_nnls(30, 10, 0.5, 11, 0.1);
    const GeneratedProblem b = gen_random_nnls(30, 10, 0.5, 11, 0.1);
    CHECK(a.manifest.checksum == b.manifest.checksum);
    CHECK(a.problem.h.dense() == b.problem.h.dense());
    const GeneratedProblem c = gen_random_nnls(30, 10, 0.5, 12, 0.1);
    CHECK(a.manifest.checksum != c.manifest.checksum);
  }
  SUBCASE("dense medium instance satisfies the optimality signs") {
    const GeneratedProblem gen = gen_random_nnls(50, 20, 1.0, 5, 0.0);
    const TwoStageResult r =
        solve_strictly_convex(gen.problem, Vector::Zero(20));
    const KktResidual kkt = kkt_residual(gen.problem, r.z);
    const double scale = 1e-9 * (1 + gen.problem.f.lpNorm<Eigen::Infinity>());
    CHECK(kkt.grad_inf <= scale);
    CHECK(kkt.sign_violation <= scale);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(gen_random_nnls(5, 10, 1.0, 1, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(gen_random_nnls(10, 5, 1.5, 1, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("gen_deblur") {
  SUBCASE("identity kernel has the diagonal closed form") {
    const double beta = 0.001;
    const GeneratedProblem gen = gen_deblur(8, "identity", 0.0, beta, 1);
    const TwoStageResult r =
        solve_strictly_convex(gen.problem, Vector::Zero(64));
    const Vector expected = gen.truth / (1.0 + beta);
    CHECK((r.z - expected).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((r.z.array() >= 0.0).all());
  }
  SUBCASE("deblurred image beats the blurred one in psnr") {
    const GeneratedProblem gen = gen_deblur(16, "gaussian:3:1.0", 0.0, 1e-6, 2);
    const TwoStageResult r =
        solve_strictly_convex(gen.problem, Vector::Zero(256));
    CHECK(psnr(r.z, gen.truth) > psnr(gen.rhs, gen.truth));
  }
  SUBCASE("observation noise is seeded deterministically") {
    const GeneratedProblem a = gen_deblur(8, "gaussian:2:1.0", 0.01, 0.1, 5);
    const GeneratedProblem b = gen_deblur(8, "gaussian:2:1.0", 0.01, 0.1, 5);
    CHECK(a.manifest.checksum == b.manifest.checksum);
    CHECK(a.rhs == b.rhs);
  }
}

TEST_CASE("gen_random_ncbqp") {
  SUBCASE("large shift makes the problem strictly convex") {
    const GeneratedProblem gen = gen_random_ncbqp(30, 0.2, 200.0, 4);
    CHECK(estimate_min_eigenvalue(gen.problem.h) > 0.0);
  }
  SUBCASE("zero shift is indefinite on some seed") {
    const GeneratedProblem gen = gen_random_ncbqp(40, 0.2, 0.0, 4);
    CHECK(estimate_min_eigenvalue(gen.problem.h) < 0.0);
  }
  SUBCASE("box and determinism") {
    const GeneratedProblem a = gen_random_ncbqp(25, 0.1, 1.0, 9);
    const GeneratedProblem b = gen_random_ncbqp(25, 0.1, 1.0, 9);
    CHECK(a.manifest.checksum == b.manifest.checksum);
    CHECK((a.problem.lower.array() == 0.0).all());
    CHECK((a.problem.upper.array() == 10.0).all());
  }
}

TEST_CASE("gen_pde") {
  SUBCASE("unit-weight stencil matches the hand assembly on a 2x2 grid") {
    const GeneratedProblem gen = gen_pde(PdeKind::kTorsion, 2, 2);
    // h = 1/3; every edge carries (outer h^2/4) * (mu h^2/2) / h^2 twice.
    const double h = 1.0 / 3.0;
    const double edge = 2.0 * (h * h / 4.0) * (h * h / 2.0) / (h * h);
    Matrix expected(4, 4);
    expected << 4, -1, -1, 0,
                -1, 4, 0, -1,
                -1, 0, 4, -1,
                0, -1, -1, 4;
    expected *= edge;
    CHECK(gen.problem.h.dense().isApprox(expected, 1e-14));
    // linear term: -hx*hy*c at every interior node (default load 1)
    CHECK(gen.problem.f.isApprox(Vector::Constant(4, -h * h)));
  }
  SUBCASE("all kinds assemble positive definite forms") {
    for (const PdeKind kind : {PdeKind::kObstacleA, PdeKind::kObstacleB,
                               PdeKind::kTorsion, PdeKind::kJournal}) {
      const GeneratedProblem gen = gen_pde(kind, 6, 5);
      CHECK(estimate_min_eigenvalue(gen.problem.h) > 0.0);
      gen.problem.validate();
    }
  }
  SUBCASE("torsion admits the zero vector") {
    const GeneratedProblem gen = gen_pde(PdeKind::kTorsion, 7, 7);
    CHECK((gen.problem.lower.array() <= 0.0).all());
    CHECK((gen.problem.upper.array() >= 0.0).all());
  }
  SUBCASE("journal bearing needs a valid eccentricity") {
    PdeParams params;
    params.eccentricity = 1.5;
    CHECK_THROWS_AS(gen_pde(PdeKind::kJournal, 4, 4, params),
                    std::invalid_argument);
  }
}

TEST_CASE("manifest regeneration is bit-identical") {
  const GeneratedProblem cases[] = {
      gen_random_nnls(25, 10, 0.7, 21, 0.05),
      gen_deblur(8, "gaussian:2:0.8", 0.001, 0.01, 3),
      gen_random_ncbqp(20, 0.15, 1.0, 33),
      gen_pde(PdeKind::kJournal, 5, 6),
  };
  for (const GeneratedProblem& gen : cases) {
    const GeneratedProblem again = regenerate(gen.manifest);
    CHECK(again.manifest.checksum == gen.manifest.checksum);
    CHECK(problem_checksum(again.problem) == gen.manifest.checksum);
    CHECK(again.problem.h.dense() == gen.problem.h.dense());
    CHECK(again.problem.f == gen.problem.f);
  }
}

TEST_CASE("pde warm starts cost less with the sorted working order") {
  for (const PdeKind kind : {PdeKind::kObstacleA, PdeKind::kTorsion}) {
    const GeneratedProblem gen = gen_pde(kind, 12, 12);
    const ApgResult apg =
        apg_solve(gen.problem,
                  project_box(Vector::Zero(gen.problem.size()),
                              gen.problem.lower, gen.problem.upper),
                  ApgParams{});
    const PasResult sorted = finish_with_pas(gen.problem, apg.y, {}, true);
    const PasResult natural = finish_with_pas(gen.problem, apg.y, {}, false);
    CHECK(sorted.update_flops <= natural.update_flops);
    CHECK((sorted.z - natural.z).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

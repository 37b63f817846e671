#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "boxqp/io.hpp"
#include "boxqp/ppa.hpp"
#include "boxqp/problems.hpp"
#include "boxqp/solve.hpp"

namespace py = pybind11;
using namespace boxqp;

namespace {

BqpProblem make_problem(const Matrix& h, const Vector& f, const Vector& lower,
                        const Vector& upper, bool strictly_convex) {
  BqpProblem p{SymMatrix::from_dense(h), f, lower, upper,
               strictly_convex ? Convexity::kStrictlyConvex
                               : Convexity::kUnknown};
  p.validate();
  return p;
}

py::dict report_dict(const SolverReport& r) {
  py::dict d;
  d["x"] = r.x_star;
  d["outer_iters"] = r.outer_iters;
  d["inner_apg_iters"] = r.inner_apg_iters;
  d["pas_steps"] = r.pas_steps;
  d["accelerated_steps"] = r.accelerated_steps;
  d["objective"] = r.objective;
  d["kkt_grad_inf"] = r.kkt.grad_inf;
  d["kkt_sign_violation"] = r.kkt.sign_violation;
  d["chol_update_flops"] = r.chol_update_flops;
  d["gamma"] = r.gamma;
  d["apg_stop"] = r.apg_stop;
  d["step_norms"] = r.step_norms;
  return d;
}

PpaParams ppa_params(double shift_margin, std::optional<double> gamma,
                     double tol, double decrease_threshold, double switch_eps,
                     int switch_window, int max_outer) {
  PpaParams params;
  params.shift_margin = shift_margin;
  params.gamma = gamma;
  params.tol = tol;
  params.decrease_threshold = decrease_threshold;
  params.switch_eps = switch_eps;
  params.switch_window = switch_window;
  params.max_outer = max_outer;
  return params;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "two-stage solvers for box-constrained quadratic programs";

  py::class_<BqpProblem>(m, "BqpProblem")
      .def(py::init(&make_problem), py::arg("h"), py::arg("f"),
           py::arg("lower"), py::arg("upper"),
           py::arg("strictly_convex") = false)
      .def_property_readonly(
          "h", [](const BqpProblem& p) { return p.h.dense(); })
      .def_readonly("f", &BqpProblem::f)
      .def_readonly("lower", &BqpProblem::lower)
      .def_readonly("upper", &BqpProblem::upper)
      .def("objective", &BqpProblem::objective)
      .def("gradient", &BqpProblem::gradient)
      .def("__len__", &BqpProblem::size);

  m.def("project_box", &project_box, py::arg("z"), py::arg("lower"),
        py::arg("upper"));
  m.def(
      "estimate_lipschitz",
      [](const Matrix& h, double tol) {
        return estimate_lipschitz(SymMatrix::from_dense(h), tol);
      },
      py::arg("h"), py::arg("tol") = 1e-4);
  m.def(
      "kkt_residual",
      [](const BqpProblem& p, const Vector& x) {
        const KktResidual r = kkt_residual(p, x);
        return py::make_tuple(r.grad_inf, r.sign_violation);
      },
      py::arg("problem"), py::arg("x"));

  m.def(
      "apg_solve",
      [](const BqpProblem& p, std::optional<Vector> z0, double lipschitz,
         int stability_window, double interior_margin, double step_tol,
         int max_iter) {
        ApgParams params;
        params.lipschitz = lipschitz;
        params.stability_window = stability_window;
        params.interior_margin = interior_margin;
        params.step_tol = step_tol;
        params.max_iter = max_iter;
        const Vector start =
            z0 ? *z0 : project_box(Vector::Zero(p.size()), p.lower, p.upper);
        const ApgResult r = apg_solve(p, start, params);
        py::dict d;
        d["y"] = r.y;
        d["iterations"] = r.iterations;
        d["stop"] = to_string(r.stop);
        return d;
      },
      py::arg("problem"), py::arg("z0") = std::nullopt,
      py::arg("lipschitz") = 0.0, py::arg("stability_window") = 10,
      py::arg("interior_margin") = 1e-3, py::arg("step_tol") = 1e-6,
      py::arg("max_iter") = 5000);

  m.def(
      "solve",
      [](const BqpProblem& p, std::optional<Vector> z0, bool sort) {
        SolveOptions opts;
        opts.sort_working_set = sort;
        const Vector start =
            z0 ? *z0 : project_box(Vector::Zero(p.size()), p.lower, p.upper);
        const TwoStageResult r = solve_strictly_convex(p, start, opts);
        py::dict d;
        d["x"] = r.z;
        d["apg_iterations"] = r.apg.iterations;
        d["pas_steps"] = r.pas.steps;
        d["chol_update_flops"] = r.pas.update_flops;
        d["kkt_grad_inf"] = r.pas.kkt.grad_inf;
        d["kkt_sign_violation"] = r.pas.kkt.sign_violation;
        return d;
      },
      py::arg("problem"), py::arg("z0") = std::nullopt,
      py::arg("sort") = true,
      "two-stage solve of a strictly convex problem");

  m.def(
      "ppa_solve",
      [](const BqpProblem& p, std::optional<Vector> x0, double shift_margin,
         std::optional<double> gamma, double tol, double decrease_threshold,
         double switch_eps, int switch_window, int max_outer) {
        const Vector start =
            x0 ? *x0 : project_box(Vector::Zero(p.size()), p.lower, p.upper);
        return report_dict(
            ppa_solve(p, start,
                      ppa_params(shift_margin, gamma, tol, decrease_threshold,
                                 switch_eps, switch_window, max_outer)));
      },
      py::arg("problem"), py::arg("x0") = std::nullopt,
      py::arg("shift_margin") = -1.0, py::arg("gamma") = std::nullopt,
      py::arg("tol") = 1e-11, py::arg("decrease_threshold") = -1.0,
      py::arg("switch_eps") = 0.1, py::arg("switch_window") = 1,
      py::arg("max_outer") = 1000);

  m.def(
      "appa_solve",
      [](const BqpProblem& p, std::optional<Vector> x0, double shift_margin,
         std::optional<double> gamma, double tol, double decrease_threshold,
         double switch_eps, int switch_window, int max_outer) {
        const Vector start =
            x0 ? *x0 : project_box(Vector::Zero(p.size()), p.lower, p.upper);
        return report_dict(
            appa_solve(p, start,
                       ppa_params(shift_margin, gamma, tol,
                                  decrease_threshold, switch_eps,
                                  switch_window, max_outer)));
      },
      py::arg("problem"), py::arg("x0") = std::nullopt,
      py::arg("shift_margin") = -1.0, py::arg("gamma") = std::nullopt,
      py::arg("tol") = 1e-11, py::arg("decrease_threshold") = -1.0,
      py::arg("switch_eps") = 0.1, py::arg("switch_window") = 1,
      py::arg("max_outer") = 1000);

  const auto generated = [](GeneratedProblem g) {
    py::dict d;
    d["problem"] = std::move(g.problem);
    d["manifest"] = manifest_to_json(g.manifest);
    d["design"] = std::move(g.design);
    d["rhs"] = std::move(g.rhs);
    d["truth"] = std::move(g.truth);
    return d;
  };
  m.def(
      "gen_random_nnls",
      [generated](int m_, int n, double density, std::uint64_t seed,
                  double beta) {
        return generated(gen_random_nnls(m_, n, density, seed, beta));
      },
      py::arg("m"), py::arg("n"), py::arg("density") = 1.0,
      py::arg("seed") = 1, py::arg("beta") = 0.0);
  m.def(
      "gen_deblur",
      [generated](int n_side, const std::string& kernel, double noise_sigma,
                  double beta, std::uint64_t seed) {
        return generated(gen_deblur(n_side, kernel, noise_sigma, beta, seed));
      },
      py::arg("n_side"), py::arg("kernel") = "gaussian:4:1.5",
      py::arg("noise_sigma") = 0.0, py::arg("beta") = 0.001,
      py::arg("seed") = 1);
  m.def(
      "gen_random_ncbqp",
      [generated](int n, double density, double lambda_shift,
                  std::uint64_t seed) {
        return generated(gen_random_ncbqp(n, density, lambda_shift, seed));
      },
      py::arg("n"), py::arg("density") = 1.0, py::arg("lambda_shift") = 10.0,
      py::arg("seed") = 1);
  m.def(
      "gen_pde",
      [generated](const std::string& kind, int nx, int ny, double load,
                  double eccentricity, double half_height) {
        PdeParams params;
        params.load = load;
        params.eccentricity = eccentricity;
        params.half_height = half_height;
        PdeKind k;
        if (kind == "obstacle-a") {
          k = PdeKind::kObstacleA;
        } else if (kind == "obstacle-b") {
          k = PdeKind::kObstacleB;
        } else if (kind == "torsion") {
          k = PdeKind::kTorsion;
        } else if (kind == "journal") {
          k = PdeKind::kJournal;
        } else {
          throw std::invalid_argument("unknown pde kind: " + kind);
        }
        return generated(gen_pde(k, nx, ny, params));
      },
      py::arg("kind"), py::arg("nx"), py::arg("ny"), py::arg("load") = 1.0,
      py::arg("eccentricity") = 0.8, py::arg("half_height") = 10.0);
}

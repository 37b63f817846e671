#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "boxqp/bench.hpp"

namespace {

using namespace boxqp;

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 2;
constexpr int kExitInputError = 3;

struct GenerateArgs {
  std::string kind;
  std::string out_dir;
  int m = 0;
  int n = 0;
  int nx = 0;
  int ny = 0;
  std::uint64_t seed = 1;
  double density = -1.0;  // negative: per-kind default
  double beta = -1.0;
  double lambda_shift = -1.0;
  double load = -1.0;
  double eccentricity = 0.8;
  double half_height = 10.0;
  double noise_sigma = 0.001;
  std::string kernel = "gaussian:4:1.5";
};

double pick(double value, double fallback) {
  return value >= 0.0 ? value : fallback;
}

GeneratedProblem generate_problem(const GenerateArgs& a) {
  if (a.kind == "nnls-d" || a.kind == "nnls-s") {
    const double density = pick(a.density, a.kind == "nnls-d" ? 1.0 : 0.01);
    return gen_random_nnls(a.m, a.n, density, a.seed, pick(a.beta, 0.0));
  }
  if (a.kind == "deblur") {
    return gen_deblur(a.n, a.kernel, a.noise_sigma, pick(a.beta, 0.001),
                      a.seed);
  }
  if (a.kind == "ncbqp-d" || a.kind == "ncbqp-s") {
    const double density = pick(a.density, a.kind == "ncbqp-d" ? 1.0 : 0.01);
    const double lambda = pick(a.lambda_shift, a.kind == "ncbqp-d" ? 10.0 : 1.0);
    return gen_random_ncbqp(a.n, density, lambda, a.seed);
  }
  PdeParams params;
  params.eccentricity = a.eccentricity;
  params.half_height = a.half_height;
  if (a.kind == "obstacle-a") {
    params.load = pick(a.load, 1.0);
    return gen_pde(PdeKind::kObstacleA, a.nx, a.ny, params);
  }
  if (a.kind == "obstacle-b") {
    params.load = pick(a.load, 5.0);
    return gen_pde(PdeKind::kObstacleB, a.nx, a.ny, params);
  }
  if (a.kind == "torsion") {
    params.load = pick(a.load, 10.0);
    return gen_pde(PdeKind::kTorsion, a.nx, a.ny, params);
  }
  if (a.kind == "journal") {
    params.load = pick(a.load, 0.0);
    return gen_pde(PdeKind::kJournal, a.nx, a.ny, params);
  }
  throw std::invalid_argument("unknown problem kind: " + a.kind);
}

void add_solver_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--lipschitz", config.apg.lipschitz,
                  "gradient step bound L (0: estimate)");
  cmd->add_option("--stability-window", config.apg.stability_window,
                  "iterations the interior count must hold");
  cmd->add_option("--interior-margin", config.apg.interior_margin,
                  "relative margin of the interior count");
  cmd->add_option("--step-tol", config.apg.step_tol,
                  "relative step tolerance of the prediction stage");
  cmd->add_option("--apg-max-iter", config.apg.max_iter,
                  "prediction-stage iteration cap");
  cmd->add_option("--offset-margin", config.pas.offset_margin,
                  "strict-complementarity margin of the homotopy start");
  cmd->add_option("--filter-eta", config.pas.filter_eta,
                  "warm-start filtration threshold");
  cmd->add_option("--step-cap-factor", config.pas.step_cap_factor,
                  "path step cap as a multiple of n");
  cmd->add_option("--shift-margin", config.ppa.shift_margin,
                  "proximal weight margin delta (<0: scale-aware default)");
  double gamma = 0.0;
  cmd->add_option_function<double>(
         "--gamma", [&config](double g) { config.ppa.gamma = g; },
         "explicit proximal weight")
      ->expected(1);
  (void)gamma;
  cmd->add_option("--tol", config.ppa.tol, "outer step tolerance");
  cmd->add_option("--decrease-threshold", config.ppa.decrease_threshold,
                  "early-exit objective decrease (<0: scale-aware default)");
  cmd->add_option("--switch-eps", config.ppa.switch_eps,
                  "step-ratio flatness enabling acceleration");
  cmd->add_option("--switch-window", config.ppa.switch_window,
                  "flat ratio pairs required before accelerating");
  cmd->add_option("--max-outer", config.ppa.max_outer,
                  "outer iteration cap");
  cmd->add_option("--kkt-tol", config.kkt_tol,
                  "relative KKT threshold of the exit code");
  cmd->add_flag_callback(
      "--no-sort", [&config] { config.sort = false; },
      "natural working order instead of margin-sorted");
}

int cmd_generate(const GenerateArgs& args) {
  const GeneratedProblem gen = generate_problem(args);
  write_problem_dir(args.out_dir, gen.problem, gen.manifest);
  std::cout << "wrote " << args.out_dir << " (n=" << gen.problem.size()
            << ", checksum=" << std::hex << gen.manifest.checksum << std::dec
            << ")\n";
  return kExitOk;
}

int cmd_solve(const std::string& dir, const RunConfig& config,
              const std::string& out_path) {
  const LoadedProblem loaded = read_problem_dir(dir);
  const SolverReport report = run_algorithm(loaded.problem, config);
  const std::string text = report_to_json(report, config.to_json());
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << text;
  }
  if (!kkt_success(loaded.problem, report, config.kkt_tol)) {
    std::cerr << "kkt residual above threshold: grad_inf="
              << report.kkt.grad_inf
              << " sign_violation=" << report.kkt.sign_violation << "\n";
    return kExitSolverFailure;
  }
  return kExitOk;
}

int cmd_bench(const std::string& suite_path, const RunConfig& base,
              const std::string& out_csv) {
  const BenchSpec spec = parse_suite(suite_path);
  const int threads =
      std::max(1u, std::thread::hardware_concurrency());
  const std::vector<BenchRow> rows = run_bench(spec, base, threads);
  write_bench_csv(out_csv, rows);
  std::cout << "wrote " << rows.size() << " rows to " << out_csv << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"box-constrained quadratic programming toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  CLI::App* generate = app.add_subcommand("generate", "generate a problem");
  generate
      ->add_option("--kind", gen_args.kind,
                   "nnls-d|nnls-s|deblur|ncbqp-d|ncbqp-s|obstacle-a|"
                   "obstacle-b|torsion|journal")
      ->required();
  generate->add_option("--out", gen_args.out_dir, "output directory")
      ->required();
  generate->add_option("--m", gen_args.m, "rows of the design matrix");
  generate->add_option("--n", gen_args.n, "columns / variables / image side");
  generate->add_option("--nx", gen_args.nx, "interior grid width");
  generate->add_option("--ny", gen_args.ny, "interior grid height");
  generate->add_option("--seed", gen_args.seed, "random seed");
  generate->add_option("--density", gen_args.density, "nonzero density");
  generate->add_option("--beta", gen_args.beta, "Tikhonov weight");
  generate->add_option("--lambda", gen_args.lambda_shift, "diagonal shift");
  generate->add_option("--c", gen_args.load, "constant source term");
  generate->add_option("--eps", gen_args.eccentricity, "journal eccentricity");
  generate->add_option("--b", gen_args.half_height, "journal half height");
  generate->add_option("--noise", gen_args.noise_sigma, "observation noise");
  generate->add_option("--kernel", gen_args.kernel,
                       "blur kernel, identity or gaussian:<radius>:<sigma>");

  RunConfig solve_config;
  std::string solve_dir;
  std::string solve_out;
  CLI::App* solve = app.add_subcommand("solve", "solve a problem directory");
  solve->add_option("problem", solve_dir, "problem directory")->required();
  solve->add_option("--algo", solve_config.algorithm,
                    "apg-only|pas-only|apg-pas|ppa|appa");
  solve->add_option("--out", solve_out, "report path (default: stdout)");
  add_solver_options(solve, solve_config);

  RunConfig bench_config;
  std::string suite_path;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", suite_path, "suite JSON file")->required();
  bench->add_option("--out", bench_out, "output CSV path")->required();
  add_solver_options(bench, bench_config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen_args);
    if (solve->parsed()) return cmd_solve(solve_dir, solve_config, solve_out);
    return cmd_bench(suite_path, bench_config, bench_out);
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

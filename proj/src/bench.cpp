#include "boxqp/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace boxqp {

namespace {

using nlohmann::json;

const std::vector<std::string> kAlgorithms = {"apg-only", "pas-only",
                                              "apg-pas", "ppa", "appa"};

SolverReport report_from_two_stage(const BqpProblem& p,
                                   const TwoStageResult& run,
                                   double wall_time_s) {
  SolverReport report;
  report.x_star = run.z;
  report.outer_iters = 1;
  report.inner_apg_iters = run.apg.iterations;
  report.pas_steps = run.pas.steps;
  report.chol_update_flops = run.pas.update_flops;
  report.apg_stop = to_string(run.apg.stop);
  report.objective = p.objective(run.z);
  report.kkt = kkt_residual(p, run.z);
  report.step_norms.push_back(0.0);
  report.wall_time_s = wall_time_s;
  return report;
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), algorithm) ==
      kAlgorithms.end()) {
    throw std::invalid_argument("unknown algorithm: " + algorithm);
  }
  if (apg.max_iter < 1 || apg.stability_window < 1 ||
      apg.interior_margin <= 0.0 || apg.step_tol <= 0.0) {
    throw std::invalid_argument("bad prediction-stage parameters");
  }
  if (pas.offset_margin <= 0.0 || pas.filter_eta <= 0.0 ||
      pas.step_cap_factor < 1) {
    throw std::invalid_argument("bad path-tracking parameters");
  }
  if (ppa.tol <= 0.0 || ppa.max_outer < 1 || ppa.switch_window < 1 ||
      ppa.switch_eps <= 0.0) {
    throw std::invalid_argument("bad proximal-loop parameters");
  }
  if (ppa.gamma.has_value() && *ppa.gamma <= 0.0) {
    throw std::invalid_argument("explicit gamma must be positive");
  }
}

std::string RunConfig::to_json() const {
  json j;
  j["algorithm"] = algorithm;
  j["sort"] = sort;
  j["apg"] = {{"lipschitz", apg.lipschitz},
              {"stability_window", apg.stability_window},
              {"interior_margin", apg.interior_margin},
              {"step_tol", apg.step_tol},
              {"max_iter", apg.max_iter}};
  j["pas"] = {{"offset_margin", pas.offset_margin},
              {"filter_eta", pas.filter_eta},
              {"step_cap_factor", pas.step_cap_factor}};
  j["ppa"] = {{"shift_margin", ppa.shift_margin},
              {"tol", ppa.tol},
              {"decrease_threshold", ppa.decrease_threshold},
              {"switch_eps", ppa.switch_eps},
              {"switch_window", ppa.switch_window},
              {"max_outer", ppa.max_outer}};
  if (ppa.gamma.has_value()) j["ppa"]["gamma"] = *ppa.gamma;
  j["kkt_tol"] = kkt_tol;
  return j.dump();
}

SolverReport run_algorithm(const BqpProblem& p, const RunConfig& config) {
  config.validate();
  p.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  const Vector z0 = project_box(Vector::Zero(p.size()), p.lower, p.upper);

  SolveOptions inner;
  inner.apg = config.apg;
  inner.pas = config.pas;
  inner.sort_working_set = config.sort;

  if (config.algorithm == "apg-only") {
    const ApgResult apg = apg_solve(p, z0, config.apg);
    SolverReport report;
    report.x_star = apg.y;
    report.outer_iters = 1;
    report.inner_apg_iters = apg.iterations;
    report.apg_stop = to_string(apg.stop);
    report.objective = p.objective(apg.y);
    report.kkt = kkt_residual(p, apg.y);
    report.wall_time_s = elapsed();
    return report;
  }
  if (config.algorithm == "pas-only") {
    const PasResult pas = finish_with_pas(p, z0, config.pas, config.sort);
    SolverReport report;
    report.x_star = pas.z;
    report.outer_iters = 1;
    report.pas_steps = pas.steps;
    report.chol_update_flops = pas.update_flops;
    report.objective = p.objective(pas.z);
    report.kkt = pas.kkt;
    report.wall_time_s = elapsed();
    return report;
  }
  if (config.algorithm == "apg-pas") {
    const TwoStageResult run = solve_strictly_convex(p, z0, inner);
    return report_from_two_stage(p, run, elapsed());
  }

  PpaParams params = config.ppa;
  params.inner = inner;
  SolverReport report = config.algorithm == "ppa"
                            ? ppa_solve(p, z0, params)
                            : appa_solve(p, z0, params);
  report.wall_time_s = elapsed();
  return report;
}

bool kkt_success(const BqpProblem& p, const SolverReport& report,
                 double kkt_tol) {
  const double scale =
      1.0 + (p.f.size() > 0 ? p.f.cwiseAbs().maxCoeff() : 0.0);
  return report.kkt.grad_inf <= kkt_tol * scale &&
         report.kkt.sign_violation <= kkt_tol * scale;
}

BenchSpec parse_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read suite " + path.string());
  BenchSpec spec;
  try {
    const json j = json::parse(in);
    for (const auto& p : j.at("problems")) {
      spec.problem_dirs.push_back(p.get<std::string>());
    }
    for (const auto& a : j.at("algorithms")) {
      BenchCell cell;
      if (a.is_string()) {
        cell.algorithm = a.get<std::string>();
      } else {
        cell.algorithm = a.at("name").get<std::string>();
        cell.sort = a.value("sort", true);
      }
      spec.algorithms.push_back(std::move(cell));
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("bad suite file: ") + e.what());
  }
  if (spec.problem_dirs.empty() || spec.algorithms.empty()) {
    throw IoError("suite needs at least one problem and one algorithm");
  }
  return spec;
}

std::vector<BenchRow> run_bench(const BenchSpec& spec, const RunConfig& base,
                                int threads) {
  struct Cell {
    std::size_t problem;
    std::size_t algorithm;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < spec.problem_dirs.size(); ++p) {
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      cells.push_back(Cell{p, a});
    }
  }
  std::vector<BenchRow> rows(cells.size());

  if (const char* env = std::getenv("BQP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  threads = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      const Cell cell = cells[k];
      BenchRow& row = rows[k];
      row.problem = spec.problem_dirs[cell.problem];
      row.algorithm = spec.algorithms[cell.algorithm].algorithm;
      row.sort = spec.algorithms[cell.algorithm].sort;
      try {
        const LoadedProblem loaded = read_problem_dir(row.problem);
        RunConfig config = base;
        config.algorithm = row.algorithm;
        config.sort = row.sort;
        const SolverReport report = run_algorithm(loaded.problem, config);
        row.status = "ok";
        row.time_s = report.wall_time_s;
        row.outer_iters = report.outer_iters;
        row.apg_iters = report.inner_apg_iters;
        row.pas_steps = report.pas_steps;
        row.accelerated_steps = report.accelerated_steps;
        row.kkt_grad_inf = report.kkt.grad_inf;
        row.kkt_sign_violation = report.kkt.sign_violation;
        row.objective = report.objective;
        row.chol_update_flops = report.chol_update_flops;
      } catch (const std::exception& e) {
        row.status = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "problem,algorithm,sort,status,time_s,outer_iters,apg_iters,"
         "pas_steps,accelerated_steps,kkt_grad_inf,kkt_sign_violation,"
         "objective,chol_update_flops\n";
  char buf[64];
  const auto sci = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return std::string(buf);
  };
  for (const auto& row : rows) {
    std::string status = row.status;
    for (char& c : status) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << row.problem << ',' << row.algorithm << ','
        << (row.sort ? "true" : "false") << ',' << status << ','
        << sci(row.time_s) << ',' << row.outer_iters << ',' << row.apg_iters
        << ',' << row.pas_steps << ',' << row.accelerated_steps << ','
        << sci(row.kkt_grad_inf) << ',' << sci(row.kkt_sign_violation) << ','
        << sci(row.objective) << ',' << row.chol_update_flops << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace boxqp

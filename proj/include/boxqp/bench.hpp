#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "boxqp/io.hpp"

namespace boxqp {

/// Full run configuration of one solver invocation, shared by the solve and
/// bench front ends. Parameter compatibility is checked by validate().
struct RunConfig {
  std::string algorithm = "apg-pas";  // apg-only | pas-only | apg-pas | ppa | appa
  bool sort = true;                   // working-order initialization toggle
  ApgParams apg;
  PasParams pas;
  PpaParams ppa;
  double kkt_tol = 1e-8;  // relative success threshold of the exit code

  void validate() const;  // throws std::invalid_argument
  std::string to_json() const;
};

/// Dispatches one solve according to config.algorithm and fills a uniform
/// report. Solver failures propagate as exceptions.
SolverReport run_algorithm(const BqpProblem& p, const RunConfig& config);

/// True when the report meets the configured KKT threshold, relative to the
/// linear-term scale.
bool kkt_success(const BqpProblem& p, const SolverReport& report,
                 double kkt_tol);

struct BenchCell {
  std::string algorithm;
  bool sort = true;
};

struct BenchSpec {
  std::vector<std::string> problem_dirs;
  std::vector<BenchCell> algorithms;
};

/// Suite file: {"problems": [dir, ...], "algorithms": [name-or-object, ...]}
/// where an object form is {"name": ..., "sort": bool}.
BenchSpec parse_suite(const std::filesystem::path& path);

struct BenchRow {
  std::string problem;
  std::string algorithm;
  bool sort = true;
  std::string status;  // ok | <error text>
  double time_s = 0.0;
  int outer_iters = 0;
  long apg_iters = 0;
  long pas_steps = 0;
  int accelerated_steps = 0;
  double kkt_grad_inf = 0.0;
  double kkt_sign_violation = 0.0;
  double objective = 0.0;
  std::uint64_t chol_update_flops = 0;
};

/// Runs every (problem, algorithm) cell; failures become rows with an error
/// status. Cells run on up to `threads` workers (the BQP_THREADS environment
/// variable caps it); row order stays deterministic.
std::vector<BenchRow> run_bench(const BenchSpec& spec, const RunConfig& base,
                                int threads);

/// CSV with the fixed header:
/// problem,algorithm,sort,status,time_s,outer_iters,apg_iters,pas_steps,
/// accelerated_steps,kkt_grad_inf,kkt_sign_violation,objective,
/// chol_update_flops
void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows);

}  // namespace boxqp

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "boxqp/bench.hpp"
#include "boxqp/io.hpp"

using namespace boxqp;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("boxqp-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("matrix market round trip") {
  Matrix m(3, 3);
  m << 4.0, 1.5, 0.0,
       1.5, 3.0, -0.25,
       0.0, -0.25, 2.0;
  const SymMatrix sym = SymMatrix::from_dense(m);
  TempDir dir;
  const auto path = dir.path / "m.mtx";
  write_matrix_market(path, sym);
  const SymMatrix back = read_matrix_market(path);
  CHECK(back.dense() == sym.dense());
}

TEST_CASE("general-kind matrices read as symmetric") {
  TempDir dir;
  const auto path = dir.path / "g.mtx";
  std::ofstream(path) << "%%MatrixMarket matrix coordinate real general\n"
                         "2 2 4\n"
                         "1 1 2.0\n1 2 0.5\n2 1 0.5\n2 2 3.0\n";
  const SymMatrix m = read_matrix_market(path);
  CHECK(m(0, 1) == 0.5);
  CHECK(m(1, 0) == 0.5);
  CHECK(m(1, 1) == 3.0);
}

TEST_CASE("vector files carry infinities and full precision") {
  TempDir dir;
  Vector v(4);
  v << 0.1 + 0.2, -std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity(), -1.25e-17;
  const auto path = dir.path / "v.txt";
  write_vector(path, v);
  const Vector back = read_vector(path);
  REQUIRE(back.size() == 4);
  CHECK(back == v);
}

TEST_CASE("problem directory round trip") {
  const GeneratedProblem gen = gen_random_ncbqp(12, 0.3, 1.0, 17);
  TempDir dir;
  write_problem_dir(dir.path, gen.problem, gen.manifest);
  const LoadedProblem back = read_problem_dir(dir.path);
  CHECK(back.problem.h.dense() == gen.problem.h.dense());
  CHECK(back.problem.f == gen.problem.f);
  CHECK(back.problem.lower == gen.problem.lower);
  CHECK(back.problem.upper == gen.problem.upper);
  CHECK(back.manifest.kind == "ncbqp");
  CHECK(back.manifest.checksum == gen.manifest.checksum);
  CHECK(problem_checksum(back.problem) == gen.manifest.checksum);
}

TEST_CASE("manifest json round trip") {
  ProblemManifest m;
  m.kind = "nnls";
  m.seed = 42;
  m.m = 100;
  m.n = 30;
  m.density = 0.25;
  m.beta = 0.001;
  m.checksum = 0xdeadbeef12345678ULL;
  const ProblemManifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.kind == m.kind);
  CHECK(back.seed == m.seed);
  CHECK(back.m == m.m);
  CHECK(back.density == m.density);
  CHECK(back.checksum == m.checksum);
}

TEST_CASE("reports serialize as valid json") {
  const GeneratedProblem gen = gen_random_nnls(20, 8, 1.0, 2, 0.0);
  RunConfig config;
  config.algorithm = "apg-pas";
  const SolverReport report = run_algorithm(gen.problem, config);
  const std::string text = report_to_json(report, config.to_json());
  CHECK(text.find("\"kkt_grad_inf\"") != std::string::npos);
  CHECK(text.find("\"config\"") != std::string::npos);
  // kkt exit-code contract
  CHECK(kkt_success(gen.problem, report, 1e-8));
}

TEST_CASE("bench runs every cell and keeps deterministic order") {
  TempDir dir;
  std::vector<std::string> dirs;
  for (int i = 0; i < 3; ++i) {
    const GeneratedProblem gen = gen_random_ncbqp(10, 0.3, 1.0, 100 + i);
    const auto pdir = dir.path / ("p" + std::to_string(i));
    write_problem_dir(pdir, gen.problem, gen.manifest);
    dirs.push_back(pdir.string());
  }
  BenchSpec spec;
  spec.problem_dirs = dirs;
  spec.algorithms = {{"ppa", true}, {"appa", true}};

  const std::vector<BenchRow> rows = run_bench(spec, RunConfig{}, 2);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].problem == dirs[i / 2]);
    CHECK(rows[i].algorithm == (i % 2 == 0 ? "ppa" : "appa"));
    CHECK(rows[i].status == "ok");
  }

  const auto csv_path = dir.path / "out.csv";
  write_bench_csv(csv_path, rows);
  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "problem,algorithm,sort,status,time_s,outer_iters,apg_iters,"
        "pas_steps,accelerated_steps,kkt_grad_inf,kkt_sign_violation,"
        "objective,chol_update_flops");

  // a second run reproduces everything except timing
  const std::vector<BenchRow> rows2 = run_bench(spec, RunConfig{}, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows2[i].objective == rows[i].objective);
    CHECK(rows2[i].outer_iters == rows[i].outer_iters);
    CHECK(rows2[i].pas_steps == rows[i].pas_steps);
    CHECK(rows2[i].chol_update_flops == rows[i].chol_update_flops);
  }
}

TEST_CASE("missing problem directories surface as row failures") {
  BenchSpec spec;
  spec.problem_dirs = {"/nonexistent/problem"};
  spec.algorithms = {{"apg-pas", true}};
  const std::vector<BenchRow> rows = run_bench(spec, RunConfig{}, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status != "ok");
}

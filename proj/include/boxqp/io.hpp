#pragma once

#include <filesystem>
#include <string>

#include "boxqp/ppa.hpp"
#include "boxqp/problems.hpp"

namespace boxqp {

/// Input files could not be read or parsed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// MatrixMarket coordinate format, symmetric kind, lower-triangle entries,
/// full-precision scientific values. Zero entries are omitted.
void write_matrix_market(const std::filesystem::path& path, const SymMatrix& m);
/// Reads coordinate real matrices of symmetric or general kind (general
/// input must be symmetric up to roundoff).
SymMatrix read_matrix_market(const std::filesystem::path& path);

/// One value per line; infinite bounds as literal `inf` / `-inf`.
void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

std::string manifest_to_json(const ProblemManifest& m);
ProblemManifest manifest_from_json(const std::string& text);

/// Problem directory layout: Q.mtx, r.txt, l.txt, u.txt, manifest.json.
void write_problem_dir(const std::filesystem::path& dir, const BqpProblem& p,
                       const ProblemManifest& manifest);

struct LoadedProblem {
  BqpProblem problem;
  ProblemManifest manifest;
};
LoadedProblem read_problem_dir(const std::filesystem::path& dir);

/// Solver report as JSON, with the run configuration echoed under "config".
std::string report_to_json(const SolverReport& report,
                           const std::string& config_echo);

}  // namespace boxqp

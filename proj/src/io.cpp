#include "boxqp/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace boxqp {

namespace {

using nlohmann::json;

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

double parse_value(const std::string& token, const std::filesystem::path& path) {
  if (token == "inf" || token == "+inf") {
    return std::numeric_limits<double>::infinity();
  }
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad numeric value '" + token + "' in " + path.string());
  }
}

}  // namespace

void write_matrix_market(const std::filesystem::path& path,
                         const SymMatrix& m) {
  auto out = open_out(path);
  const int n = m.size();
  std::size_t nnz = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      if (m(i, j) != 0.0) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << ' ' << n << ' ' << nnz << '\n';
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      if (m(i, j) == 0.0) continue;
      out << (i + 1) << ' ' << (j + 1) << ' ' << full_precision(m(i, j))
          << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

SymMatrix read_matrix_market(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path.string());
  bool symmetric_kind = false;
  {
    std::istringstream banner(line);
    std::string tag, object, format, field, kind;
    banner >> tag >> object >> format >> field >> kind;
    if (tag != "%%MatrixMarket" || object != "matrix" ||
        format != "coordinate" || field != "real" ||
        (kind != "symmetric" && kind != "general")) {
      throw IoError("unsupported MatrixMarket header in " + path.string());
    }
    symmetric_kind = kind == "symmetric";
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(sizes >> rows >> cols >> nnz) || rows != cols || rows < 0) {
    throw IoError("bad size line in " + path.string());
  }
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) {
      throw IoError("truncated entries in " + path.string());
    }
    std::istringstream entry(line);
    long i = 0, j = 0;
    std::string value;
    if (!(entry >> i >> j >> value)) {
      throw IoError("bad entry line in " + path.string());
    }
    if (symmetric_kind && i < j) {
      throw IoError("upper-triangle entry in symmetric matrix " +
                    path.string());
    }
    // General input carries both triangles; map everything to the lower one.
    if (i < j) std::swap(i, j);
    entries.push_back(Triplet{static_cast<int>(i - 1),
                              static_cast<int>(j - 1),
                              parse_value(value, path)});
  }
  if (!symmetric_kind) {
    // Collapse the mirrored duplicates of general-kind files.
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    std::vector<Triplet> unique;
    for (const auto& e : entries) {
      if (!unique.empty() && unique.back().row == e.row &&
          unique.back().col == e.col) {
        if (unique.back().value != e.value) {
          throw IoError("asymmetric general matrix in " + path.string());
        }
        continue;
      }
      unique.push_back(e);
    }
    entries = std::move(unique);
  }
  return SymMatrix::from_triplets(static_cast<int>(rows), entries);
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v(i);
    if (x == std::numeric_limits<double>::infinity()) {
      out << "inf\n";
    } else if (x == -std::numeric_limits<double>::infinity()) {
      out << "-inf\n";
    } else {
      out << full_precision(x) << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Vector read_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    std::string token;
    std::istringstream(line) >> token;
    if (token.empty()) continue;
    values.push_back(parse_value(token, path));
  }
  return Eigen::Map<Vector>(values.data(),
                            static_cast<Eigen::Index>(values.size()));
}

std::string manifest_to_json(const ProblemManifest& m) {
  json j;
  j["kind"] = m.kind;
  j["seed"] = m.seed;
  j["m"] = m.m;
  j["n"] = m.n;
  j["nx"] = m.nx;
  j["ny"] = m.ny;
  j["density"] = m.density;
  j["beta"] = m.beta;
  j["lambda_shift"] = m.lambda_shift;
  j["load"] = m.load;
  j["eccentricity"] = m.eccentricity;
  j["half_height"] = m.half_height;
  j["noise_sigma"] = m.noise_sigma;
  j["kernel"] = m.kernel;
  char checksum[24];
  std::snprintf(checksum, sizeof(checksum), "%016" PRIx64, m.checksum);
  j["checksum"] = checksum;
  return j.dump(2) + "\n";
}

ProblemManifest manifest_from_json(const std::string& text) {
  ProblemManifest m;
  try {
    const json j = json::parse(text);
    m.kind = j.at("kind").get<std::string>();
    m.seed = j.value("seed", std::uint64_t{0});
    m.m = j.value("m", 0);
    m.n = j.value("n", 0);
    m.nx = j.value("nx", 0);
    m.ny = j.value("ny", 0);
    m.density = j.value("density", 1.0);
    m.beta = j.value("beta", 0.0);
    m.lambda_shift = j.value("lambda_shift", 0.0);
    m.load = j.value("load", 1.0);
    m.eccentricity = j.value("eccentricity", 0.8);
    m.half_height = j.value("half_height", 10.0);
    m.noise_sigma = j.value("noise_sigma", 0.0);
    m.kernel = j.value("kernel", std::string{});
    if (j.contains("checksum")) {
      m.checksum =
          std::stoull(j.at("checksum").get<std::string>(), nullptr, 16);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("bad manifest: ") + e.what());
  }
  return m;
}

void write_problem_dir(const std::filesystem::path& dir, const BqpProblem& p,
                       const ProblemManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_matrix_market(dir / "Q.mtx", p.h);
  write_vector(dir / "r.txt", p.f);
  write_vector(dir / "l.txt", p.lower);
  write_vector(dir / "u.txt", p.upper);
  open_out(dir / "manifest.json") << manifest_to_json(manifest);
}

LoadedProblem read_problem_dir(const std::filesystem::path& dir) {
  LoadedProblem out;
  out.problem.h = read_matrix_market(dir / "Q.mtx");
  out.problem.f = read_vector(dir / "r.txt");
  out.problem.lower = read_vector(dir / "l.txt");
  out.problem.upper = read_vector(dir / "u.txt");
  std::ifstream in(dir / "manifest.json");
  if (in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    out.manifest = manifest_from_json(buffer.str());
  } else {
    out.manifest.kind = "unknown";
  }
  // Families with an indefinite matrix must go through the proximal loop.
  out.problem.convexity = out.manifest.kind == "ncbqp" ||
                                  out.manifest.kind == "unknown"
                              ? Convexity::kUnknown
                              : Convexity::kStrictlyConvex;
  out.problem.validate();
  return out;
}

std::string report_to_json(const SolverReport& report,
                           const std::string& config_echo) {
  json j;
  j["outer_iters"] = report.outer_iters;
  j["inner_apg_iters"] = report.inner_apg_iters;
  j["pas_steps"] = report.pas_steps;
  j["accelerated_steps"] = report.accelerated_steps;
  j["objective"] = report.objective;
  j["kkt_grad_inf"] = report.kkt.grad_inf;
  j["kkt_sign_violation"] = report.kkt.sign_violation;
  j["chol_update_flops"] = report.chol_update_flops;
  j["wall_time_s"] = report.wall_time_s;
  j["gamma"] = report.gamma;
  j["apg_stop"] = report.apg_stop;
  j["x_star"] = std::vector<double>(
      report.x_star.data(), report.x_star.data() + report.x_star.size());
  j["step_norms"] = report.step_norms;
  j["config"] = json::parse(config_echo);
  return j.dump(2) + "\n";
}

}  // namespace boxqp

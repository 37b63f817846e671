#include "boxqp/problems.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "boxqp/rng.hpp"

namespace boxqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Entries kept with probability `density`; the mask uniform is drawn before
// the value normal so the stream layout is reproducible.
Matrix random_sparse_normal(int rows, int cols, double density, Rng& rng) {
  Matrix a = Matrix::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (density < 1.0 && rng.uniform01() >= density) continue;
      a(i, j) = rng.normal();
    }
  }
  return a;
}

std::uint64_t matrix_checksum(std::uint64_t state, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      state = fnv1a64(std::span<const double>(&v, 1), state);
    }
  }
  return state;
}

// 1-D blur matrix of a symmetric kernel with reflexive boundary: indices
// past an edge fold back as -1 -> 0, n -> n-1.
Matrix blur_matrix_1d(int n, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size()) / 2;
  Matrix t = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int d = -radius; d <= radius; ++d) {
      int j = i + d;
      if (j < 0) j = -j - 1;
      if (j >= n) j = 2 * n - 1 - j;
      t(i, j) += kernel[static_cast<std::size_t>(d + radius)];
    }
  }
  return t;
}

std::vector<double> parse_kernel(const std::string& spec) {
  if (spec == "identity") return {1.0};
  std::istringstream in(spec);
  std::string name;
  std::getline(in, name, ':');
  if (name != "gaussian") {
    throw std::invalid_argument("unknown blur kernel: " + spec);
  }
  std::string radius_s, sigma_s;
  std::getline(in, radius_s, ':');
  std::getline(in, sigma_s, ':');
  const int radius = std::stoi(radius_s);
  const double sigma = std::stod(sigma_s);
  if (radius < 0 || sigma <= 0.0) {
    throw std::invalid_argument("bad blur kernel: " + spec);
  }
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    const double v = std::exp(-0.5 * (d / sigma) * (d / sigma));
    k[static_cast<std::size_t>(d + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

Vector checkerboard(int n_side) {
  const int block = std::max(1, n_side / 8);
  Vector x(n_side * n_side);
  for (int col = 0; col < n_side; ++col) {
    for (int row = 0; row < n_side; ++row) {
      const int parity = (row / block + col / block) % 2;
      x(col * n_side + row) = parity ? 1.0 : 0.0;
    }
  }
  return x;
}

}  // namespace

std::uint64_t problem_checksum(const BqpProblem& p) {
  const double n = static_cast<double>(p.size());
  std::uint64_t state = fnv1a64(std::span<const double>(&n, 1));
  state = matrix_checksum(state, p.h.dense());
  state = fnv1a64(std::span<const double>(p.f.data(),
                                          static_cast<std::size_t>(p.f.size())),
                  state);
  state = fnv1a64(
      std::span<const double>(p.lower.data(),
                              static_cast<std::size_t>(p.lower.size())),
      state);
  state = fnv1a64(
      std::span<const double>(p.upper.data(),
                              static_cast<std::size_t>(p.upper.size())),
      state);
  return state;
}

GeneratedProblem gen_random_nnls(int m, int n, double density,
                                 std::uint64_t seed, double beta) {
  if (m <= n || n < 1) {
    throw std::invalid_argument("gen_random_nnls: need m > n >= 1");
  }
  if (density <= 0.0 || density > 1.0) {
    throw std::invalid_argument("gen_random_nnls: density must be in (0, 1]");
  }
  if (beta < 0.0) throw std::invalid_argument("gen_random_nnls: beta < 0");

  Rng rng(seed);
  GeneratedProblem out;
  out.design = random_sparse_normal(m, n, density, rng);
  Vector planted(n);
  for (int j = 0; j < n; ++j) planted(j) = std::max(rng.normal(), 0.0);
  out.rhs = out.design * planted;

  Matrix h = out.design.transpose() * out.design;
  h.diagonal().array() += beta;
  out.problem = BqpProblem{SymMatrix::from_dense(std::move(h)),
                           -out.design.transpose() * out.rhs,
                           Vector::Zero(n), Vector::Constant(n, kInf),
                           Convexity::kStrictlyConvex};

  out.manifest.kind = "nnls";
  out.manifest.seed = seed;
  out.manifest.m = m;
  out.manifest.n = n;
  out.manifest.density = density;
  out.manifest.beta = beta;
  out.manifest.checksum = problem_checksum(out.problem);
  return out;
}

GeneratedProblem gen_deblur(int n_side, const std::string& kernel,
                            double noise_sigma, double beta,
                            std::uint64_t seed) {
  if (n_side < 2 || n_side > 64) {
    throw std::invalid_argument("gen_deblur: image side must be in [2, 64]");
  }
  if (beta <= 0.0) throw std::invalid_argument("gen_deblur: beta must be > 0");

  const auto taps = parse_kernel(kernel);
  const Matrix t = blur_matrix_1d(n_side, taps);
  const int n = n_side * n_side;

  Rng rng(seed);
  GeneratedProblem out;
  out.truth = checkerboard(n_side);

  // A = kron(T, T) acting on column-stacked images: y = vec(T X T').
  const Eigen::Map<const Matrix> truth_img(out.truth.data(), n_side, n_side);
  Matrix blurred = t * truth_img * t.transpose();
  out.rhs = Eigen::Map<Vector>(blurred.data(), n);
  for (int i = 0; i < n; ++i) out.rhs(i) += noise_sigma * rng.normal();

  // A'A = kron(T'T, T'T); A'y = vec(T' Y T).
  const Matrix tt = t.transpose() * t;
  Matrix h(n, n);
  for (int bc = 0; bc < n_side; ++bc) {
    for (int br = 0; br < n_side; ++br) {
      h.block(br * n_side, bc * n_side, n_side, n_side) = tt(br, bc) * tt;
    }
  }
  h.diagonal().array() += beta;
  const Eigen::Map<const Matrix> obs_img(out.rhs.data(), n_side, n_side);
  Matrix aty = t.transpose() * obs_img * t;
  Vector f = -Eigen::Map<Vector>(aty.data(), n);

  out.design = Matrix::Zero(n, n);
  for (int bc = 0; bc < n_side; ++bc) {
    for (int br = 0; br < n_side; ++br) {
      out.design.block(br * n_side, bc * n_side, n_side, n_side) =
          t(br, bc) * t;
    }
  }

  out.problem =
      BqpProblem{SymMatrix::from_dense(std::move(h)), std::move(f),
                 Vector::Zero(n), Vector::Constant(n, kInf),
                 Convexity::kStrictlyConvex};

  out.manifest.kind = "deblur";
  out.manifest.seed = seed;
  out.manifest.n = n_side;
  out.manifest.beta = beta;
  out.manifest.noise_sigma = noise_sigma;
  out.manifest.kernel = kernel;
  out.manifest.checksum = problem_checksum(out.problem);
  return out;
}

GeneratedProblem gen_random_ncbqp(int n, double density, double lambda_shift,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random_ncbqp: n >= 1 required");
  if (density <= 0.0 || density > 1.0) {
    throw std::invalid_argument("gen_random_ncbqp: density must be in (0, 1]");
  }

  Rng rng(seed);
  GeneratedProblem out;
  Matrix b = random_sparse_normal(n, n, density, rng);
  Matrix q = b + b.transpose();
  q.diagonal().array() += lambda_shift;
  Vector r(n);
  for (int j = 0; j < n; ++j) r(j) = rng.normal();

  out.problem = BqpProblem{SymMatrix::from_dense(std::move(q)), std::move(r),
                           Vector::Zero(n), Vector::Constant(n, 10.0),
                           Convexity::kUnknown};

  out.manifest.kind = "ncbqp";
  out.manifest.seed = seed;
  out.manifest.n = n;
  out.manifest.density = density;
  out.manifest.lambda_shift = lambda_shift;
  out.manifest.checksum = problem_checksum(out.problem);
  return out;
}

GeneratedProblem gen_pde(PdeKind kind, int nx, int ny,
                         const PdeParams& params) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("gen_pde: nx, ny >= 2");
  if (kind == PdeKind::kJournal &&
      (params.eccentricity <= 0.0 || params.eccentricity >= 1.0)) {
    throw std::invalid_argument("gen_pde: eccentricity must be in (0, 1)");
  }

  // Domain extents.
  double x_len = 1.0;
  double y_len = 1.0;
  if (kind == PdeKind::kJournal) {
    x_len = 2.0 * std::numbers::pi;
    y_len = 2.0 * params.half_height;
  }
  const double hx = x_len / (nx + 1);
  const double hy = y_len / (ny + 1);
  const int n = nx * ny;

  const auto weight = [&](int i, int j) {
    if (kind != PdeKind::kJournal) return 1.0;
    (void)j;
    const double c = 1.0 + params.eccentricity * std::cos(i * hx);
    return c * c * c;
  };
  const auto source = [&](int i, int j) {
    if (kind != PdeKind::kJournal) return params.load;
    (void)j;
    return params.eccentricity * std::sin(i * hx);
  };
  // Index of an interior grid point; -1 marks the zero boundary.
  const auto id = [&](int i, int j) {
    if (i < 1 || i > nx || j < 1 || j > ny) return -1;
    return (j - 1) * nx + (i - 1);
  };

  Matrix h = Matrix::Zero(n, n);
  const auto add_pair = [&](int a, int b, double c) {
    // c * (v_a - v_b)^2 with zero boundary values.
    if (a >= 0) h(a, a) += c;
    if (b >= 0) h(b, b) += c;
    if (a >= 0 && b >= 0) {
      h(a, b) -= c;
      h(b, a) -= c;
    }
  };

  const double outer = hx * hy / 4.0;
  const double wscale = hx * hy / 6.0;
  // Forward differences over lower-left triangles, backward over upper-right.
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j <= ny; ++j) {
      const double mu =
          wscale * (weight(i + 1, j) + weight(i, j) + weight(i, j + 1));
      add_pair(id(i + 1, j), id(i, j), outer * mu / (hx * hx));
      add_pair(id(i, j + 1), id(i, j), outer * mu / (hy * hy));
    }
  }
  for (int i = 1; i <= nx + 1; ++i) {
    for (int j = 1; j <= ny + 1; ++j) {
      const double la =
          wscale * (weight(i - 1, j) + weight(i, j) + weight(i, j - 1));
      add_pair(id(i - 1, j), id(i, j), outer * la / (hx * hx));
      add_pair(id(i, j - 1), id(i, j), outer * la / (hy * hy));
    }
  }

  Vector f(n), lower(n), upper(n);
  for (int i = 1; i <= nx; ++i) {
    for (int j = 1; j <= ny; ++j) {
      const int k = id(i, j);
      const double x = i * hx;
      const double y = j * hy;
      f(k) = -hx * hy * source(i, j);
      switch (kind) {
        case PdeKind::kObstacleA:
          lower(k) = std::sin(3.2 * x) * std::sin(3.2 * y);
          upper(k) = 2000.0;
          break;
        case PdeKind::kObstacleB: {
          const double s = std::sin(9.3 * x) * std::sin(9.3 * y);
          lower(k) = s * s * s;
          upper(k) = s * s + 0.02;
          break;
        }
        case PdeKind::kTorsion: {
          const double dist = std::min(std::min(x, 1.0 - x), std::min(y, 1.0 - y));
          lower(k) = -dist;
          upper(k) = dist;
          break;
        }
        case PdeKind::kJournal:
          lower(k) = 0.0;
          upper(k) = kInf;
          break;
      }
    }
  }

  GeneratedProblem out;
  out.problem =
      BqpProblem{SymMatrix::from_dense(std::move(h)), std::move(f),
                 std::move(lower), std::move(upper),
                 Convexity::kStrictlyConvex};

  switch (kind) {
    case PdeKind::kObstacleA:
      out.manifest.kind = "obstacle-a";
      break;
    case PdeKind::kObstacleB:
      out.manifest.kind = "obstacle-b";
      break;
    case PdeKind::kTorsion:
      out.manifest.kind = "torsion";
      break;
    case PdeKind::kJournal:
      out.manifest.kind = "journal";
      break;
  }
  out.manifest.nx = nx;
  out.manifest.ny = ny;
  out.manifest.load = params.load;
  out.manifest.eccentricity = params.eccentricity;
  out.manifest.half_height = params.half_height;
  out.manifest.checksum = problem_checksum(out.problem);
  return out;
}

GeneratedProblem regenerate(const ProblemManifest& manifest) {
  GeneratedProblem out;
  if (manifest.kind == "nnls") {
    out = gen_random_nnls(manifest.m, manifest.n, manifest.density,
                          manifest.seed, manifest.beta);
  } else if (manifest.kind == "deblur") {
    out = gen_deblur(manifest.n, manifest.kernel, manifest.noise_sigma,
                     manifest.beta, manifest.seed);
  } else if (manifest.kind == "ncbqp") {
    out = gen_random_ncbqp(manifest.n, manifest.density,
                           manifest.lambda_shift, manifest.seed);
  } else {
    PdeParams params;
    params.load = manifest.load;
    params.eccentricity = manifest.eccentricity;
    params.half_height = manifest.half_height;
    PdeKind kind;
    if (manifest.kind == "obstacle-a") {
      kind = PdeKind::kObstacleA;
    } else if (manifest.kind == "obstacle-b") {
      kind = PdeKind::kObstacleB;
    } else if (manifest.kind == "torsion") {
      kind = PdeKind::kTorsion;
    } else if (manifest.kind == "journal") {
      kind = PdeKind::kJournal;
    } else {
      throw std::invalid_argument("unknown problem kind: " + manifest.kind);
    }
    out = gen_pde(kind, manifest.nx, manifest.ny, params);
  }
  return out;
}

}  // namespace boxqp

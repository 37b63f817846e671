#pragma once

#include <cstdint>
#include <string>

#include "boxqp/problem.hpp"

namespace boxqp {

/// Everything needed to rebuild a generated problem bit for bit.
/// Fields that do not apply to a family keep their defaults.
struct ProblemManifest {
  std::string kind;  // nnls | deblur | ncbqp | obstacle-a | obstacle-b |
                     // torsion | journal
  std::uint64_t seed = 0;
  int m = 0;          // rows of the design matrix (nnls)
  int n = 0;          // columns / variables (nnls, ncbqp) or image side (deblur)
  int nx = 0, ny = 0; // interior grid (pde families)
  double density = 1.0;
  double beta = 0.0;          // Tikhonov weight
  double lambda_shift = 0.0;  // diagonal shift of the random indefinite family
  double load = 1.0;          // constant source term c (pde families)
  double eccentricity = 0.8;  // journal bearing
  double half_height = 10.0;  // journal bearing domain height parameter
  double noise_sigma = 0.0;   // deblur noise intensity
  std::string kernel;         // deblur kernel: "identity" or
                              // "gaussian:<radius>:<sigma>"
  std::uint64_t checksum = 0; // fnv1a64 over the generated problem data
};

struct GeneratedProblem {
  BqpProblem problem;
  ProblemManifest manifest;
  // Family extras kept for verification; empty when not applicable.
  Matrix design;  // A of the least-squares families
  Vector rhs;     // b (nnls) or the blurred observation (deblur)
  Vector truth;   // ground-truth image (deblur)
};

/// Hash of (n, H row-major, f, lower, upper); the manifest's checksum.
std::uint64_t problem_checksum(const BqpProblem& p);

/// Nonnegative least squares: A is m x n with standard-normal entries kept
/// with probability `density` (row-major draw order), the planted solution
/// is a normal vector with negatives zeroed, b = A * planted. Emits
/// H = A'A + beta*I, f = -A'b, bounds [0, +inf).
GeneratedProblem gen_random_nnls(int m, int n, double density,
                                 std::uint64_t seed, double beta);

/// Tikhonov-regularized deblurring of a synthetic checkerboard image of side
/// n_side. The blur is a separable 1-D kernel applied along both axes with
/// symmetric (reflexive) boundary handling; the observation adds
/// noise_sigma * normal noise. Emits H = A'A + beta*I, f = -A'y, x >= 0.
GeneratedProblem gen_deblur(int n_side, const std::string& kernel,
                            double noise_sigma, double beta,
                            std::uint64_t seed);

/// Random, generally indefinite problem: Q = B + B' + lambda_shift * I with
/// B sparse normal (row-major draw order), r normal, box [0, 10].
GeneratedProblem gen_random_ncbqp(int n, double density, double lambda_shift,
                                  std::uint64_t seed);

enum class PdeKind { kObstacleA, kObstacleB, kTorsion, kJournal };

struct PdeParams {
  double load = 1.0;          // constant source term c
  double eccentricity = 0.8;  // journal bearing only, in (0, 1)
  double half_height = 10.0;  // journal bearing only
};

/// Finite-difference discretization of the variational obstacle, torsion and
/// journal-bearing problems on an (nx x ny)-interior grid with zero boundary
/// values. The quadratic form uses the two-triangle quadrature with weights
///   mu_ij = hx*hy/6 * (w[i+1,j] + w[i,j] + w[i,j+1]),
///   la_ij = hx*hy/6 * (w[i-1,j] + w[i,j] + w[i,j-1]),
/// an outer factor hx*hy/4, and linear term hx*hy * sum f_ij v_ij.
/// Unknowns are indexed x-fastest: k = (j-1)*nx + (i-1).
GeneratedProblem gen_pde(PdeKind kind, int nx, int ny,
                         const PdeParams& params = {});

/// Rebuilds the problem a manifest describes; the result is bit-identical to
/// the original generation (equal checksum).
GeneratedProblem regenerate(const ProblemManifest& manifest);

}  // namespace boxqp

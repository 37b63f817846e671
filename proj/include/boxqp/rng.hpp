#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace boxqp {

/// Deterministic random stream for the problem generators.
///
/// The raw source is std::mt19937_64 seeded verbatim; uniforms take the top
/// 53 bits of one draw, normals come from Box-Muller on a uniform pair (the
/// cosine value first, the sine value cached for the next call). Every
/// mapping is pinned here so another implementation can reproduce the
/// streams bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

/// FNV-1a over the little-endian IEEE-754 bytes of `values`.
std::uint64_t fnv1a64(std::span<const double> values,
                      std::uint64_t state = kFnvOffset);

}  // namespace boxqp

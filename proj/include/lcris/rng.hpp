#pragma once

#include <cstdint>
#include <random>

#include "lcris/common.hpp"

namespace lcris {

/// Portable seedable generator.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms use the top 53 bits; normals use the Box-Muller
/// transform on those uniforms. Nothing here depends on the standard library's
/// distribution classes, whose algorithms differ between implementations, so
/// a given seed produces the same numbers on every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from a base seed and a stream label.
  static Rng stream(std::uint64_t seed, std::uint64_t label);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal.
  double normal();

  /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  cplx complex_normal(double variance);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for an independent stream labelled `label` under a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace lcris

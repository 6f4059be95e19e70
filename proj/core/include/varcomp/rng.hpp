#pragma once

#include <cstdint>
#include <random>

namespace varcomp {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed: mix64(parent ^ mix64(index + golden-ratio constant)).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

/// Reproducible variate stream: mt19937_64 words, uniforms on the 2^-53
/// lattice shifted off zero, normals by inversion through normal_quantile.
/// Same seed and algorithm give the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1).
  double uniform();
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace varcomp

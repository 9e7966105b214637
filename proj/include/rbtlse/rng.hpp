#pragma once

// Seedable, splittable generator for the experiment harness.
//
// Engine: std::mt19937_64 seeded through splitmix64(seed, stream).
// uniform(): top 53 bits of one draw times 2^-53, so values lie in [0, 1).
// normal(): Box-Muller on two uniforms; the second variate is cached.

#include <cstdint>
#include <random>

#include "rbtlse/rb_core.hpp"

namespace rbtlse {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();

  /// An independent generator derived from this one's seed and `stream`.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream_ * 0x9e3779b97f4a7c15ULL + stream + 1); }

  RealMatrix normal_matrix(Index rows, Index cols);
  RealMatrix uniform_matrix(Index rows, Index cols);
  /// Real and imaginary parts drawn independently.
  ComplexMatrix normal_complex(Index rows, Index cols);
  ComplexMatrix uniform_complex(Index rows, Index cols);
  /// All four components drawn independently.
  RBMatrix normal_rb(Index rows, Index cols);
  RBMatrix uniform_rb(Index rows, Index cols);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace rbtlse

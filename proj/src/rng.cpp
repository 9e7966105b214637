#include "rbtlse/rng.hpp"

#include <cmath>
#include <numbers>

namespace rbtlse {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (stream * 0xd1b54a32d192ed03ULL);
  std::uint64_t words[8];
  for (auto& w : words) w = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(words[0]), static_cast<std::uint32_t>(words[0] >> 32),
                    static_cast<std::uint32_t>(words[1]), static_cast<std::uint32_t>(words[1] >> 32),
                    static_cast<std::uint32_t>(words[2]), static_cast<std::uint32_t>(words[2] >> 32),
                    static_cast<std::uint32_t>(words[3]), static_cast<std::uint32_t>(words[3] >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

RealMatrix Rng::normal_matrix(Index rows, Index cols) {
  RealMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

RealMatrix Rng::uniform_matrix(Index rows, Index cols) {
  RealMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = uniform();
  return m;
}

ComplexMatrix Rng::normal_complex(Index rows, Index cols) {
  RealMatrix re = normal_matrix(rows, cols);
  RealMatrix im = normal_matrix(rows, cols);
  return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

ComplexMatrix Rng::uniform_complex(Index rows, Index cols) {
  RealMatrix re = uniform_matrix(rows, cols);
  RealMatrix im = uniform_matrix(rows, cols);
  return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

RBMatrix Rng::normal_rb(Index rows, Index cols) {
  RealMatrix c0 = normal_matrix(rows, cols);
  RealMatrix c1 = normal_matrix(rows, cols);
  RealMatrix c2 = normal_matrix(rows, cols);
  RealMatrix c3 = normal_matrix(rows, cols);
  return RBMatrix::from_components(std::move(c0), std::move(c1), std::move(c2), std::move(c3));
}

RBMatrix Rng::uniform_rb(Index rows, Index cols) {
  RealMatrix c0 = uniform_matrix(rows, cols);
  RealMatrix c1 = uniform_matrix(rows, cols);
  RealMatrix c2 = uniform_matrix(rows, cols);
  RealMatrix c3 = uniform_matrix(rows, cols);
  return RBMatrix::from_components(std::move(c0), std::move(c1), std::move(c2), std::move(c3));
}

}  // namespace rbtlse

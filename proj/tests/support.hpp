#pragma once

#include <cmath>

#include "rbtlse/rb_core.hpp"
#include "rbtlse/rng.hpp"
#include "rbtlse/tlse.hpp"

namespace testsupport {

using namespace rbtlse;

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline RBMatrix zero_like(const RBMatrix& p) { return RBMatrix(p.rows(), p.cols()); }

/// Dense K_m, L_m, M_m, N_m for checking the signed-block-permutation code.
inline RealMatrix dense_k(Index m) {
  RealMatrix k = RealMatrix::Zero(4 * m, 4 * m);
  const RealMatrix I = RealMatrix::Identity(m, m);
  // K [P0;P1;P2;P3] = [-P1; P0; -P3; P2]
  k.block(0, m, m, m) = -I;
  k.block(m, 0, m, m) = I;
  k.block(2 * m, 3 * m, m, m) = -I;
  k.block(3 * m, 2 * m, m, m) = I;
  return k;
}

inline RealMatrix dense_l(Index m) {
  RealMatrix l = RealMatrix::Zero(4 * m, 4 * m);
  const RealMatrix I = RealMatrix::Identity(m, m);
  // L [P0;P1;P2;P3] = [P2; P3; P0; P1]
  l.block(0, 2 * m, m, m) = I;
  l.block(m, 3 * m, m, m) = I;
  l.block(2 * m, 0, m, m) = I;
  l.block(3 * m, m, m, m) = I;
  return l;
}

inline RealMatrix dense_m(Index m) {
  RealMatrix mm = RealMatrix::Zero(4 * m, 4 * m);
  const RealMatrix I = RealMatrix::Identity(m, m);
  // M [P0;P1;P2;P3] = [-P3; P2; -P1; P0]
  mm.block(0, 3 * m, m, m) = -I;
  mm.block(m, 2 * m, m, m) = I;
  mm.block(2 * m, m, m, m) = -I;
  mm.block(3 * m, 0, m, m) = I;
  return mm;
}

inline ComplexMatrix dense_n(Index m) {
  ComplexMatrix n = ComplexMatrix::Zero(2 * m, 2 * m);
  n.block(0, m, m, m).setIdentity();
  n.block(m, 0, m, m).setIdentity();
  return n;
}

/// B = A X*, D = C X* with real X*.
inline TlseProblem consistent_real(Rng& rng, Index m, Index n, Index p, Index d, RealMatrix& x_star) {
  x_star = rng.normal_matrix(n, d);
  RBMatrix a = rng.normal_rb(m, n);
  RBMatrix c = rng.normal_rb(p, n);
  const RBMatrix x = RBMatrix::from_real(x_star);
  RBMatrix b = mat_mul(a, x);
  RBMatrix dd = mat_mul(c, x);
  return {std::move(a), std::move(b), std::move(c), std::move(dd)};
}

inline TlseProblem consistent_complex(Rng& rng, Index m, Index n, Index p, Index d, ComplexMatrix& x_star) {
  x_star = rng.normal_complex(n, d);
  RBMatrix a = rng.normal_rb(m, n);
  RBMatrix c = rng.normal_rb(p, n);
  const RBMatrix x = RBMatrix::from_complex(x_star);
  RBMatrix b = mat_mul(a, x);
  RBMatrix dd = mat_mul(c, x);
  return {std::move(a), std::move(b), std::move(c), std::move(dd)};
}

inline TlseProblem random_problem(Rng& rng, Index m, Index n, Index p, Index d) {
  RBMatrix a = rng.normal_rb(m, n);
  RBMatrix b = rng.normal_rb(m, d);
  RBMatrix c = rng.normal_rb(p, n);
  RBMatrix dd = rng.normal_rb(p, d);
  return {std::move(a), std::move(b), std::move(c), std::move(dd)};
}

}  // namespace testsupport

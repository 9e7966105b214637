#pragma once

// Equality-constrained least squares baseline: only B is treated as noisy.
//
//   min ||A X - B||_F  subject to  C X = D
//
// solved on the real (or complex) leading block columns by the null-space
// method: full QR of C_rep^H, particular solution from the triangular factor,
// then an unconstrained least-squares fit for the null-space coefficients.

#include "rbtlse/tlse.hpp"

namespace rbtlse {

template <class Scalar>
struct LseSolution {
  Mat<Scalar> X;
  double residual = 0.0;             // ||A X - B||_F
  double constraint_residual = 0.0;  // ||C X - D||_F
};

using LseRealSolution = LseSolution<double>;
using LseComplexSolution = LseSolution<Complex>;

/// ToleranceConfig::enforce_row_count selects m >= n (on) or the
/// representation-level rows >= n - r requirement (off).
LseRealSolution lse_solve_real(const RBMatrix& A, const RBMatrix& B, const RBMatrix& C, const RBMatrix& D,
                               const ToleranceConfig& tol = {});
LseComplexSolution lse_solve_complex(const RBMatrix& A, const RBMatrix& B, const RBMatrix& C,
                                     const RBMatrix& D, const ToleranceConfig& tol = {});

}  // namespace rbtlse

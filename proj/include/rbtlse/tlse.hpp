#pragma once

// Equality-constrained total least squares over reduced biquaternions:
//
//   min ||[E, F]||_F  subject to  (A + E) X = B + F,  C X = D
//
// with X restricted to real (solve_real) or complex (solve_complex) matrices.
// The real path works on the 4x real leading block columns, the complex path
// on the 2x complex ones.

#include <complex>
#include <limits>

#include "rbtlse/dense_kernels.hpp"
#include "rbtlse/rb_core.hpp"

namespace rbtlse {

struct ToleranceConfig {
  /// GapConditionFailed when sigma_k - sigma_{k+1} <= gap_abs + gap_rel * sigma_1.
  double gap_rel = 1e-10;
  double gap_abs = 0.0;
  /// BlockNotInvertible when cond_2 of the trailing d x d block exceeds this.
  double v22_cond_max = 1e12;
  /// DegenerateSpectrum when the smallest retained singular value is <= this.
  /// Zero by default: consistent data legitimately has (numerically) zero
  /// trailing singular values.
  double positive_sigma = 0.0;
  /// Require m >= n + d. When off, only the representation-level requirement
  /// (enough rows for n - r + d singular values) is checked.
  bool enforce_row_count = true;
};

/// A, B, C, D of shapes m x n, m x d, p x n, p x d. p may be zero.
struct TlseProblem {
  RBMatrix A;
  RBMatrix B;
  RBMatrix C;
  RBMatrix D;

  Index m() const { return A.rows(); }
  Index n() const { return A.cols(); }
  Index d() const { return B.cols(); }
  Index p() const { return C.rows(); }

  /// Throws DimensionMismatch unless the four shapes are consistent.
  void validate_shapes() const;
};

/// Everything the condition-number code reuses from a solve.
template <class Scalar>
struct TlseFactors {
  Mat<Scalar> P;          // [A_c, B_c]
  Mat<Scalar> S;          // [C_c, D_c]
  Mat<Scalar> Q2;         // orthonormal basis of null(S)
  Mat<Scalar> U;          // thin SVD of P Q2
  Eigen::VectorXd sigma;  //
  Mat<Scalar> V;          //
  Mat<Scalar> V_check;    // Q2 V, partitioned (n | d) x (n - r | d)
  Index n = 0;
  Index d = 0;
  Index r = 0;  // rows of the constraint representation (4p or 2p)

  Index k() const { return n - r; }
};

template <class Scalar>
struct TlseSolution {
  Mat<Scalar> X;               // n x d
  RBMatrix delta_coefficient;  // minimizing perturbation of A
  RBMatrix delta_rhs;          // minimizing perturbation of B
  Eigen::VectorXd sigma;       // all n - r + d singular values of P Q2
  /// sigma_{n-r} - sigma_{n-r+1}; +inf when n == r (no leading block).
  double gap = std::numeric_limits<double>::infinity();
  double v22_condition = 0.0;
  /// ||[delta_coefficient, delta_rhs]||_F evaluated in the RB domain.
  double residual_perturbation_norm = 0.0;
  TlseFactors<Scalar> factors;
};

using TlseRealSolution = TlseSolution<double>;
using TlseComplexSolution = TlseSolution<Complex>;

TlseRealSolution solve_real(const TlseProblem& problem, const ToleranceConfig& tol = {});
TlseComplexSolution solve_complex(const TlseProblem& problem, const ToleranceConfig& tol = {});

struct Residuals {
  double equation = 0.0;    // ||(A + E) X - (B + F)||_F
  double constraint = 0.0;  // ||C X - D||_F
};

Residuals residuals_real(const TlseProblem& problem, const TlseRealSolution& solution);
Residuals residuals_complex(const TlseProblem& problem, const TlseComplexSolution& solution);

}  // namespace rbtlse

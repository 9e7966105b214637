#pragma once

// Constrained TLS on representation matrices. Shared by the real and complex
// RB solvers; the only difference between them is which block column is fed in.

#include <cmath>
#include <string>

#include "rbtlse/dense_kernels.hpp"
#include "rbtlse/errors.hpp"
#include "rbtlse/tlse.hpp"

namespace rbtlse::detail {

template <class Scalar>
struct RepresentationTls {
  Mat<Scalar> X;
  Mat<Scalar> delta_coefficient;  // rows x n
  Mat<Scalar> delta_rhs;          // rows x d
  double gap = 0.0;
  double v22_condition = 0.0;
  TlseFactors<Scalar> factors;
};

inline std::string dims(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

/// Checks that the constraint representation has full row rank.
template <class Scalar>
void require_full_row_rank(const Mat<Scalar>& constraint, const char* label) {
  const Index r = constraint.rows();
  if (r == 0) return;
  if (r > constraint.cols()) {
    throw Error(ErrorCode::AssumptionViolated,
                std::string(label) + " is " + dims(r, constraint.cols()) + "; full row rank needs rows <= n");
  }
  const Index rank = svd_skinny(constraint).S.size();
  if (rank < r) {
    throw Error(ErrorCode::AssumptionViolated, std::string(label) + " has numerical rank " +
                                                   std::to_string(rank) + " < " + std::to_string(r));
  }
}

/// X = -V12 V22^{-1} from a basis [V12; V22] of the trailing subspace. Any
/// other basis [V12; V22] R of the same subspace gives the same X.
template <class Scalar>
Mat<Scalar> solution_from_trailing_basis(const Mat<Scalar>& v12, const Mat<Scalar>& v22) {
  // X V22 = -V12  <=>  V22^T X^T = -V12^T
  return -(v22.transpose().partialPivLu().solve(v12.transpose())).transpose();
}

/// Solves min ||[dP]||_F s.t. (P + dP)[X; -I] = 0, S [X; -I] = 0 where
/// P = [A_rep, B_rep] and S = [C_rep, D_rep] have n + d columns.
template <class Scalar>
RepresentationTls<Scalar> solve_representation_tls(Mat<Scalar> P, Mat<Scalar> S, Index n, Index d,
                                                   const ToleranceConfig& tol) {
  const Index rows = P.rows();
  const Index r = S.rows();
  const Index k = n - r;
  const Index q = n + d - r;  // dimension of null(S)

  if (rows < q) {
    throw Error(ErrorCode::DegenerateSpectrum,
                "coefficient representation has " + std::to_string(rows) + " rows; need at least " +
                    std::to_string(q) + " for n - r + d singular values");
  }

  // Orthonormal basis for null(S) from the full QR of S^H.
  const QrFactors<Scalar> qr = qr_full<Scalar>(S.adjoint());
  Mat<Scalar> Q2 = qr.Q.rightCols(q);

  SvdFactors<Scalar> svd = svd_thin<Scalar>(P * Q2);
  const Eigen::VectorXd& s = svd.S;

  RepresentationTls<Scalar> out;
  if (k > 0) {
    out.gap = s(k - 1) - s(k);
    if (out.gap <= tol.gap_abs + tol.gap_rel * s(0)) {
      throw Error(ErrorCode::GapConditionFailed,
                  "sigma_" + std::to_string(k) + " - sigma_" + std::to_string(k + 1) + " = " +
                      std::to_string(out.gap) + " is not above the gap tolerance; solution not unique");
    }
  } else {
    out.gap = std::numeric_limits<double>::infinity();
  }
  // A zero threshold admits exact zeros, which noiseless (consistent) data produces.
  const double smallest = s(q - 1);
  if (!(smallest >= 0.0) || (tol.positive_sigma > 0.0 && smallest <= tol.positive_sigma)) {
    throw Error(ErrorCode::DegenerateSpectrum,
                "smallest singular value " + std::to_string(smallest) + " is below the positivity threshold");
  }

  Mat<Scalar> V_check = Q2 * svd.V;
  const Mat<Scalar> v12 = V_check.block(0, k, n, d);
  const Mat<Scalar> v22 = V_check.block(n, k, d, d);

  const Eigen::VectorXd sv22 = svd_thin<Scalar>(v22).S;
  out.v22_condition = sv22(d - 1) > 0.0 ? sv22(0) / sv22(d - 1) : std::numeric_limits<double>::infinity();
  if (!(out.v22_condition <= tol.v22_cond_max)) {
    throw Error(ErrorCode::BlockNotInvertible,
                "trailing d x d block has condition " + std::to_string(out.v22_condition));
  }

  out.X = solution_from_trailing_basis<Scalar>(v12, v22);

  // [E, F] = -U2 Sigma2 [V12; V22]^H
  const Mat<Scalar> u2s2 = svd.U.rightCols(d) * s.tail(d).template cast<Scalar>().asDiagonal();
  out.delta_coefficient = -u2s2 * v12.adjoint();
  out.delta_rhs = -u2s2 * v22.adjoint();

  out.factors.P = std::move(P);
  out.factors.S = std::move(S);
  out.factors.Q2 = std::move(Q2);
  out.factors.U = std::move(svd.U);
  out.factors.sigma = std::move(svd.S);
  out.factors.V = std::move(svd.V);
  out.factors.V_check = std::move(V_check);
  out.factors.n = n;
  out.factors.d = d;
  out.factors.r = r;
  return out;
}

/// Shape checks shared by both solvers. `scale` is 4 (real) or 2 (complex).
inline void check_problem_assumptions(const TlseProblem& pr, int scale, const ToleranceConfig& tol) {
  pr.validate_shapes();
  if (tol.enforce_row_count && pr.m() < pr.n() + pr.d()) {
    throw Error(ErrorCode::AssumptionViolated,
                "m = " + std::to_string(pr.m()) + " < n + d = " + std::to_string(pr.n() + pr.d()));
  }
  if (scale * pr.p() > pr.n()) {
    throw Error(ErrorCode::AssumptionViolated, "constraint representation has " +
                                                   std::to_string(scale * pr.p()) + " rows but n = " +
                                                   std::to_string(pr.n()));
  }
}

}  // namespace rbtlse::detail

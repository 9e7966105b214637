#include "rbtlse/lse_baseline.hpp"

#include "constrained_tls.hpp"

namespace rbtlse {

namespace {

template <class Scalar>
LseSolution<Scalar> null_space_lse(const Mat<Scalar>& a, const Mat<Scalar>& b, const Mat<Scalar>& c,
                                   const Mat<Scalar>& d) {
  const Index n = a.cols();
  const Index r = c.rows();

  // C^H = Q [R1; 0]  =>  C = R1^H Q1^H, and Q2 spans null(C).
  const QrFactors<Scalar> qr = qr_full<Scalar>(c.adjoint());
  const Mat<Scalar> q1 = qr.Q.leftCols(r);
  const Mat<Scalar> q2 = qr.Q.rightCols(n - r);

  Mat<Scalar> x0 = Mat<Scalar>::Zero(n, b.cols());
  if (r > 0) {
    const Mat<Scalar> r1 = qr.R.topRows(r);
    const Mat<Scalar> y1 = r1.adjoint().template triangularView<Eigen::Lower>().solve(d);
    x0 = q1 * y1;
  }

  LseSolution<Scalar> out;
  out.X = x0;
  if (n > r) {
    const Mat<Scalar> aq2 = a * q2;
    const Mat<Scalar> z = aq2.colPivHouseholderQr().solve(b - a * x0);
    out.X += q2 * z;
  }
  out.residual = (a * out.X - b).norm();
  out.constraint_residual = r > 0 ? (c * out.X - d).norm() : 0.0;
  return out;
}

void check_lse_shapes(const RBMatrix& A, const RBMatrix& B, const RBMatrix& C, const RBMatrix& D, int scale,
                      const ToleranceConfig& tol) {
  TlseProblem shapes{A, B, C, D};
  shapes.validate_shapes();
  if (tol.enforce_row_count ? A.rows() < A.cols() : scale * A.rows() < A.cols() - scale * C.rows()) {
    throw Error(ErrorCode::AssumptionViolated, "too few rows in A for a unique least-squares fit");
  }
}

}  // namespace

LseRealSolution lse_solve_real(const RBMatrix& A, const RBMatrix& B, const RBMatrix& C, const RBMatrix& D,
                               const ToleranceConfig& tol) {
  check_lse_shapes(A, B, C, D, 4, tol);
  const RealMatrix c_rep = real_block_column(C);
  detail::require_full_row_rank<double>(c_rep, "C^R_c");
  return null_space_lse<double>(real_block_column(A), real_block_column(B), c_rep, real_block_column(D));
}

LseComplexSolution lse_solve_complex(const RBMatrix& A, const RBMatrix& B, const RBMatrix& C,
                                     const RBMatrix& D, const ToleranceConfig& tol) {
  check_lse_shapes(A, B, C, D, 2, tol);
  const ComplexMatrix c_rep = complex_block_column(C);
  detail::require_full_row_rank<Complex>(c_rep, "C^C_c");
  return null_space_lse<Complex>(complex_block_column(A), complex_block_column(B), c_rep,
                                 complex_block_column(D));
}

}  // namespace rbtlse

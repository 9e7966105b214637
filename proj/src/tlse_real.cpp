#include "constrained_tls.hpp"
#include "rbtlse/tlse.hpp"

namespace rbtlse {

void TlseProblem::validate_shapes() const {
  if (m() < 1 || n() < 1 || d() < 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "A and B need m, n, d >= 1; got A " + detail::dims(A.rows(), A.cols()) + ", B " +
                    detail::dims(B.rows(), B.cols()));
  }
  if (B.rows() != m()) {
    throw Error(ErrorCode::DimensionMismatch, "B has " + std::to_string(B.rows()) + " rows, A has " +
                                                  std::to_string(m()));
  }
  if (C.cols() != n()) {
    throw Error(ErrorCode::DimensionMismatch, "C is " + detail::dims(C.rows(), C.cols()) + ", expected p x " +
                                                  std::to_string(n()));
  }
  if (D.rows() != C.rows() || D.cols() != d()) {
    throw Error(ErrorCode::DimensionMismatch, "D is " + detail::dims(D.rows(), D.cols()) + ", expected " +
                                                  detail::dims(C.rows(), d()));
  }
}

TlseRealSolution solve_real(const TlseProblem& problem, const ToleranceConfig& tol) {
  detail::check_problem_assumptions(problem, 4, tol);
  const Index n = problem.n();
  const Index d = problem.d();

  const RealMatrix c_rep = real_block_column(problem.C);
  detail::require_full_row_rank<double>(c_rep, "C^R_c");

  RealMatrix P(4 * problem.m(), n + d);
  P << real_block_column(problem.A), real_block_column(problem.B);
  RealMatrix S(4 * problem.p(), n + d);
  S << c_rep, real_block_column(problem.D);

  auto tls = detail::solve_representation_tls<double>(std::move(P), std::move(S), n, d, tol);

  TlseRealSolution out;
  out.X = std::move(tls.X);
  // Stacks are [E0; E1; E2; E3] -> E0 + E1 i + E2 j + E3 k.
  out.delta_coefficient = from_real_block_column(tls.delta_coefficient);
  out.delta_rhs = from_real_block_column(tls.delta_rhs);
  out.sigma = tls.factors.sigma;
  out.gap = tls.gap;
  out.v22_condition = tls.v22_condition;
  out.residual_perturbation_norm =
      std::hypot(frobenius_norm(out.delta_coefficient), frobenius_norm(out.delta_rhs));
  out.factors = std::move(tls.factors);
  return out;
}

Residuals residuals_real(const TlseProblem& problem, const TlseRealSolution& solution) {
  const RBMatrix x = RBMatrix::from_real(solution.X);
  Residuals r;
  r.equation = frobenius_norm(mat_mul(problem.A + solution.delta_coefficient, x) -
                              (problem.B + solution.delta_rhs));
  r.constraint = frobenius_norm(mat_mul(problem.C, x) - problem.D);
  return r;
}

}  // namespace rbtlse

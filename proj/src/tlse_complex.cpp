#include "constrained_tls.hpp"
#include "rbtlse/tlse.hpp"

namespace rbtlse {

// Works directly on [R1; R2] blocks; never routes through the 4x real form.
TlseComplexSolution solve_complex(const TlseProblem& problem, const ToleranceConfig& tol) {
  detail::check_problem_assumptions(problem, 2, tol);
  const Index n = problem.n();
  const Index d = problem.d();

  const ComplexMatrix c_rep = complex_block_column(problem.C);
  detail::require_full_row_rank<Complex>(c_rep, "C^C_c");

  ComplexMatrix P(2 * problem.m(), n + d);
  P << complex_block_column(problem.A), complex_block_column(problem.B);
  ComplexMatrix S(2 * problem.p(), n + d);
  S << c_rep, complex_block_column(problem.D);

  auto tls = detail::solve_representation_tls<Complex>(std::move(P), std::move(S), n, d, tol);

  TlseComplexSolution out;
  out.X = std::move(tls.X);
  // [G1; G2] -> G1 + G2 j
  out.delta_coefficient = from_complex_block_column(tls.delta_coefficient);
  out.delta_rhs = from_complex_block_column(tls.delta_rhs);
  out.sigma = tls.factors.sigma;
  out.gap = tls.gap;
  out.v22_condition = tls.v22_condition;
  out.residual_perturbation_norm =
      std::hypot(frobenius_norm(out.delta_coefficient), frobenius_norm(out.delta_rhs));
  out.factors = std::move(tls.factors);
  return out;
}

Residuals residuals_complex(const TlseProblem& problem, const TlseComplexSolution& solution) {
  const RBMatrix x = RBMatrix::from_complex(solution.X);
  Residuals r;
  r.equation = frobenius_norm(mat_mul(problem.A + solution.delta_coefficient, x) -
                              (problem.B + solution.delta_rhs));
  r.constraint = frobenius_norm(mat_mul(problem.C, x) - problem.D);
  return r;
}

}  // namespace rbtlse

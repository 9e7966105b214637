#include <doctest.h>

#include "constrained_tls.hpp"
#include "rbtlse/errors.hpp"
#include "rbtlse/tlse.hpp"
#include "support.hpp"

using namespace rbtlse;
using namespace testsupport;

namespace {

ErrorCode real_error(const TlseProblem& pr, const ToleranceConfig& tol = {}) {
  try {
    solve_real(pr, tol);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("solve_real did not throw");
  return ErrorCode::InvalidArgument;
}

double data_norm(const TlseProblem& pr) {
  return frobenius_norm(hstack(vstack(pr.A, pr.C), vstack(pr.B, pr.D)));
}

RBMatrix real_only(const RealMatrix& m) { return RBMatrix::from_real(m); }

}  // namespace

TEST_CASE("real solve on consistent data recovers X exactly") {
  Rng rng(31);
  RealMatrix x_star;
  const TlseProblem pr = consistent_real(rng, 120, 50, 10, 35, x_star);
  ToleranceConfig tol;
  tol.enforce_row_count = false;
  const TlseRealSolution sol = solve_real(pr, tol);
  CHECK((sol.X - x_star).norm() / x_star.norm() < 1e-8);
  CHECK(sol.residual_perturbation_norm <= 1e-10 * data_norm(pr));
}

TEST_CASE("real solve at m=30, n=10, p=2, d=2 meets the accuracy metrics") {
  Rng rng(32);
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  const TlseRealSolution sol = solve_real(pr);
  const Residuals res = residuals_real(pr, sol);
  CHECK(res.equation < 1e-10);
  CHECK(res.constraint < 1e-10);

  CHECK(sol.sigma.size() == 10 - 8 + 2);
  for (Index i = 0; i < sol.sigma.size(); ++i) {
    CHECK(sol.sigma(i) > 0.0);
    if (i > 0) CHECK(sol.sigma(i) <= sol.sigma(i - 1));
  }
  CHECK(sol.gap == doctest::Approx(sol.sigma(1) - sol.sigma(2)));
  CHECK(rel(sol.residual_perturbation_norm, sol.sigma.tail(2).norm()) < 1e-12);
  // Same norm evaluated on the representation perturbations.
  RealMatrix stacked(4 * 30, 12);
  stacked << real_block_column(sol.delta_coefficient), real_block_column(sol.delta_rhs);
  CHECK(rel(stacked.norm(), sol.residual_perturbation_norm) < 1e-14);
}

TEST_CASE("real residual grows when X is corrupted") {
  Rng rng(33);
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  TlseRealSolution sol = solve_real(pr);
  sol.X(3, 1) += 1.0;
  const double smin = svd_thin<double>(real_block_column(pr.C)).S.minCoeff();
  CHECK(residuals_real(pr, sol).constraint >= smin);
}

TEST_CASE("empty constraint degrades to unconstrained TLS") {
  Rng rng(34);
  const TlseProblem pr = random_problem(rng, 12, 4, 0, 2);
  const TlseRealSolution sol = solve_real(pr);
  CHECK(sol.factors.r == 0);
  CHECK(sol.sigma.size() == 6);
  // Unconstrained TLS: trailing right singular vectors of [A_c, B_c].
  RealMatrix p(48, 6);
  p << real_block_column(pr.A), real_block_column(pr.B);
  const auto f = svd_thin<double>(p);
  const RealMatrix v12 = f.V.block(0, 4, 4, 2), v22 = f.V.block(4, 4, 2, 2);
  CHECK((sol.X + v12 * v22.inverse()).norm() < 1e-10);
  CHECK(residuals_real(pr, sol).equation < 1e-10);
}

TEST_CASE("real solution is minimal among feasible perturbations") {
  // n = 5, p = 1, d = 1: the feasible X form a line; for each X the least
  // perturbation is ||r|| / sqrt(1 + ||x||^2) with r = A_c x - B_c.
  Rng rng(35);
  const TlseProblem pr = random_problem(rng, 6, 5, 1, 1);
  const TlseRealSolution sol = solve_real(pr);
  const RealMatrix a = real_block_column(pr.A), b = real_block_column(pr.B);
  const RealMatrix c = real_block_column(pr.C);
  const auto qr = qr_full<double>(c.transpose());
  const Eigen::VectorXd z = qr.Q.col(4);
  CHECK((c * z).norm() < 1e-12);

  const Eigen::VectorXd x0 = sol.X.col(0);
  const double best = sol.residual_perturbation_norm;
  double found = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 100000; ++s) {
    const double scale = std::pow(10.0, -6.0 + 7.0 * rng.uniform());
    const double t = (rng.uniform() < 0.5 ? -1.0 : 1.0) * scale;
    const Eigen::VectorXd x = x0 + t * z;
    const Eigen::VectorXd r = a * x - b.col(0);
    // Explicit minimal pair for this x, then its norm.
    const RealMatrix e = -r * x.transpose() / (1.0 + x.squaredNorm());
    const Eigen::VectorXd f = r / (1.0 + x.squaredNorm());
    CHECK_MESSAGE(((a + e) * x - (b.col(0) + f)).norm() < 1e-9 * (1 + r.norm()), "pair not feasible");
    found = std::min(found, std::sqrt(e.squaredNorm() + f.squaredNorm()));
  }
  CHECK(found >= best * (1 - 1e-6));
}

TEST_CASE("X depends only on the trailing subspace") {
  Rng rng(36);
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  const TlseRealSolution sol = solve_real(pr);
  const auto& f = sol.factors;
  const RealMatrix v12 = f.V_check.block(0, f.k(), f.n, f.d);
  const RealMatrix v22 = f.V_check.block(f.n, f.k(), f.d, f.d);
  for (int trial = 0; trial < 5; ++trial) {
    const RealMatrix r = qr_full<double>(rng.normal_matrix(2, 2)).Q;  // another orthonormal basis
    const RealMatrix x = detail::solution_from_trailing_basis<double>(v12 * r, v22 * r);
    CHECK((x - sol.X).norm() < 1e-10 * sol.X.norm());
  }
  // Reordering rows changes the factorizations but not X.
  TlseProblem shuffled = pr;
  for (int t = 0; t < 4; ++t) {
    shuffled.A.component(t) = pr.A.component(t).colwise().reverse();
    shuffled.B.component(t) = pr.B.component(t).colwise().reverse();
  }
  CHECK((solve_real(shuffled).X - sol.X).norm() < 1e-10 * sol.X.norm());
}

TEST_CASE("scaling equivariance, real") {
  Rng rng(37);
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  const double zeta = 3.7;
  const TlseProblem scaled{zeta * pr.A, zeta * pr.B, zeta * pr.C, zeta * pr.D};
  const TlseRealSolution a = solve_real(pr), b = solve_real(scaled);
  CHECK((a.X - b.X).norm() < 1e-12 * a.X.norm());
  CHECK(rel(b.residual_perturbation_norm, zeta * a.residual_perturbation_norm) < 1e-12);
}

TEST_CASE("real solver error taxonomy") {
  Rng rng(38);
  // m < n + d
  CHECK(real_error(random_problem(rng, 5, 4, 0, 2)) == ErrorCode::AssumptionViolated);
  // 4p > n
  CHECK(real_error(random_problem(rng, 30, 7, 2, 2)) == ErrorCode::AssumptionViolated);
  // C with two equal rows is rank deficient.
  TlseProblem dup = random_problem(rng, 30, 10, 2, 2);
  for (int t = 0; t < 4; ++t) dup.C.component(t).row(1) = dup.C.component(t).row(0);
  CHECK(real_error(dup) == ErrorCode::AssumptionViolated);
  // Shapes.
  TlseProblem bad = random_problem(rng, 30, 10, 2, 2);
  bad.D = rng.normal_rb(2, 3);
  CHECK(real_error(bad) == ErrorCode::DimensionMismatch);

  // Equal leading and trailing singular values: [e1, e2].
  RealMatrix a = RealMatrix::Zero(2, 1), b = RealMatrix::Zero(2, 1);
  a(0, 0) = 1.0;
  b(1, 0) = 1.0;
  CHECK(real_error({real_only(a), real_only(b), RBMatrix(0, 1), RBMatrix(0, 1)}) ==
        ErrorCode::GapConditionFailed);

  // Trailing subspace contains a direction with no right-hand-side part.
  RealMatrix a2 = RealMatrix::Zero(4, 2), b2 = RealMatrix::Zero(4, 2);
  a2(0, 0) = 3.0;
  a2(1, 1) = 1e-3;
  b2(2, 0) = 2.0;
  b2(3, 1) = 0.5;
  CHECK(real_error({real_only(a2), real_only(b2), RBMatrix(0, 2), RBMatrix(0, 2)}) ==
        ErrorCode::BlockNotInvertible);

  // Consistent data has a zero trailing spectrum; a positive threshold rejects it.
  RealMatrix x_star;
  const TlseProblem cons = consistent_real(rng, 30, 10, 2, 2, x_star);
  ToleranceConfig strict;
  strict.positive_sigma = 1e-8;
  CHECK(real_error(cons, strict) == ErrorCode::DegenerateSpectrum);
  CHECK_NOTHROW(solve_real(cons));

  // Too few representation rows once the m >= n + d check is off.
  ToleranceConfig loose;
  loose.enforce_row_count = false;
  CHECK(real_error(random_problem(rng, 1, 8, 0, 2), loose) == ErrorCode::DegenerateSpectrum);
}

TEST_CASE("complex solve on consistent data recovers X exactly") {
  Rng rng(41);
  ComplexMatrix x_star;
  const TlseProblem pr = consistent_complex(rng, 100, 50, 10, 35, x_star);
  const TlseComplexSolution sol = solve_complex(pr, {1e-10, 0.0, 1e12, 0.0, false});
  CHECK((sol.X - x_star).norm() / x_star.norm() < 1e-8);
  CHECK(sol.residual_perturbation_norm <= 1e-10 * data_norm(pr));
}

TEST_CASE("complex solve at m=50, n=6, p=2, d=3") {
  Rng rng(42);
  const TlseProblem pr = random_problem(rng, 50, 6, 2, 3);
  const TlseComplexSolution sol = solve_complex(pr);
  const Residuals res = residuals_complex(pr, sol);
  CHECK(res.equation < 1e-10);
  CHECK(res.constraint < 1e-10);
  CHECK(sol.sigma.size() == 6 - 4 + 3);
  for (Index i = 1; i < sol.sigma.size(); ++i) CHECK(sol.sigma(i) <= sol.sigma(i - 1));
  CHECK(sol.sigma.minCoeff() > 0.0);

  // Norm chain: RB norm of the perturbations equals the complex TLS minimum.
  CHECK(rel(sol.residual_perturbation_norm, sol.sigma.tail(3).norm()) < 1e-12);
  ComplexMatrix stacked(100, 9);
  stacked << complex_block_column(sol.delta_coefficient), complex_block_column(sol.delta_rhs);
  CHECK(rel(stacked.norm(), sol.residual_perturbation_norm) < 1e-12);
  CHECK(rel(complex_repr(hstack(sol.delta_coefficient, sol.delta_rhs)).full.norm() / std::sqrt(2.0),
            sol.residual_perturbation_norm) < 1e-12);

  ComplexMatrix moved = sol.X;
  Rng r2(43);
  const ComplexMatrix y = r2.normal_complex(6, 3);
  const double delta = 0.25;
  moved += delta * y;
  TlseComplexSolution corrupted = sol;
  corrupted.X = moved;
  const double smin = svd_thin<Complex>(complex_block_column(pr.C)).S.minCoeff();
  CHECK(residuals_complex(pr, corrupted).constraint >= smin * delta * y.norm() * (1 - 1e-12));
}

TEST_CASE("complex and real solvers agree on real data") {
  Rng rng(44);
  auto real_part = [](const RBMatrix& p) {
    return RBMatrix::from_real(p.component(0));
  };
  const TlseProblem base = random_problem(rng, 20, 6, 0, 2);
  const TlseProblem pr{real_part(base.A), real_part(base.B), RBMatrix(0, 6), RBMatrix(0, 2)};
  const TlseRealSolution r = solve_real(pr);
  const TlseComplexSolution c = solve_complex(pr);
  CHECK((c.X - r.X.cast<Complex>()).norm() < 1e-9 * r.X.norm());
}

TEST_CASE("conjugating every complex component conjugates X") {
  Rng rng(45);
  const TlseProblem pr = random_problem(rng, 50, 6, 2, 3);
  auto conj = [](const RBMatrix& p) { return RBMatrix::from_complex_pair(p.r1().conjugate(), p.r2().conjugate()); };
  const TlseProblem cp{conj(pr.A), conj(pr.B), conj(pr.C), conj(pr.D)};
  const TlseComplexSolution a = solve_complex(pr), b = solve_complex(cp);
  CHECK((b.X - a.X.conjugate()).norm() < 1e-12 * a.X.norm());
}

TEST_CASE("complex scaling equivariance and subspace invariance") {
  Rng rng(46);
  const TlseProblem pr = random_problem(rng, 50, 6, 2, 3);
  const TlseProblem scaled{2.5 * pr.A, 2.5 * pr.B, 2.5 * pr.C, 2.5 * pr.D};
  const TlseComplexSolution a = solve_complex(pr), b = solve_complex(scaled);
  CHECK((a.X - b.X).norm() < 1e-12 * a.X.norm());
  CHECK(rel(b.residual_perturbation_norm, 2.5 * a.residual_perturbation_norm) < 1e-12);

  const auto& f = a.factors;
  const ComplexMatrix u = qr_full<Complex>(rng.normal_complex(3, 3)).Q;
  const ComplexMatrix x = detail::solution_from_trailing_basis<Complex>(
      f.V_check.block(0, f.k(), f.n, f.d) * u, f.V_check.block(f.n, f.k(), f.d, f.d) * u);
  CHECK((x - a.X).norm() < 1e-10 * a.X.norm());
}

TEST_CASE("complex solver error taxonomy") {
  Rng rng(47);
  auto code = [](const TlseProblem& pr) {
    try {
      solve_complex(pr);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code(random_problem(rng, 4, 4, 0, 2)) == ErrorCode::AssumptionViolated);
  // 2p > n (a 4p > n problem the complex path still accepts is shown below).
  CHECK(code(random_problem(rng, 50, 5, 3, 2)) == ErrorCode::AssumptionViolated);
  CHECK_NOTHROW(solve_complex(random_problem(rng, 50, 6, 2, 3)));
  TlseProblem dup = random_problem(rng, 50, 6, 2, 3);
  for (int t = 0; t < 4; ++t) dup.C.component(t).row(1) = dup.C.component(t).row(0);
  CHECK(code(dup) == ErrorCode::AssumptionViolated);
}

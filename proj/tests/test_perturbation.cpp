#include <doctest.h>

#include "constrained_tls.hpp"
#include "rbtlse/errors.hpp"
#include "rbtlse/experiments.hpp"
#include "rbtlse/perturbation.hpp"
#include "support.hpp"

using namespace rbtlse;
using namespace testsupport;

namespace {

PerturbationInstance scaled_deltas(const TlseProblem& pr, Rng& rng, double eps) {
  return gen_perturbation(pr, eps, rng);
}

/// Jacobian of the representation-level map (J_rep, K_rep) -> X by central
/// differences, one column per input entry; returns its spectral norm.
template <class Scalar, class Solve>
double jacobian_norm(const Mat<Scalar>& p, const Mat<Scalar>& s, Index n, Index d, Solve&& solve) {
  const double h = 1e-6;
  std::vector<Eigen::VectorXd> cols;
  auto add_columns = [&](bool is_s) {
    const Mat<Scalar>& base = is_s ? s : p;
    const int parts = std::is_same_v<Scalar, double> ? 1 : 2;
    for (Index j = 0; j < base.cols(); ++j) {
      for (Index i = 0; i < base.rows(); ++i) {
        for (int part = 0; part < parts; ++part) {
          Mat<Scalar> plus_p = p, minus_p = p, plus_s = s, minus_s = s;
          Scalar step = part == 0 ? Scalar(h) : Scalar(0.0);
          if constexpr (!std::is_same_v<Scalar, double>) {
            if (part == 1) step = Scalar(0.0, h);
          }
          (is_s ? plus_s : plus_p)(i, j) += step;
          (is_s ? minus_s : minus_p)(i, j) -= step;
          const Mat<Scalar> dx = (solve(plus_p, plus_s) - solve(minus_p, minus_s)) / (2 * h);
          Eigen::VectorXd col(std::is_same_v<Scalar, double> ? n * d : 2 * n * d);
          for (Index t = 0; t < n * d; ++t) {
            col(t) = std::real(dx.data()[t]);
            if constexpr (!std::is_same_v<Scalar, double>) col(n * d + t) = std::imag(dx.data()[t]);
          }
          cols.push_back(col);
        }
      }
    }
  };
  add_columns(false);
  add_columns(true);
  Eigen::MatrixXd jac(cols.front().size(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) jac.col(static_cast<Index>(c)) = cols[c];
  return spectral_norm<double>(jac);
}

}  // namespace

TEST_CASE("epsilon_n basics") {
  Rng rng(61);
  const TlseProblem pr = random_problem(rng, 12, 4, 1, 2);
  PerturbationInstance zero{pr, zero_like(pr.A), zero_like(pr.B), zero_like(pr.C), zero_like(pr.D)};
  CHECK(epsilon_n(zero) == 0.0);

  const PerturbationInstance same{pr, pr.A, pr.B, pr.C, pr.D};
  CHECK(epsilon_n(same) == doctest::Approx(1.0).epsilon(1e-15));

  PerturbationInstance inst{pr, rng.normal_rb(12, 4), rng.normal_rb(12, 2), rng.normal_rb(1, 4), rng.normal_rb(1, 2)};
  const double e = epsilon_n(inst);
  // Representation-domain evaluation.
  RealMatrix jk(4 * 13, 6), djk(4 * 13, 6);
  jk << real_block_column(inst.J()), real_block_column(inst.K());
  djk << real_block_column(inst.dJ()), real_block_column(inst.dK());
  CHECK(rel(e, djk.norm() / jk.norm()) < 1e-14);
  ComplexMatrix jkc(2 * 13, 6), djkc(2 * 13, 6);
  jkc << complex_block_column(inst.J()), complex_block_column(inst.K());
  djkc << complex_block_column(inst.dJ()), complex_block_column(inst.dK());
  CHECK(rel(e, djkc.norm() / jkc.norm()) < 1e-14);

  // Homogeneity.
  PerturbationInstance twice{pr, 3.0 * inst.dA, 3.0 * inst.dB, 3.0 * inst.dC, 3.0 * inst.dD};
  CHECK(rel(epsilon_n(twice), 3.0 * e) < 1e-14);

  const TlseProblem zero_problem{zero_like(pr.A), zero_like(pr.B), zero_like(pr.C), zero_like(pr.D)};
  CHECK_THROWS_AS(epsilon_n(PerturbationInstance{zero_problem, pr.A, pr.B, pr.C, pr.D}), Error);
  inst.dB = rng.normal_rb(12, 3);
  CHECK_THROWS_AS(epsilon_n(inst), Error);
}

TEST_CASE("forward_error_bound is kappa times eps_n") {
  ConditionReport r;
  r.kappa = 12.0;
  r.eps_n = 0.0;
  CHECK(forward_error_bound(r) == 0.0);
  r.eps_n = 0.5;
  CHECK(forward_error_bound(r) == 6.0);
}

TEST_CASE("real condition number equals the finite-difference Jacobian norm") {
  Rng rng(62);
  const TlseProblem pr = random_problem(rng, 4, 5, 1, 2);
  ToleranceConfig tol;
  tol.enforce_row_count = false;
  const TlseRealSolution sol = solve_real(pr, tol);
  ConditionOptions opts;
  opts.retain_factors = true;
  const ConditionReport rep = condition_real(pr, sol, opts);
  REQUIRE(rep.real_factors.has_value());
  const Index n = 5, d = 2, rows = 16, r = 4;
  CHECK(rep.real_factors->H.rows() == n * d);
  CHECK(rep.real_factors->H.cols() == n * d);
  CHECK(rep.real_factors->G.rows() == n * d);
  CHECK(rep.real_factors->G.cols() == 2 * n * d);
  CHECK(rep.real_factors->Z.rows() == 2 * n * d);
  CHECK(rep.real_factors->Z.cols() == n * (r + rows) + n * d);

  auto solve = [&](const RealMatrix& p, const RealMatrix& s) {
    return detail::solve_representation_tls<double>(p, s, n, d, ToleranceConfig{}).X;
  };
  const double jn = jacobian_norm<double>(sol.factors.P, sol.factors.S, n, d, solve);
  const double jk = frobenius_norm(hstack(vstack(pr.C, pr.A), vstack(pr.D, pr.B)));
  const double fd_kappa = jn * jk / sol.X.norm();
  CHECK(rel(rep.kappa, fd_kappa) < 1e-6);
}

TEST_CASE("complex condition number matches the finite-difference Jacobian norm") {
  Rng rng(63);
  const TlseProblem pr = random_problem(rng, 5, 4, 1, 2);
  ToleranceConfig tol;
  tol.enforce_row_count = false;
  const TlseComplexSolution sol = solve_complex(pr, tol);
  const ConditionReport rep = condition_complex(pr, sol);
  const Index n = 4, d = 2;
  auto solve = [&](const ComplexMatrix& p, const ComplexMatrix& s) {
    return detail::solve_representation_tls<Complex>(p, s, n, d, ToleranceConfig{}).X;
  };
  const double jn = jacobian_norm<Complex>(sol.factors.P, sol.factors.S, n, d, solve);
  const double fd_kappa = jn * std::hypot(frobenius_norm(hstack(pr.A, pr.B)), frobenius_norm(hstack(pr.C, pr.D))) /
                          sol.X.norm();
  // The complex operator is complex-linear while the true derivative also has a
  // conjugate-linear part; the two norms agree only to a few parts in 1e5.
  CHECK(rel(rep.kappa, fd_kappa) < 1e-3);
}

TEST_CASE("dense and matrix-free condition numbers agree") {
  Rng rng(64);
  ConditionOptions dense, iter;
  dense.strategy = ConditionStrategy::Dense;
  iter.strategy = ConditionStrategy::Iterative;
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  const TlseRealSolution s = solve_real(pr);
  CHECK(rel(condition_real(pr, s, iter).kappa, condition_real(pr, s, dense).kappa) < 1e-8);
  CHECK(condition_real(pr, s, iter).method_used == NormMethod::Iterative);

  const TlseProblem pc = random_problem(rng, 50, 6, 2, 3);
  const TlseComplexSolution c = solve_complex(pc);
  CHECK(rel(condition_complex(pc, c, iter).kappa, condition_complex(pc, c, dense).kappa) < 1e-8);

  ConditionOptions tiny = {};
  tiny.dense_entry_limit = 10;
  CHECK(condition_real(pr, s, tiny).method_used == NormMethod::Iterative);
}

TEST_CASE("kappa on the small table configurations and under scaling") {
  Rng rng(65);
  const TlseProblem pr = gen_instance(ExperimentKind::AccuracyReal, real_sizes(1), rng);
  const TlseRealSolution s = solve_real(pr);
  const double k = condition_real(pr, s).kappa;
  CHECK(k >= 0.0);
  CHECK(std::isfinite(k));
  const double zeta = 7.5;
  const TlseProblem sp{zeta * pr.A, zeta * pr.B, zeta * pr.C, zeta * pr.D};
  CHECK(rel(condition_real(sp, solve_real(sp)).kappa, k) < 1e-10);

  const TlseProblem pc = gen_instance(ExperimentKind::AccuracyComplex, complex_sizes(1), rng);
  const double kc = condition_complex(pc, solve_complex(pc)).kappa;
  CHECK(kc >= 0.0);
  CHECK(std::isfinite(kc));
}

TEST_CASE("real and complex kappa on real data agree within a factor of 4") {
  Rng rng(66);
  for (int trial = 0; trial < 5; ++trial) {
    const TlseProblem base = random_problem(rng, 20, 6, 0, 2);
    const TlseProblem pr{RBMatrix::from_real(base.A.component(0)), RBMatrix::from_real(base.B.component(0)),
                         RBMatrix(0, 6), RBMatrix(0, 2)};
    const double kr = condition_real(pr, solve_real(pr)).kappa;
    const double kc = condition_complex(pr, solve_complex(pr)).kappa;
    CHECK(kc <= 4 * kr);
    CHECK(kr <= 4 * kc);
  }
}

TEST_CASE("directional sampling stays below kappa") {
  Rng rng(67);
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  const TlseRealSolution s = solve_real(pr);
  const double kappa = condition_real(pr, s).kappa;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PerturbationInstance inst = scaled_deltas(pr, rng, 1e-8);
    const TlseRealSolution ps = solve_real(inst.perturbed());
    worst = std::max(worst, relative_forward_error(s.X, ps.X) / 1e-8);
  }
  CHECK(worst <= kappa * (1 + 1e-3));
  CHECK(worst >= kappa / 100);

  const TlseProblem pc = random_problem(rng, 50, 6, 2, 3);
  const TlseComplexSolution c = solve_complex(pc);
  const double kc = condition_complex(pc, c).kappa;
  double worst_c = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PerturbationInstance inst = scaled_deltas(pc, rng, 1e-8);
    worst_c = std::max(worst_c, relative_forward_error(c.X, solve_complex(inst.perturbed()).X) / 1e-8);
  }
  CHECK(worst_c <= kc * (1 + 1e-3));
  CHECK(worst_c >= kc / 100);
}

TEST_CASE("assess fills the bound and the measured error") {
  Rng rng(68);
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  for (double eps : {1e-11, 1e-8, 1e-5}) {
    const PerturbationInstance inst = gen_perturbation(pr, eps, rng);
    CHECK(rel(epsilon_n(inst), eps) < 1e-12);
    const ConditionReport rep = assess_real(inst);
    REQUIRE(rep.forward_error.has_value());
    CHECK(rep.bound == rep.kappa * rep.eps_n);
    CHECK(*rep.forward_error <= rep.bound * 1.05);
  }
}

TEST_CASE("condition number reports undefined conditioning") {
  Rng rng(69);
  const TlseProblem pr = random_problem(rng, 30, 10, 2, 2);
  TlseRealSolution s = solve_real(pr);
  s.X.setZero();
  try {
    condition_real(pr, s);
    FAIL("expected ConditioningUndefined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConditioningUndefined);
  }
  ConditionOptions opts;
  opts.w1_cond_max = 1.0;  // every nontrivial W1 exceeds this
  const TlseRealSolution good = solve_real(pr);
  try {
    condition_real(pr, good, opts);
    FAIL("expected ConditioningUndefined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConditioningUndefined);
  }
}

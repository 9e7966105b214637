#pragma once

// Relative normwise condition numbers of the real and complex constrained TLS
// solutions, the relative input perturbation size, and the first-order
// forward-error bound U = kappa * eps_n.

#include <optional>

#include "rbtlse/tlse.hpp"

namespace rbtlse {

/// A base problem plus unstructured RB perturbations of each of its matrices.
struct PerturbationInstance {
  TlseProblem base;
  RBMatrix dA;
  RBMatrix dB;
  RBMatrix dC;
  RBMatrix dD;

  /// J = [C; A], K = [D; B] and their perturbations.
  RBMatrix J() const { return vstack(base.C, base.A); }
  RBMatrix K() const { return vstack(base.D, base.B); }
  RBMatrix dJ() const { return vstack(dC, dA); }
  RBMatrix dK() const { return vstack(dD, dB); }

  TlseProblem perturbed() const;

  /// DimensionMismatch unless every delta has its base matrix's shape.
  void validate() const;
};

/// ||[dJ, dK]||_F / ||[J, K]||_F. Throws InvalidArgument on a zero denominator.
double epsilon_n(const PerturbationInstance& instance);

enum class ConditionStrategy { Auto, Dense, Iterative };

struct ConditionOptions {
  ConditionStrategy strategy = ConditionStrategy::Auto;
  /// Auto switches to the matrix-free path above this many entries in H G Z.
  double dense_entry_limit = 1e7;
  /// Keep H, G, Z, Q, S, W in the report (dense path only).
  bool retain_factors = false;
  PowerIterationOptions power;
  /// ConditioningUndefined when cond_2 of the leading n x n block of W exceeds this.
  double w1_cond_max = 1e14;
};

template <class Scalar>
struct ConditionFactors {
  Mat<Scalar> H;  // nd x nd
  Mat<Scalar> G;  // nd x 2nd
  Mat<Scalar> Z;  // 2nd x (n (r + rows) + nd)
  Mat<Scalar> Q;  // [-(P S^+)^H; I]
  Mat<Scalar> S;  // blockdiag(constraint singular values, leading sigmas)
  Mat<Scalar> W;  // [constraint right singular vectors, leading columns of V_check]
};

struct ConditionReport {
  double kappa = 0.0;
  double eps_n = 0.0;
  double bound = 0.0;
  std::optional<ConditionFactors<double>> real_factors;
  std::optional<ConditionFactors<Complex>> complex_factors;
  /// ||X - X_perturbed||_F / ||X||_F when a perturbed solve was supplied.
  std::optional<double> forward_error;
  NormMethod method_used = NormMethod::Dense;
};

/// `solution` must come from solve_real(problem); its factorizations are reused.
ConditionReport condition_real(const TlseProblem& problem, const TlseRealSolution& solution,
                               const ConditionOptions& opts = {});
ConditionReport condition_complex(const TlseProblem& problem, const TlseComplexSolution& solution,
                                  const ConditionOptions& opts = {});

/// kappa * eps_n.
double forward_error_bound(const ConditionReport& report);

double relative_forward_error(const RealMatrix& x, const RealMatrix& x_perturbed);
double relative_forward_error(const ComplexMatrix& x, const ComplexMatrix& x_perturbed);

/// Solves the base and perturbed problems and fills kappa, eps_n, bound and
/// forward_error. Solver errors from either solve propagate.
ConditionReport assess_real(const PerturbationInstance& instance, const ToleranceConfig& tol = {},
                            const ConditionOptions& opts = {});
ConditionReport assess_complex(const PerturbationInstance& instance, const ToleranceConfig& tol = {},
                               const ConditionOptions& opts = {});

}  // namespace rbtlse

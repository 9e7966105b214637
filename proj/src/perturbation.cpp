#include "rbtlse/perturbation.hpp"

#include <cmath>
#include <string>

#include "constrained_tls.hpp"
#include "rbtlse/errors.hpp"

namespace rbtlse {

namespace {

void require_same_shape(const RBMatrix& base, const RBMatrix& delta, const char* name) {
  if (base.rows() != delta.rows() || base.cols() != delta.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " is " +
                                                  detail::dims(delta.rows(), delta.cols()) + ", expected " +
                                                  detail::dims(base.rows(), base.cols()));
  }
}

double problem_norm(const TlseProblem& pr) {
  const double a = frobenius_norm(pr.A);
  const double b = frobenius_norm(pr.B);
  const double c = frobenius_norm(pr.C);
  const double d = frobenius_norm(pr.D);
  return std::sqrt(a * a + b * b + c * c + d * d);
}

void assert_shape(const char* what, Index rows, Index cols, Index want_rows, Index want_cols) {
  if (rows != want_rows || cols != want_cols) {
    throw std::logic_error(std::string("condition number: ") + what + " is " + detail::dims(rows, cols) +
                           ", expected " + detail::dims(want_rows, want_cols));
  }
}

template <class Scalar>
Mat<Scalar> reshape(const Vec<Scalar>& v, Index offset, Index rows, Index cols) {
  return Eigen::Map<const Mat<Scalar>>(v.data() + offset, rows, cols);
}

// Pieces of H G Z shared by the dense and matrix-free evaluations.
template <class Scalar>
struct OperatorParts {
  Index n = 0, d = 0, r = 0, rows = 0;
  Eigen::VectorXd s_r;    // diagonal of S_r (n)
  Eigen::VectorXd sig2;   // trailing d singular values
  Mat<Scalar> w1_inv;     // n x n
  Mat<Scalar> v22_inv;    // d x d
  Mat<Scalar> bz;         // U2^H Q^H, d x (r + rows)
  Mat<Scalar> lower;      // [I 0; -U1^H (P S^+) Us I], n x n
  Mat<Scalar> q;          // (r + rows) x rows
  Mat<Scalar> w;          // (n + d) x n
  Eigen::MatrixXd denom;  // d x n diagonal of the inverted operand in G

  Index in_dim() const { return n * (r + rows) + n * d; }
};

template <class Scalar>
OperatorParts<Scalar> build_parts(const TlseFactors<Scalar>& f, const ConditionOptions& opts) {
  OperatorParts<Scalar> o;
  o.n = f.n;
  o.d = f.d;
  o.r = f.r;
  o.rows = f.P.rows();
  const Index n = o.n, d = o.d, r = o.r, k = f.k(), rows = o.rows;

  Mat<Scalar> us = Mat<Scalar>::Zero(r, r);
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(r);
  Mat<Scalar> vs = Mat<Scalar>::Zero(n + d, r);
  Mat<Scalar> ps_pinv = Mat<Scalar>::Zero(rows, r);
  if (r > 0) {
    const SvdFactors<Scalar> sv = svd_skinny<Scalar>(f.S);
    if (sv.S.size() != r) {
      throw Error(ErrorCode::ConditioningUndefined, "constraint block lost full row rank");
    }
    us = sv.U;
    ss = sv.S;
    vs = sv.V;
    ps_pinv = f.P * (sv.V * sv.S.cwiseInverse().template cast<Scalar>().asDiagonal() * sv.U.adjoint());
  }

  o.s_r.resize(n);
  o.s_r << ss, f.sigma.head(k);
  o.sig2 = f.sigma.tail(d);

  o.w.resize(n + d, n);
  o.w << vs, f.V_check.leftCols(k);
  const Mat<Scalar> w1 = o.w.topRows(n);
  const Eigen::VectorXd sw = svd_thin<Scalar>(w1).S;
  const double w1_cond = sw(n - 1) > 0.0 ? sw(0) / sw(n - 1) : std::numeric_limits<double>::infinity();
  if (!(w1_cond <= opts.w1_cond_max)) {
    throw Error(ErrorCode::ConditioningUndefined,
                "leading n x n block of W has condition " + std::to_string(w1_cond));
  }
  o.w1_inv = w1.partialPivLu().inverse();
  o.v22_inv = f.V_check.block(n, k, d, d).partialPivLu().inverse();

  o.q.resize(r + rows, rows);
  o.q << -ps_pinv.adjoint(), Mat<Scalar>::Identity(rows, rows);
  const Mat<Scalar> u1 = f.U.leftCols(k);
  const Mat<Scalar> u2 = f.U.rightCols(d);
  o.bz = u2.adjoint() * o.q.adjoint();

  o.lower = Mat<Scalar>::Identity(n, n);
  if (r > 0 && k > 0) o.lower.bottomLeftCorner(k, r) = -u1.adjoint() * ps_pinv * us;

  o.denom.resize(d, n);
  const double scale = o.s_r.size() > 0 ? o.s_r.cwiseAbs().maxCoeff() : 1.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double v = o.s_r(i) * o.s_r(i) - (i >= r ? o.sig2(j) * o.sig2(j) : 0.0);
      if (!(std::abs(v) > 1e-14 * scale * scale)) {
        throw Error(ErrorCode::ConditioningUndefined, "operand of the inverse in G is singular");
      }
      o.denom(j, i) = v;
    }
  }
  return o;
}

template <class Scalar>
ConditionFactors<Scalar> dense_factors(const OperatorParts<Scalar>& o) {
  const Index n = o.n, d = o.d, r = o.r;
  ConditionFactors<Scalar> f;

  const Mat<Scalar> pi = commutation_matrix(d, n).template cast<Scalar>();
  f.H = kron<Scalar>(o.v22_inv.adjoint(), o.w1_inv.adjoint()) * pi;

  Mat<Scalar> dg = Mat<Scalar>::Zero(n, n);
  dg.bottomRightCorner(n - r, n - r).setIdentity();
  f.S = o.s_r.template cast<Scalar>().asDiagonal();
  const Mat<Scalar> sig2 = o.sig2.template cast<Scalar>().asDiagonal();
  const Mat<Scalar> id_d = Mat<Scalar>::Identity(d, d);
  const Mat<Scalar> id_n = Mat<Scalar>::Identity(n, n);
  const Mat<Scalar> operand = kron<Scalar>(f.S * f.S, id_d) - kron<Scalar>(dg, sig2.adjoint() * sig2);
  Mat<Scalar> rhs(n * d, 2 * n * d);
  rhs << kron<Scalar>(id_n, sig2.adjoint()), kron<Scalar>(f.S, id_d);
  f.G = operand.partialPivLu().solve(rhs);

  const Mat<Scalar> z1 = kron<Scalar>(dg, o.bz);
  const Mat<Scalar> z2 = kron<Scalar>(o.lower, id_d);
  f.Z = Mat<Scalar>::Zero(z1.rows() + z2.rows(), z1.cols() + z2.cols());
  f.Z.topLeftCorner(z1.rows(), z1.cols()) = z1;
  f.Z.bottomRightCorner(z2.rows(), z2.cols()) = z2;

  f.Q = o.q;
  f.W = o.w;
  return f;
}

// M = H G Z applied without forming any Kronecker product.
template <class Scalar>
Vec<Scalar> apply_hgz(const OperatorParts<Scalar>& o, const Vec<Scalar>& v) {
  const Index n = o.n, d = o.d, r = o.r;
  const Index n1 = n * (o.r + o.rows);
  const Mat<Scalar> y1 = reshape<Scalar>(v, 0, o.r + o.rows, n);
  const Mat<Scalar> y2 = reshape<Scalar>(v, n1, d, n);
  // Z: kron(Dg, Bz) y1 and kron(L, I) y2, as d x n matrices.
  Mat<Scalar> a = o.bz * y1;
  a.leftCols(r).setZero();
  const Mat<Scalar> b = y2 * o.lower.transpose();
  // G: diagonal solve after [kron(I, Sigma2^H), kron(S_r, I)].
  Mat<Scalar> w(d, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) w(j, i) = (o.sig2(j) * a(j, i) + o.s_r(i) * b(j, i)) / o.denom(j, i);
  }
  // H: vec(W1^{-H} w^T conj(V22^{-1})).
  const Mat<Scalar> out = o.w1_inv.adjoint() * w.transpose() * o.v22_inv.conjugate();
  return Eigen::Map<const Vec<Scalar>>(out.data(), n * d);
}

template <class Scalar>
Vec<Scalar> apply_hgz_adjoint(const OperatorParts<Scalar>& o, const Vec<Scalar>& u) {
  const Index n = o.n, d = o.d, r = o.r;
  const Mat<Scalar> y = reshape<Scalar>(u, 0, n, d);
  const Mat<Scalar> w = o.v22_inv * y.transpose() * o.w1_inv.transpose();  // d x n
  Mat<Scalar> a(d, n), b(d, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      const Scalar t = w(j, i) / o.denom(j, i);
      a(j, i) = o.sig2(j) * t;
      b(j, i) = o.s_r(i) * t;
    }
  }
  a.leftCols(r).setZero();
  const Mat<Scalar> z1 = o.bz.adjoint() * a;
  const Mat<Scalar> z2 = b * o.lower.conjugate();
  Vec<Scalar> out(o.in_dim());
  out.head(z1.size()) = Eigen::Map<const Vec<Scalar>>(z1.data(), z1.size());
  out.tail(z2.size()) = Eigen::Map<const Vec<Scalar>>(z2.data(), z2.size());
  return out;
}

template <class Scalar>
void condition_impl(const TlseFactors<Scalar>& f, const Mat<Scalar>& x, double data_norm,
                    const ConditionOptions& opts, ConditionReport& report,
                    std::optional<ConditionFactors<Scalar>>& retained) {
  const double x_norm = x.norm();
  if (!(x_norm > 0.0)) throw Error(ErrorCode::ConditioningUndefined, "solution is zero");

  const OperatorParts<Scalar> o = build_parts(f, opts);
  const Index nd = o.n * o.d;
  const double entries = static_cast<double>(nd) * static_cast<double>(o.in_dim());

  bool dense = opts.strategy == ConditionStrategy::Dense ||
               (opts.strategy == ConditionStrategy::Auto && entries <= opts.dense_entry_limit);
  double op_norm = 0.0;
  if (dense) {
    ConditionFactors<Scalar> cf = dense_factors(o);
    assert_shape("H", cf.H.rows(), cf.H.cols(), nd, nd);
    assert_shape("G", cf.G.rows(), cf.G.cols(), nd, 2 * nd);
    assert_shape("Z", cf.Z.rows(), cf.Z.cols(), 2 * nd, o.in_dim());
    const Mat<Scalar> m = cf.H * (cf.G * cf.Z);
    // ||M||_2 from the small nd x nd Gram matrix.
    const Mat<Scalar> gram = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
    op_norm = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    report.method_used = NormMethod::Dense;
    if (opts.retain_factors) retained = std::move(cf);
  } else {
    LinearOperator<Scalar> adj;
    adj.rows = o.in_dim();
    adj.cols = nd;
    adj.apply = [&o](const Vec<Scalar>& u) { return apply_hgz_adjoint(o, u); };
    adj.apply_adjoint = [&o](const Vec<Scalar>& v) { return apply_hgz(o, v); };
    op_norm = spectral_norm_iterative(adj, opts.power);
    report.method_used = NormMethod::Iterative;
  }
  report.kappa = op_norm * data_norm / x_norm;
}

}  // namespace

TlseProblem PerturbationInstance::perturbed() const {
  validate();
  return TlseProblem{base.A + dA, base.B + dB, base.C + dC, base.D + dD};
}

void PerturbationInstance::validate() const {
  require_same_shape(base.A, dA, "dA");
  require_same_shape(base.B, dB, "dB");
  require_same_shape(base.C, dC, "dC");
  require_same_shape(base.D, dD, "dD");
}

double epsilon_n(const PerturbationInstance& instance) {
  instance.validate();
  const double denom = problem_norm(instance.base);
  if (!(denom > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon_n: ||[J, K]||_F is zero");
  const TlseProblem deltas{instance.dA, instance.dB, instance.dC, instance.dD};
  return problem_norm(deltas) / denom;
}

ConditionReport condition_real(const TlseProblem& problem, const TlseRealSolution& solution,
                               const ConditionOptions& opts) {
  ConditionReport report;
  condition_impl<double>(solution.factors, solution.X, problem_norm(problem), opts, report,
                         report.real_factors);
  return report;
}

ConditionReport condition_complex(const TlseProblem& problem, const TlseComplexSolution& solution,
                                  const ConditionOptions& opts) {
  ConditionReport report;
  condition_impl<Complex>(solution.factors, solution.X, problem_norm(problem), opts, report,
                          report.complex_factors);
  return report;
}

double forward_error_bound(const ConditionReport& report) { return report.kappa * report.eps_n; }

double relative_forward_error(const RealMatrix& x, const RealMatrix& x_perturbed) {
  return (x - x_perturbed).norm() / x.norm();
}

double relative_forward_error(const ComplexMatrix& x, const ComplexMatrix& x_perturbed) {
  return (x - x_perturbed).norm() / x.norm();
}

ConditionReport assess_real(const PerturbationInstance& instance, const ToleranceConfig& tol,
                            const ConditionOptions& opts) {
  const double eps = epsilon_n(instance);
  const TlseRealSolution base = solve_real(instance.base, tol);
  const TlseRealSolution pert = solve_real(instance.perturbed(), tol);
  ConditionReport report = condition_real(instance.base, base, opts);
  report.eps_n = eps;
  report.bound = forward_error_bound(report);
  report.forward_error = relative_forward_error(base.X, pert.X);
  return report;
}

ConditionReport assess_complex(const PerturbationInstance& instance, const ToleranceConfig& tol,
                               const ConditionOptions& opts) {
  const double eps = epsilon_n(instance);
  const TlseComplexSolution base = solve_complex(instance.base, tol);
  const TlseComplexSolution pert = solve_complex(instance.perturbed(), tol);
  ConditionReport report = condition_complex(instance.base, base, opts);
  report.eps_n = eps;
  report.bound = forward_error_bound(report);
  report.forward_error = relative_forward_error(base.X, pert.X);
  return report;
}

}  // namespace rbtlse

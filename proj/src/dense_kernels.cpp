#include "rbtlse/dense_kernels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "rbtlse/errors.hpp"

namespace rbtlse {

namespace {

template <class Scalar>
Scalar random_entry(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  if constexpr (std::is_same_v<Scalar, double>) {
    return dist(gen);
  } else {
    const double re = dist(gen);
    return Scalar(re, dist(gen));
  }
}

}  // namespace

template <class Scalar>
QrFactors<Scalar> qr_full(const Mat<Scalar>& m) {
  const Eigen::Index r = m.rows();
  const Eigen::Index c = m.cols();
  QrFactors<Scalar> out;
  if (r == 0 || c == 0) {
    out.Q = Mat<Scalar>::Identity(r, r);
    out.R = Mat<Scalar>::Zero(r, c);
    return out;
  }
  Eigen::HouseholderQR<Mat<Scalar>> qr(m);
  out.Q = qr.householderQ();
  out.R = qr.matrixQR().template triangularView<Eigen::Upper>();
  return out;
}

template <class Scalar>
SvdFactors<Scalar> svd_thin(const Mat<Scalar>& m) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  SvdFactors<Scalar> out;
  if (k == 0) {
    out.U = Mat<Scalar>::Zero(m.rows(), 0);
    out.S = Eigen::VectorXd::Zero(0);
    out.V = Mat<Scalar>::Zero(m.cols(), 0);
    return out;
  }
  Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.U = svd.matrixU();
  out.S = svd.singularValues();
  out.V = svd.matrixV();
  return out;
}

Eigen::Index numerical_rank(const Eigen::VectorXd& s, Eigen::Index rows, Eigen::Index cols) {
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  const double threshold =
      static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * s(0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > threshold) ++rank;
  return rank;
}

template <class Scalar>
SvdFactors<Scalar> svd_skinny(const Mat<Scalar>& m) {
  SvdFactors<Scalar> thin = svd_thin(m);
  const Eigen::Index rank = numerical_rank(thin.S, m.rows(), m.cols());
  if (rank == thin.S.size()) return thin;
  SvdFactors<Scalar> out;
  out.U = thin.U.leftCols(rank);
  out.S = thin.S.head(rank);
  out.V = thin.V.leftCols(rank);
  return out;
}

template <class Scalar>
Mat<Scalar> pinv(const Mat<Scalar>& m) {
  const SvdFactors<Scalar> f = svd_skinny(m);
  const Eigen::VectorXd inv = f.S.cwiseInverse();
  return f.V * inv.template cast<Scalar>().asDiagonal() * f.U.adjoint();
}

template <class Scalar>
Mat<Scalar> kron(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  const double entries = static_cast<double>(a.rows()) * static_cast<double>(b.rows()) *
                         static_cast<double>(a.cols()) * static_cast<double>(b.cols());
  if (entries > kKronMaxEntries) {
    throw Error(ErrorCode::SizeLimit, "kron: product would have " + std::to_string(entries) +
                                          " entries (limit 1e8)");
  }
  Mat<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXd commutation_matrix(Eigen::Index d, Eigen::Index n) {
  if (d < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "commutation_matrix: d and n must be >= 1");
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(d * n, d * n);
  // vec(X)[i + j d] = X(i, j) = vec(X^T)[j + i n]
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) pi(j + i * n, i + j * d) = 1.0;
  }
  return pi;
}

template <class Scalar>
double spectral_norm_iterative(const LinearOperator<Scalar>& op, const PowerIterationOptions& opts) {
  if (op.rows == 0 || op.cols == 0) return 0.0;
  std::mt19937_64 gen(opts.seed);
  Vec<Scalar> x(op.cols);
  for (Eigen::Index i = 0; i < op.cols; ++i) x(i) = random_entry<Scalar>(gen);
  x.normalize();

  double estimate = 0.0;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Vec<Scalar> y = op.apply(x);
    const Vec<Scalar> z = op.apply_adjoint(y);
    // Rayleigh quotient of M^H M at unit x.
    const double rho = y.squaredNorm();
    estimate = std::sqrt(rho);
    const double znorm = z.norm();
    if (znorm == 0.0) return 0.0;
    // Eigen-residual of M^H M; small residual means the estimate has settled.
    const double residual = (z - Scalar(rho) * x).norm();
    x = z / znorm;
    if (residual <= opts.tolerance * rho) return estimate;
  }
  throw NonConvergenceError("spectral_norm: power iteration did not converge in " +
                                std::to_string(opts.max_iterations) + " iterations",
                            estimate, it);
}

template <class Scalar>
double spectral_norm(const Mat<Scalar>& m, NormMethod method, const PowerIterationOptions& opts) {
  if (m.size() == 0) return 0.0;
  if (method == NormMethod::Dense) {
    Eigen::BDCSVD<Mat<Scalar>> svd(m);
    return svd.singularValues()(0);
  }
  LinearOperator<Scalar> op;
  op.rows = m.rows();
  op.cols = m.cols();
  op.apply = [&m](const Vec<Scalar>& v) -> Vec<Scalar> { return m * v; };
  op.apply_adjoint = [&m](const Vec<Scalar>& v) -> Vec<Scalar> { return m.adjoint() * v; };
  return spectral_norm_iterative(op, opts);
}

#define RBTLSE_INSTANTIATE(S)                                                                      \
  template QrFactors<S> qr_full<S>(const Mat<S>&);                                                 \
  template SvdFactors<S> svd_thin<S>(const Mat<S>&);                                               \
  template SvdFactors<S> svd_skinny<S>(const Mat<S>&);                                             \
  template Mat<S> pinv<S>(const Mat<S>&);                                                          \
  template Mat<S> kron<S>(const Mat<S>&, const Mat<S>&);                                           \
  template double spectral_norm_iterative<S>(const LinearOperator<S>&, const PowerIterationOptions&); \
  template double spectral_norm<S>(const Mat<S>&, NormMethod, const PowerIterationOptions&);

RBTLSE_INSTANTIATE(double)
RBTLSE_INSTANTIATE(std::complex<double>)

#undef RBTLSE_INSTANTIATE

}  // namespace rbtlse

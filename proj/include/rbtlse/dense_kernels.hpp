#pragma once

// Dense factorizations and products used by the solvers. Every routine comes
// in a real and a complex flavour; the complex one uses conjugate transposes.

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace rbtlse {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
struct QrFactors {
  Mat<Scalar> Q;  // r x r, orthogonal / unitary
  Mat<Scalar> R;  // r x c, upper triangular (trapezoidal when r != c)
};

template <class Scalar>
struct SvdFactors {
  Mat<Scalar> U;      // r x k, orthonormal columns
  Eigen::VectorXd S;  // k values, nonincreasing
  Mat<Scalar> V;      // c x k, orthonormal columns; M = U diag(S) V^H
};

/// Householder QR keeping the full square Q, so the trailing columns give an
/// orthonormal basis for the complement of the column space.
template <class Scalar>
QrFactors<Scalar> qr_full(const Mat<Scalar>& m);

/// k = min(r, c) singular triples.
template <class Scalar>
SvdFactors<Scalar> svd_thin(const Mat<Scalar>& m);

/// Keeps sigma_i > max(r, c) * eps * sigma_1 only.
template <class Scalar>
SvdFactors<Scalar> svd_skinny(const Mat<Scalar>& m);

/// Numerical rank under the same threshold svd_skinny uses.
Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, Eigen::Index rows, Eigen::Index cols);

template <class Scalar>
Mat<Scalar> pinv(const Mat<Scalar>& m);

/// Refuses to build products with more than kKronMaxEntries entries.
inline constexpr double kKronMaxEntries = 1e8;

template <class Scalar>
Mat<Scalar> kron(const Mat<Scalar>& a, const Mat<Scalar>& b);

/// dn x dn permutation with Pi * vec(X) = vec(X^T) for X d x n (column-major vec).
Eigen::MatrixXd commutation_matrix(Eigen::Index d, Eigen::Index n);

enum class NormMethod { Dense, Iterative };

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 5000;
  unsigned long long seed = 0x5eedULL;
};

/// A linear map given only by its action and the action of its adjoint.
template <class Scalar>
struct LinearOperator {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<Vec<Scalar>(const Vec<Scalar>&)> apply;
  std::function<Vec<Scalar>(const Vec<Scalar>&)> apply_adjoint;
};

/// Largest singular value by power iteration on M^H M. Throws
/// NonConvergenceError (carrying the last estimate) when the relative change
/// does not drop below the tolerance within max_iterations.
template <class Scalar>
double spectral_norm_iterative(const LinearOperator<Scalar>& op, const PowerIterationOptions& opts = {});

template <class Scalar>
double spectral_norm(const Mat<Scalar>& m, NormMethod method = NormMethod::Dense,
                     const PowerIterationOptions& opts = {});

}  // namespace rbtlse

#pragma once

// Reduced biquaternion scalars and matrices.
//
// A reduced biquaternion is a0 + a1 i + a2 j + a3 k with the commutative table
//   i^2 = k^2 = -1,  j^2 = 1,  ij = ji = k,  jk = kj = i,  ki = ik = -j.
// Matrices are stored component-major: four real matrices P0..P3 so that
// P = P0 + P1 i + P2 j + P3 k, or equivalently P = R1 + R2 j with
// R1 = P0 + P1 i and R2 = P2 + P3 i.

#include <array>
#include <complex>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace rbtlse {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

struct RBScalar {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  constexpr RBScalar() = default;
  constexpr RBScalar(double r) : a0(r) {}
  constexpr RBScalar(double r, double i, double j, double k) : a0(r), a1(i), a2(j), a3(k) {}

  static constexpr RBScalar i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr RBScalar j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr RBScalar k() { return {0.0, 0.0, 0.0, 1.0}; }

  /// Embeds x + y i, which is how complex solutions live inside the algebra.
  static constexpr RBScalar from_complex(Complex z) { return {z.real(), z.imag(), 0.0, 0.0}; }

  double norm() const;

  friend constexpr bool operator==(const RBScalar&, const RBScalar&) = default;
};

RBScalar operator+(const RBScalar& x, const RBScalar& y);
RBScalar operator-(const RBScalar& x, const RBScalar& y);
RBScalar rb_mul(const RBScalar& x, const RBScalar& y);
inline RBScalar operator*(const RBScalar& x, const RBScalar& y) { return rb_mul(x, y); }

class RBMatrix {
 public:
  RBMatrix() = default;
  /// Zero matrix. Zero rows are allowed (an absent constraint block).
  RBMatrix(Index rows, Index cols);

  static RBMatrix from_components(RealMatrix p0, RealMatrix p1, RealMatrix p2, RealMatrix p3);
  static RBMatrix from_complex_pair(const ComplexMatrix& r1, const ComplexMatrix& r2);
  /// Real matrix X as X + 0i + 0j + 0k.
  static RBMatrix from_real(const RealMatrix& x);
  /// Complex matrix Z as Re(Z) + Im(Z) i.
  static RBMatrix from_complex(const ComplexMatrix& z);

  Index rows() const { return parts_[0].rows(); }
  Index cols() const { return parts_[0].cols(); }

  const RealMatrix& component(int t) const { return parts_.at(t); }
  RealMatrix& component(int t) { return parts_.at(t); }
  const std::array<RealMatrix, 4>& components() const { return parts_; }

  ComplexMatrix r1() const;
  ComplexMatrix r2() const;

  RBScalar at(Index i, Index j) const;
  void set(Index i, Index j, const RBScalar& v);

  RBMatrix& operator+=(const RBMatrix& o);
  RBMatrix& operator-=(const RBMatrix& o);

  friend bool operator==(const RBMatrix& a, const RBMatrix& b);

 private:
  std::array<RealMatrix, 4> parts_;
};

RBMatrix operator+(RBMatrix a, const RBMatrix& b);
RBMatrix operator-(RBMatrix a, const RBMatrix& b);
RBMatrix operator*(double zeta, const RBMatrix& p);
/// Entrywise product with an RB scalar (covers complex zeta = a0 + a1 i).
RBMatrix operator*(const RBScalar& zeta, const RBMatrix& p);

RBMatrix mat_mul(const RBMatrix& p, const RBMatrix& t);
RBMatrix hstack(const RBMatrix& p, const RBMatrix& q);
RBMatrix vstack(const RBMatrix& p, const RBMatrix& q);

/// sqrt of the sum of squared entry norms.
double frobenius_norm(const RBMatrix& p);

// ---------------------------------------------------------------------------
// Representations.
//
// Real:   P^R = [ P0 -P1  P2 -P3 ;            leading block column
//                 P1  P0  P3  P2 ;            P^R_c = [P0; P1; P2; P3]
//                 P2 -P3  P0 -P1 ;
//                 P3  P2  P1  P0 ]
// Complex: P^C = [R1 R2; R2 R1],  P^C_c = [R1; R2].
// ---------------------------------------------------------------------------

struct RealRepr {
  RealMatrix full;                  // 4m x 4n
  RealMatrix leading_block_column;  // 4m x n
};

struct ComplexRepr {
  ComplexMatrix full;                  // 2m x 2n
  ComplexMatrix leading_block_column;  // 2m x n
};

RealRepr real_repr(const RBMatrix& p);
ComplexRepr complex_repr(const RBMatrix& p);

RealMatrix real_block_column(const RBMatrix& p);
ComplexMatrix complex_block_column(const RBMatrix& p);

/// Inverse of real_block_column: slices a 4m x n stack into components 0..3.
RBMatrix from_real_block_column(const RealMatrix& col);
/// Inverse of complex_block_column: [R1; R2] -> R1 + R2 j.
RBMatrix from_complex_block_column(const ComplexMatrix& col);

/// [P_c, K P_c, L P_c, M P_c], applying K, L, M as signed block permutations.
RealMatrix expand_real_block_column(const RealMatrix& col);
/// [P_c, N P_c].
ComplexMatrix expand_complex_block_column(const ComplexMatrix& col);

// ---------------------------------------------------------------------------
// RBMAT v1 text format.
//
//   RBMAT <m> <n>
//   m lines of n numbers      (component 0)
//   <blank>
//   m lines of n numbers      (component 1)
//   <blank> ...               (components 2 and 3)
// ---------------------------------------------------------------------------

void write_rbmat(std::ostream& out, const RBMatrix& p);
RBMatrix read_rbmat(std::istream& in);
void save_rbmat(const std::string& path, const RBMatrix& p);
RBMatrix load_rbmat(const std::string& path);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace rbtlse

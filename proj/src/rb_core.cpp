#include "rbtlse/rb_core.hpp"

#include <cmath>

#include "rbtlse/errors.hpp"

namespace rbtlse {

namespace {

void require_same_shape(const RBMatrix& a, const RBMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

double RBScalar::norm() const { return std::sqrt(a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3); }

RBScalar operator+(const RBScalar& x, const RBScalar& y) {
  return {x.a0 + y.a0, x.a1 + y.a1, x.a2 + y.a2, x.a3 + y.a3};
}

RBScalar operator-(const RBScalar& x, const RBScalar& y) {
  return {x.a0 - y.a0, x.a1 - y.a1, x.a2 - y.a2, x.a3 - y.a3};
}

RBScalar rb_mul(const RBScalar& x, const RBScalar& y) {
  // Paired terms keep x*y and y*x bit-identical.
  return {(x.a0 * y.a0 + x.a2 * y.a2) - (x.a1 * y.a1 + x.a3 * y.a3),
          (x.a0 * y.a1 + x.a1 * y.a0) + (x.a2 * y.a3 + x.a3 * y.a2),
          (x.a0 * y.a2 + x.a2 * y.a0) - (x.a1 * y.a3 + x.a3 * y.a1),
          (x.a0 * y.a3 + x.a3 * y.a0) + (x.a1 * y.a2 + x.a2 * y.a1)};
}

RBMatrix::RBMatrix(Index rows, Index cols) {
  if (rows < 0 || cols < 0) throw Error(ErrorCode::InvalidArgument, "RBMatrix: negative dimension");
  for (auto& p : parts_) p = RealMatrix::Zero(rows, cols);
}

RBMatrix RBMatrix::from_components(RealMatrix p0, RealMatrix p1, RealMatrix p2, RealMatrix p3) {
  const Index m = p0.rows();
  const Index n = p0.cols();
  for (const RealMatrix* p : {&p1, &p2, &p3}) {
    if (p->rows() != m || p->cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "RBMatrix::from_components: components differ in shape");
    }
  }
  RBMatrix out;
  out.parts_ = {std::move(p0), std::move(p1), std::move(p2), std::move(p3)};
  return out;
}

RBMatrix RBMatrix::from_complex_pair(const ComplexMatrix& r1, const ComplexMatrix& r2) {
  if (r1.rows() != r2.rows() || r1.cols() != r2.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "RBMatrix::from_complex_pair: R1 and R2 differ in shape");
  }
  return from_components(r1.real(), r1.imag(), r2.real(), r2.imag());
}

RBMatrix RBMatrix::from_real(const RealMatrix& x) {
  RBMatrix out(x.rows(), x.cols());
  out.parts_[0] = x;
  return out;
}

RBMatrix RBMatrix::from_complex(const ComplexMatrix& z) {
  RBMatrix out(z.rows(), z.cols());
  out.parts_[0] = z.real();
  out.parts_[1] = z.imag();
  return out;
}

ComplexMatrix RBMatrix::r1() const {
  ComplexMatrix out(rows(), cols());
  out.real() = parts_[0];
  out.imag() = parts_[1];
  return out;
}

ComplexMatrix RBMatrix::r2() const {
  ComplexMatrix out(rows(), cols());
  out.real() = parts_[2];
  out.imag() = parts_[3];
  return out;
}

RBScalar RBMatrix::at(Index i, Index j) const {
  return {parts_[0](i, j), parts_[1](i, j), parts_[2](i, j), parts_[3](i, j)};
}

void RBMatrix::set(Index i, Index j, const RBScalar& v) {
  parts_[0](i, j) = v.a0;
  parts_[1](i, j) = v.a1;
  parts_[2](i, j) = v.a2;
  parts_[3](i, j) = v.a3;
}

RBMatrix& RBMatrix::operator+=(const RBMatrix& o) {
  require_same_shape(*this, o, "RBMatrix +=");
  for (int t = 0; t < 4; ++t) parts_[t] += o.parts_[t];
  return *this;
}

RBMatrix& RBMatrix::operator-=(const RBMatrix& o) {
  require_same_shape(*this, o, "RBMatrix -=");
  for (int t = 0; t < 4; ++t) parts_[t] -= o.parts_[t];
  return *this;
}

bool operator==(const RBMatrix& a, const RBMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int t = 0; t < 4; ++t) {
    if (a.parts_[t] != b.parts_[t]) return false;
  }
  return true;
}

RBMatrix operator+(RBMatrix a, const RBMatrix& b) { return a += b; }
RBMatrix operator-(RBMatrix a, const RBMatrix& b) { return a -= b; }

RBMatrix operator*(double zeta, const RBMatrix& p) {
  return RBMatrix::from_components(zeta * p.component(0), zeta * p.component(1),
                                   zeta * p.component(2), zeta * p.component(3));
}

RBMatrix operator*(const RBScalar& z, const RBMatrix& p) {
  const auto& [p0, p1, p2, p3] = p.components();
  return RBMatrix::from_components(z.a0 * p0 - z.a1 * p1 + z.a2 * p2 - z.a3 * p3,
                                   z.a0 * p1 + z.a1 * p0 + z.a2 * p3 + z.a3 * p2,
                                   z.a0 * p2 + z.a2 * p0 - z.a1 * p3 - z.a3 * p1,
                                   z.a0 * p3 + z.a3 * p0 + z.a1 * p2 + z.a2 * p1);
}

RBMatrix mat_mul(const RBMatrix& p, const RBMatrix& t) {
  if (p.cols() != t.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "mat_mul: inner dimensions " + std::to_string(p.cols()) + " and " + std::to_string(t.rows()));
  }
  const auto& [p0, p1, p2, p3] = p.components();
  const auto& [t0, t1, t2, t3] = t.components();
  // Same table as rb_mul, lifted to blocks.
  RealMatrix c0 = p0 * t0 - p1 * t1 + p2 * t2 - p3 * t3;
  RealMatrix c1 = p0 * t1 + p1 * t0 + p2 * t3 + p3 * t2;
  RealMatrix c2 = p0 * t2 + p2 * t0 - p1 * t3 - p3 * t1;
  RealMatrix c3 = p0 * t3 + p3 * t0 + p1 * t2 + p2 * t1;
  return RBMatrix::from_components(std::move(c0), std::move(c1), std::move(c2), std::move(c3));
}

RBMatrix hstack(const RBMatrix& p, const RBMatrix& q) {
  if (p.rows() != q.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack: row counts differ");
  std::array<RealMatrix, 4> out;
  for (int t = 0; t < 4; ++t) {
    out[t].resize(p.rows(), p.cols() + q.cols());
    out[t] << p.component(t), q.component(t);
  }
  return RBMatrix::from_components(std::move(out[0]), std::move(out[1]), std::move(out[2]), std::move(out[3]));
}

RBMatrix vstack(const RBMatrix& p, const RBMatrix& q) {
  if (p.cols() != q.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack: column counts differ");
  std::array<RealMatrix, 4> out;
  for (int t = 0; t < 4; ++t) {
    out[t].resize(p.rows() + q.rows(), p.cols());
    out[t] << p.component(t), q.component(t);
  }
  return RBMatrix::from_components(std::move(out[0]), std::move(out[1]), std::move(out[2]), std::move(out[3]));
}

double frobenius_norm(const RBMatrix& p) {
  double sum = 0.0;
  for (const auto& c : p.components()) sum += c.squaredNorm();
  return std::sqrt(sum);
}

RealMatrix real_block_column(const RBMatrix& p) {
  const Index m = p.rows();
  RealMatrix col(4 * m, p.cols());
  for (int t = 0; t < 4; ++t) col.middleRows(t * m, m) = p.component(t);
  return col;
}

ComplexMatrix complex_block_column(const RBMatrix& p) {
  const Index m = p.rows();
  ComplexMatrix col(2 * m, p.cols());
  col.topRows(m) = p.r1();
  col.bottomRows(m) = p.r2();
  return col;
}

RBMatrix from_real_block_column(const RealMatrix& col) {
  if (col.rows() % 4 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "from_real_block_column: row count not divisible by 4");
  }
  const Index m = col.rows() / 4;
  return RBMatrix::from_components(col.middleRows(0, m), col.middleRows(m, m), col.middleRows(2 * m, m),
                                   col.middleRows(3 * m, m));
}

RBMatrix from_complex_block_column(const ComplexMatrix& col) {
  if (col.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "from_complex_block_column: row count not even");
  }
  const Index m = col.rows() / 2;
  return RBMatrix::from_complex_pair(col.topRows(m), col.bottomRows(m));
}

RealMatrix expand_real_block_column(const RealMatrix& col) {
  if (col.rows() % 4 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "expand_real_block_column: row count not divisible by 4");
  }
  const Index m = col.rows() / 4;
  const Index n = col.cols();
  auto blk = [&](int t) { return col.middleRows(t * m, m); };
  RealMatrix full(4 * m, 4 * n);
  full.leftCols(n) = col;
  // K_m P_c = [-P1; P0; -P3; P2]
  full.block(0, n, m, n) = -blk(1);
  full.block(m, n, m, n) = blk(0);
  full.block(2 * m, n, m, n) = -blk(3);
  full.block(3 * m, n, m, n) = blk(2);
  // L_m P_c = [P2; P3; P0; P1]
  full.block(0, 2 * n, m, n) = blk(2);
  full.block(m, 2 * n, m, n) = blk(3);
  full.block(2 * m, 2 * n, m, n) = blk(0);
  full.block(3 * m, 2 * n, m, n) = blk(1);
  // M_m P_c = [-P3; P2; -P1; P0]
  full.block(0, 3 * n, m, n) = -blk(3);
  full.block(m, 3 * n, m, n) = blk(2);
  full.block(2 * m, 3 * n, m, n) = -blk(1);
  full.block(3 * m, 3 * n, m, n) = blk(0);
  return full;
}

ComplexMatrix expand_complex_block_column(const ComplexMatrix& col) {
  if (col.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "expand_complex_block_column: row count not even");
  }
  const Index m = col.rows() / 2;
  const Index n = col.cols();
  ComplexMatrix full(2 * m, 2 * n);
  full.leftCols(n) = col;
  full.block(0, n, m, n) = col.bottomRows(m);
  full.block(m, n, m, n) = col.topRows(m);
  return full;
}

RealRepr real_repr(const RBMatrix& p) {
  RealRepr r;
  r.leading_block_column = real_block_column(p);
  r.full = expand_real_block_column(r.leading_block_column);
  return r;
}

ComplexRepr complex_repr(const RBMatrix& p) {
  ComplexRepr r;
  r.leading_block_column = complex_block_column(p);
  r.full = expand_complex_block_column(r.leading_block_column);
  return r;
}

}  // namespace rbtlse

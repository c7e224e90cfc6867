#pragma once

// Exact dense linear algebra over Integer and Rational.
//
// Eigen's own decompositions pivot on magnitude and assume an inexact field;
// everything here is fraction-free or exact-rational instead.

#include "bvtk/arith.hpp"

#include <optional>
#include <utility>

namespace bvtk {

/// Bareiss fraction-free determinant. Every division is exact over both
/// Integer and Rational.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  if (n != input.cols()) throw PreconditionError("determinant of a non-square matrix");
  if (n == 0) return Scalar(1);
  Matrix<Scalar> m = input;
  Scalar sign = 1;
  Scalar prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return Scalar(0);
      m.row(k).swap(m.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Rank via exact Gaussian elimination over the rationals.
template <typename Derived>
Eigen::Index rank(const Eigen::MatrixBase<Derived>& input) {
  Matrix<Rational> m = input.template cast<Rational>();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < m.cols() && r < m.rows(); ++c) {
    Eigen::Index p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.row(r).swap(m.row(p));
    for (Eigen::Index i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const Rational f = m(i, c) / m(r, c);
      m.row(i) -= f * m.row(r);
    }
    ++r;
  }
  return r;
}

/// Solves A x = b for square nonsingular A; nullopt when A is singular.
template <typename DerivedA, typename DerivedB>
std::optional<RationalVec> solve(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  const Eigen::Index n = a.rows();
  Matrix<Rational> m(n, n + 1);
  m.leftCols(n) = a.template cast<Rational>();
  m.col(n) = b.template cast<Rational>();
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return std::nullopt;
    m.row(c).swap(m.row(p));
    const Rational inv = Rational(1) / m(c, c);
    m.row(c) *= inv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      m.row(i) -= f * m.row(c);
    }
  }
  return RationalVec(m.col(n));
}

/// Adjugate of a square integer matrix, so that A * adj(A) = det(A) * I.
inline std::pair<Matrix<Integer>, Integer> adjugate(const Matrix<Integer>& a) {
  const Eigen::Index n = a.rows();
  const Integer det = determinant(a);
  Matrix<Integer> adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return {adj, det};
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix<Integer> minor(n - 1, n - 1);
      for (Eigen::Index r = 0, mr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, mc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(mr, mc++) = a(r, c);
        }
        ++mr;
      }
      const Integer cof = determinant(minor);
      adj(i, j) = ((i + j) % 2 == 0) ? cof : Integer(-cof);
    }
  }
  return {adj, det};
}

/// Integer generator of the kernel of a (k x (k+1)) matrix of rank k, via
/// signed maximal minors. Returns the zero vector when the rank is deficient.
template <typename Derived>
LatticeVec kernel_vector(const Eigen::MatrixBase<Derived>& rows) {
  const Eigen::Index k = rows.rows();
  const Eigen::Index n = rows.cols();
  if (n != k + 1) throw PreconditionError("kernel_vector expects a k x (k+1) matrix");
  Matrix<Rational> m = rows.template cast<Rational>();
  // Clear denominators row by row so the minors are integral.
  Matrix<Integer> mi(k, n);
  for (Eigen::Index r = 0; r < k; ++r) {
    Integer l = 1;
    for (Eigen::Index c = 0; c < n; ++c) l = lcm(l, denominator(m(r, c)));
    for (Eigen::Index c = 0; c < n; ++c) mi(r, c) = numerator(m(r, c) * l);
  }
  LatticeVec v(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Matrix<Integer> minor(k, k);
    for (Eigen::Index cc = 0, mc = 0; cc < n; ++cc) {
      if (cc == c) continue;
      minor.col(mc++) = mi.col(cc);
    }
    const Integer d = determinant(minor);
    v(c) = (c % 2 == 0) ? d : Integer(-d);
  }
  return v;
}

}  // namespace bvtk

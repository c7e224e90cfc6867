#pragma once

// Exact scalars and lattice vectors shared by every module.
//
// Integer and Rational are GMP-backed boost::multiprecision numbers with
// expression templates disabled, so they behave as plain value types inside
// Eigen expressions. Results never depend on floating point; doubles only
// steer search heuristics such as where a cone walk starts.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bvtk {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A point of Z^n. Dimension is fixed at construction.
using LatticeVec = Vector<Integer>;
using RationalVec = Vector<Rational>;

/// Raised when an input violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a mathematical invariant the library relies on fails at
/// runtime. Seeing one means a bug or a counterexample.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline LatticeVec lattice(std::initializer_list<long> entries) {
  LatticeVec v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (long e : entries) v(i++) = Integer(e);
  return v;
}

inline LatticeVec unit_vector(Eigen::Index n, Eigen::Index i) {
  LatticeVec v = LatticeVec::Constant(n, Integer(0));
  v(i) = 1;
  return v;
}

inline bool is_zero(const LatticeVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

inline bool is_nonnegative(const LatticeVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) < 0) return false;
  return true;
}

/// Lexicographic three-way comparison; shorter vectors sort first.
std::strong_ordering lex_compare(const LatticeVec& a, const LatticeVec& b);

struct LexLess {
  bool operator()(const LatticeVec& a, const LatticeVec& b) const {
    return lex_compare(a, b) < 0;
  }
};

Integer gcd_of(const LatticeVec& v);

/// v divided by the gcd of its entries.
LatticeVec primitive_part(const LatticeVec& v);

inline bool is_primitive(const LatticeVec& v) { return !is_zero(v) && gcd_of(v) == 1; }

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

/// "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);
/// "(a,b,...)"
std::string to_string(const LatticeVec& v);

/// Parses "p", "-p", "p/q". Throws PreconditionError on malformed input or
/// a zero denominator.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

Integer binomial(long n, long k);
Integer factorial(long n);
Integer pow_int(const Integer& base, unsigned long exponent);
Rational pow_rat(const Rational& base, unsigned long exponent);

}  // namespace bvtk

#include "bvtk/arith.hpp"

#include <algorithm>
#include <cctype>

namespace bvtk {

std::strong_ordering lex_compare(const LatticeVec& a, const LatticeVec& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return std::strong_ordering::less;
    if (b(i) < a(i)) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

Integer gcd_of(const LatticeVec& v) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
  return abs(g);
}

LatticeVec primitive_part(const LatticeVec& v) {
  if (is_zero(v)) throw PreconditionError("zero vector has no primitive part");
  const Integer g = gcd_of(v);
  LatticeVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) / g;
  return out;
}

Integer floor_of(const Rational& x) {
  const Integer n = numerator(x);
  const Integer d = denominator(x);
  Integer q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

Integer ceil_of(const Rational& x) { return -floor_of(-x); }

std::string to_string(const Integer& x) { return x.str(); }

std::string to_string(const LatticeVec& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + v(i).str();
  return out + ")";
}

std::string to_string(const Rational& x) {
  const Integer d = denominator(x);
  if (d == 1) return numerator(x).str();
  return numerator(x).str() + "/" + d.str();
}

Integer parse_integer(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw PreconditionError("empty integer literal");
  s = s.substr(first, last - first + 1);
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw PreconditionError("malformed integer '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw PreconditionError("malformed integer '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s);
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw PreconditionError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Integer factorial(long n) {
  Integer r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

Integer pow_int(const Integer& base, unsigned long exponent) {
  Integer r = 1;
  for (unsigned long i = 0; i < exponent; ++i) r *= base;
  return r;
}

Rational pow_rat(const Rational& base, unsigned long exponent) {
  Rational r = 1;
  for (unsigned long i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace bvtk

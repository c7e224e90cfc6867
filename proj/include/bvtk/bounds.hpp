#pragma once

// Closed-form bounds on automorphism groups and volumes, and exact volumes of
// small rational polytopes.

#include "bvtk/arith.hpp"
#include "bvtk/poly.hpp"

#include <string>
#include <vector>

namespace bvtk {

struct BoundEntry {
  std::string name;
  Rational value;
  std::string formula;
};

/// Named exact quantities. Lower bounds are labelled as such (aut_lower).
struct BoundReport {
  std::string title;
  std::vector<BoundEntry> entries;
  std::vector<std::string> notes;

  /// Throws PreconditionError for an unknown name.
  const Rational& get(const std::string& name) const;
  bool has(const std::string& name) const;
  void add(std::string name, Rational value, std::string formula);
};

/// r_0 .. r_k with r_0 = 1 and r_{i+1} = r_i (r_i + 1).
std::vector<Integer> sylvester(long k);

/// 1 / r_{n+2}^n
Rational min_volume_candidate(long n);

/// Volume of K + sum a_i H_i on P^n for n+2 general hyperplanes:
/// max(0, sum a_i - n - 1)^n.
Rational pn_log_volume(long n, const std::vector<Rational>& a);

/// <normal, x> >= -offset
struct Halfspace {
  LatticeVec normal;
  Rational offset;
};

struct Polytope {
  int dim = 0;
  std::vector<Halfspace> halfspaces;
};

/// Vertices of a nonempty bounded polytope, lexicographically sorted; empty
/// for the empty set. Throws PreconditionError when P is unbounded.
std::vector<RationalVec> polytope_vertices(const Polytope& P);

/// Exact Euclidean volume for dim <= 4; 0 for empty or lower-dimensional P.
Rational polytope_volume(const Polytope& P);

/// {x >= 0, sum x <= d} in R^n
Polytope scaled_simplex(int n, const Rational& d);
/// [0, side]^n
Polytope cube(int n, const Rational& side);

BoundReport hurwitz(long g);
BoundReport product_example(long n, long g);
BoundReport fermat_report(long n, long m);

struct UnitaryPolynomial {
  UniPoly<Integer> poly;  // q^{C(n+2,2)} prod_{i=2}^{n+2} (q^i - (-1)^i)
  long gcd_argument;      // the order is poly(q) / gcd(gcd_argument, q + 1)
  std::string note;
};

UnitaryPolynomial unitary_polynomial(long n);
/// Throws PreconditionError unless q is a prime power.
BoundReport unitary_order(long n, long q);
bool is_prime_power(long q);

/// Fermat curves of degree q+1 for prime powers 3 <= q <= q_max. Throws
/// InvariantError if some order exceeds 216 vol^4.
BoundReport charp_ratio_check(long q_max);

BoundReport constants(long n, const Rational& eps, const Rational& gamma0, const Rational& delta);

}  // namespace bvtk

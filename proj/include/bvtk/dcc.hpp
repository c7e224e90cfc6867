#pragma once

// Coefficient sets in [0,1], the closure under (b1, b2) -> b1 + b2 - 1, and
// descending-chain checks.

#include "bvtk/arith.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bvtk {

/// Largest r used when the standard set {(r-1)/r} is materialized.
inline constexpr long kStandardRMax = 43;

struct CoeffSetDesc {
  enum class Kind { Finite, Standard, Union, AdjClosure };

  static CoeffSetDesc finite(std::vector<Rational> values);
  static CoeffSetDesc standard();
  static CoeffSetDesc union_of(std::vector<CoeffSetDesc> parts);
  /// denom_bound 0 defers to the bound given at materialization time.
  static CoeffSetDesc adj_closure(CoeffSetDesc base, long denom_bound = 0, bool include_one = false);

  Kind kind = Kind::Finite;
  std::vector<Rational> values;     // Finite: sorted, deduplicated
  std::vector<CoeffSetDesc> parts;  // Union parts, or the single AdjClosure base
  long denom_bound = 0;
  bool include_one = false;
};

Rational standard_coeff(long r);

/// b1 + b2 - 1 when that is nonnegative.
std::optional<Rational> adj_op(const Rational& b1, const Rational& b2);

struct Closure {
  std::vector<Rational> values;  // ascending
  /// For each value outside the base, the pair it was first produced from.
  std::map<Rational, std::pair<Rational, Rational>> parents;
};

/// Breadth-first closure of base under adj_op. New values are kept only when
/// their reduced denominator is at most denom_bound (at most 10^6); base
/// values are always kept. Quadratic in the size of the result.
Closure adj_closure_with_parents(const std::vector<Rational>& base, long denom_bound);
std::vector<Rational> adj_closure(const std::vector<Rational>& base, long denom_bound);

/// Like adj_closure, but each step combines a value with a generator only.
/// A subset of adj_closure at the same bound, cheap enough for large bounds;
/// this is what materialize uses for closures.
Closure adj_generated_with_parents(const std::vector<Rational>& base, long denom_bound);
std::vector<Rational> adj_generated(const std::vector<Rational>& base, long denom_bound);

/// Finite part of the described set with denominators capped by denom_bound
/// (the standard set also stops at kStandardRMax), ascending.
std::vector<Rational> materialize(const CoeffSetDesc& desc, long denom_bound);

/// True when the described set is finite as a set, not just materialized.
bool is_finite_set(const CoeffSetDesc& desc);

/// A strictly decreasing chain x_0 > x_1 > ... of positive members converging
/// geometrically to a limit l: each x_{k+1} - l is at most (x_k - l) / 2, and
/// each step takes the largest member allowed. Limits come from {0} and the
/// generators in ascending order; starts are the generators above the limit,
/// smallest first.
struct Chain {
  std::vector<Rational> elements;
  Rational limit;
};

std::optional<Chain> find_decreasing_chain(const CoeffSetDesc& desc, int length, long denom_bound);

struct DccBudget {
  int threshold = 5;
  long denom_bound = 2000;
};

struct DccVerdict {
  enum class Kind { DCC, NOT_DCC, UNKNOWN };
  Kind kind;
  std::optional<Chain> witness;
  /// How each witness element arises from the generators, when known.
  std::vector<std::string> derivations;
  std::string recipe;
};

std::string to_string(DccVerdict::Kind k);

DccVerdict dcc_verdict(const CoeffSetDesc& desc, const DccBudget& budget = {});

}  // namespace bvtk

#include "bvtk/dcc.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>

namespace bvtk {

namespace {

void check_unit(const Rational& x) {
  if (x < 0 || x > 1) throw PreconditionError("coefficient " + to_string(x) + " lies outside [0,1]");
}

// Fractions with small denominators, kept exact in machine integers. Always
// in lowest terms, so equality is componentwise.
struct Frac {
  std::int64_t num;
  std::int64_t den;

  friend bool operator<(const Frac& a, const Frac& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator==(const Frac& a, const Frac& b) { return a.num == b.num && a.den == b.den; }
};

constexpr std::int64_t kMaxBaseDenominator = 1'000'000'000;
constexpr long kMaxDenomBound = 1'000'000;

Frac to_frac(const Rational& x) {
  check_unit(x);
  if (denominator(x) > kMaxBaseDenominator)
    throw PreconditionError("generator " + to_string(x) + " has too large a denominator");
  return Frac{numerator(x).convert_to<std::int64_t>(), denominator(x).convert_to<std::int64_t>()};
}

Rational to_rational(const Frac& f) { return Rational(Integer(f.num), Integer(f.den)); }

std::vector<Rational> to_rationals(const std::vector<Frac>& fs) {
  std::vector<Rational> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(to_rational(f));
  return out;
}

std::vector<Frac> to_fracs(const std::vector<Rational>& xs) {
  std::vector<Frac> out;
  for (const auto& x : xs) out.push_back(to_frac(x));
  return out;
}

std::vector<Frac> sorted_unique(std::vector<Frac> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::optional<Frac> adj_frac(const Frac& x, const Frac& y, long bound) {
  __int128 n = static_cast<__int128>(x.num) * y.den + static_cast<__int128>(y.num) * x.den -
               static_cast<__int128>(x.den) * y.den;
  if (n < 0) return std::nullopt;
  __int128 d = static_cast<__int128>(x.den) * y.den;
  __int128 a = n, b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  n /= a;
  d /= a;
  if (d > bound) return std::nullopt;
  return Frac{static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)};
}

void check_bound(long denom_bound) {
  if (denom_bound < 1) throw PreconditionError("denominator bound must be positive");
  if (denom_bound > kMaxDenomBound) throw PreconditionError("denominator bound above 1000000 is not supported");
}

using ParentMap = std::map<std::pair<std::int64_t, std::int64_t>, std::pair<Frac, Frac>>;

struct FracSet {
  std::vector<Frac> values;  // ascending
  std::vector<Frac> gens;    // ascending
  ParentMap parents;
};

// Breadth-first growth from base; partners(x, all, gens) lists the values
// combined with x.
template <typename Partners>
FracSet grow(const std::vector<Frac>& base, long denom_bound, Partners partners) {
  check_bound(denom_bound);
  FracSet out;
  out.gens = sorted_unique(base);
  std::set<Frac> all(out.gens.begin(), out.gens.end());
  std::deque<Frac> queue(out.gens.begin(), out.gens.end());
  while (!queue.empty()) {
    const Frac x = queue.front();
    queue.pop_front();
    for (const auto& y : partners(x, all, out.gens)) {
      auto z = adj_frac(x, y, denom_bound);
      if (!z || !all.insert(*z).second) continue;
      out.parents.emplace(std::make_pair(z->num, z->den), y < x ? std::make_pair(y, x) : std::make_pair(x, y));
      queue.push_back(*z);
    }
  }
  out.values.assign(all.begin(), all.end());
  return out;
}

FracSet grow_pairwise(const std::vector<Frac>& base, long denom_bound) {
  return grow(base, denom_bound, [](const Frac& x, const std::set<Frac>& all, const std::vector<Frac>&) {
    // Only partners y >= 1 - x give a nonnegative result.
    return std::vector<Frac>(all.lower_bound(Frac{x.den - x.num, x.den}), all.end());
  });
}

FracSet grow_from_generators(const std::vector<Frac>& base, long denom_bound) {
  return grow(base, denom_bound, [](const Frac& x, const std::set<Frac>&, const std::vector<Frac>& gens) {
    return std::vector<Frac>(std::lower_bound(gens.begin(), gens.end(), Frac{x.den - x.num, x.den}), gens.end());
  });
}

Closure to_closure(const FracSet& s) {
  Closure out{to_rationals(s.values), {}};
  for (const auto& [key, pr] : s.parents)
    out.parents.emplace(to_rational(Frac{key.first, key.second}),
                        std::make_pair(to_rational(pr.first), to_rational(pr.second)));
  return out;
}

FracSet materialize_frac(const CoeffSetDesc& desc, long denom_bound) {
  check_bound(denom_bound);
  FracSet out;
  switch (desc.kind) {
    case CoeffSetDesc::Kind::Finite:
      out.values = to_fracs(desc.values);
      break;
    case CoeffSetDesc::Kind::Standard:
      for (long r = 1; r <= std::min(denom_bound, kStandardRMax); ++r) out.values.push_back(Frac{r - 1, r});
      break;
    case CoeffSetDesc::Kind::Union:
      for (const auto& p : desc.parts) {
        auto m = materialize_frac(p, denom_bound);
        out.values.insert(out.values.end(), m.values.begin(), m.values.end());
        out.gens.insert(out.gens.end(), m.gens.begin(), m.gens.end());
        out.parents.insert(m.parents.begin(), m.parents.end());
      }
      out.values = sorted_unique(std::move(out.values));
      out.gens = sorted_unique(std::move(out.gens));
      return out;
    case CoeffSetDesc::Kind::AdjClosure: {
      const long bound = desc.denom_bound > 0 ? desc.denom_bound : denom_bound;
      out = grow_from_generators(materialize_frac(desc.parts.front(), bound).gens, bound);
      if (desc.include_one) {
        out.values.push_back(Frac{1, 1});
        out.values = sorted_unique(std::move(out.values));
      }
      return out;
    }
  }
  out.values = sorted_unique(std::move(out.values));
  out.gens = out.values;
  return out;
}

bool contains_standard(const CoeffSetDesc& d) {
  if (d.kind == CoeffSetDesc::Kind::Standard) return true;
  for (const auto& p : d.parts)
    if (contains_standard(p)) return true;
  return false;
}

void collect_leaves(const ParentMap& parents, const Frac& x, std::vector<Frac>& out) {
  auto it = parents.find({x.num, x.den});
  if (it == parents.end()) {
    out.push_back(x);
    return;
  }
  collect_leaves(parents, it->second.first, out);
  collect_leaves(parents, it->second.second, out);
}

struct FracChain {
  std::vector<Frac> elements;
  Frac limit;
};

std::optional<FracChain> chain_in(const FracSet& s, int length) {
  if (length < 1) throw PreconditionError("chain length must be positive");
  std::vector<Frac> m;
  for (const auto& x : s.values)
    if (x.num > 0) m.push_back(x);
  std::vector<Frac> gens;
  for (const auto& g : s.gens)
    if (g.num > 0 && std::binary_search(m.begin(), m.end(), g)) gens.push_back(g);
  std::vector<Frac> limits{Frac{0, 1}};
  limits.insert(limits.end(), gens.begin(), gens.end());
  for (const auto& limit : limits) {
    const Rational lim = to_rational(limit);
    for (const auto& start : gens) {
      if (!(limit < start)) continue;
      FracChain chain{{start}, limit};
      while (static_cast<int>(chain.elements.size()) < length) {
        // Largest member y with y - limit <= (x - limit) / 2.
        const Rational target = lim + (to_rational(chain.elements.back()) - lim) / 2;
        auto it = std::upper_bound(m.begin(), m.end(), target,
                                   [](const Rational& t, const Frac& f) { return t < to_rational(f); });
        if (it == m.begin()) break;
        --it;
        if (!(limit < *it)) break;
        chain.elements.push_back(*it);
      }
      if (static_cast<int>(chain.elements.size()) == length) return chain;
    }
  }
  return std::nullopt;
}

}  // namespace

CoeffSetDesc CoeffSetDesc::finite(std::vector<Rational> values) {
  for (const auto& x : values) check_unit(x);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  CoeffSetDesc d;
  d.kind = Kind::Finite;
  d.values = std::move(values);
  return d;
}

CoeffSetDesc CoeffSetDesc::standard() {
  CoeffSetDesc d;
  d.kind = Kind::Standard;
  return d;
}

CoeffSetDesc CoeffSetDesc::union_of(std::vector<CoeffSetDesc> parts) {
  if (parts.empty()) throw PreconditionError("a union needs at least one part");
  CoeffSetDesc d;
  d.kind = Kind::Union;
  d.parts = std::move(parts);
  return d;
}

CoeffSetDesc CoeffSetDesc::adj_closure(CoeffSetDesc base, long denom_bound, bool include_one) {
  if (denom_bound < 0) throw PreconditionError("denominator bound must be nonnegative");
  CoeffSetDesc d;
  d.kind = Kind::AdjClosure;
  d.parts.push_back(std::move(base));
  d.denom_bound = denom_bound;
  d.include_one = include_one;
  return d;
}

Rational standard_coeff(long r) {
  if (r < 1) throw PreconditionError("standard coefficients need r >= 1");
  return Rational(r - 1, r);
}

std::optional<Rational> adj_op(const Rational& b1, const Rational& b2) {
  check_unit(b1);
  check_unit(b2);
  Rational s = b1 + b2 - 1;
  if (s < 0) return std::nullopt;
  return s;
}

Closure adj_closure_with_parents(const std::vector<Rational>& base, long denom_bound) {
  return to_closure(grow_pairwise(to_fracs(base), denom_bound));
}

std::vector<Rational> adj_closure(const std::vector<Rational>& base, long denom_bound) {
  return to_rationals(grow_pairwise(to_fracs(base), denom_bound).values);
}

Closure adj_generated_with_parents(const std::vector<Rational>& base, long denom_bound) {
  return to_closure(grow_from_generators(to_fracs(base), denom_bound));
}

std::vector<Rational> adj_generated(const std::vector<Rational>& base, long denom_bound) {
  return to_rationals(grow_from_generators(to_fracs(base), denom_bound).values);
}

std::vector<Rational> materialize(const CoeffSetDesc& desc, long denom_bound) {
  return to_rationals(materialize_frac(desc, denom_bound).values);
}

bool is_finite_set(const CoeffSetDesc& desc) {
  switch (desc.kind) {
    case CoeffSetDesc::Kind::Finite:
      return true;
    case CoeffSetDesc::Kind::Standard:
      return false;
    case CoeffSetDesc::Kind::Union:
    case CoeffSetDesc::Kind::AdjClosure:
      // A finite base closes up finitely: every new value is 1 minus a sum
      // of gaps 1 - b, and only boundedly many positive gaps fit below 1.
      return std::all_of(desc.parts.begin(), desc.parts.end(), is_finite_set);
  }
  return false;
}

std::optional<Chain> find_decreasing_chain(const CoeffSetDesc& desc, int length, long denom_bound) {
  auto chain = chain_in(materialize_frac(desc, denom_bound), length);
  if (!chain) return std::nullopt;
  return Chain{to_rationals(chain->elements), to_rational(chain->limit)};
}

std::string to_string(DccVerdict::Kind k) {
  switch (k) {
    case DccVerdict::Kind::DCC:
      return "DCC";
    case DccVerdict::Kind::NOT_DCC:
      return "NOT_DCC";
    case DccVerdict::Kind::UNKNOWN:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

DccVerdict dcc_verdict(const CoeffSetDesc& desc, const DccBudget& budget) {
  using K = DccVerdict::Kind;
  switch (desc.kind) {
    case CoeffSetDesc::Kind::Finite:
    case CoeffSetDesc::Kind::Standard:
      return DccVerdict{K::DCC, std::nullopt, {}, {}};
    case CoeffSetDesc::Kind::Union: {
      bool unknown = false;
      for (const auto& p : desc.parts) {
        auto v = dcc_verdict(p, budget);
        if (v.kind == K::NOT_DCC) return v;
        if (v.kind == K::UNKNOWN) unknown = true;
      }
      return DccVerdict{unknown ? K::UNKNOWN : K::DCC, std::nullopt, {}, {}};
    }
    case CoeffSetDesc::Kind::AdjClosure:
      break;
  }
  if (is_finite_set(desc)) return DccVerdict{K::DCC, std::nullopt, {}, {}};

  const FracSet s = materialize_frac(desc, budget.denom_bound);
  auto chain = chain_in(s, budget.threshold);
  if (!chain) return DccVerdict{K::UNKNOWN, std::nullopt, {}, {}};

  DccVerdict out{K::NOT_DCC, Chain{to_rationals(chain->elements), to_rational(chain->limit)}, {}, {}};
  for (const auto& x : chain->elements) {
    auto it = s.parents.find({x.num, x.den});
    if (it == s.parents.end()) {
      out.derivations.push_back(to_string(to_rational(x)) + " is a generator");
      continue;
    }
    std::vector<Frac> leaves;
    collect_leaves(s.parents, x, leaves);
    std::sort(leaves.begin(), leaves.end());
    std::string line = to_string(to_rational(x)) + " = " + to_string(to_rational(it->second.first)) + " + " +
                       to_string(to_rational(it->second.second)) + " - 1; generators:";
    for (const auto& l : leaves) line += " " + to_string(to_rational(l));
    out.derivations.push_back(line);
  }
  if (contains_standard(desc.parts.front()))
    out.recipe =
        "(k-1)/q = k/q + (q-1)/q - 1 for 2 <= k <= q-1, so 1/q is reached from (q-1)/q after q-2 steps; "
        "the values 1/q decrease to 0";
  else
    out.recipe = "chain elements are produced by repeated b1 + b2 - 1 from the generators";
  return out;
}

}  // namespace bvtk

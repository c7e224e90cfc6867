#include "bvtk/dcc.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace bvtk;
using namespace testing_support;

namespace {

std::vector<Rational> rats(std::initializer_list<std::pair<long, long>> xs) {
  std::vector<Rational> out;
  for (auto [p, q] : xs) out.push_back(rat(p, q));
  return out;
}

bool is_subset(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("standard coefficients") {
  CHECK(standard_coeff(1) == 0);
  CHECK(standard_coeff(2) == rat(1, 2));
  CHECK(standard_coeff(7) == rat(6, 7));
  CHECK_THROWS_AS(standard_coeff(0), PreconditionError);
}

TEST_CASE("adjunction sum") {
  CHECK(adj_op(rat(1, 2), rat(2, 3)) == rat(1, 6));
  CHECK(adj_op(rat(1, 2), rat(1, 2)) == rat(0));
  CHECK(!adj_op(rat(1, 3), rat(1, 2)).has_value());
  for (long r = 2; r <= 12; ++r)
    for (long i = 1; i < r; ++i) CHECK(adj_op(rat(i, r), rat(r - 1, r)) == rat(i - 1, r));
  CHECK_THROWS_AS(adj_op(rat(3, 2), rat(1, 2)), PreconditionError);
}

TEST_CASE("closure examples") {
  CHECK(adj_closure({rat(1, 2)}, 10) == rats({{0, 1}, {1, 2}}));
  CHECK(adj_closure({rat(4, 5)}, 5) == rats({{0, 1}, {1, 5}, {2, 5}, {3, 5}, {4, 5}}));
  auto c = adj_closure({rat(1, 2), rat(2, 3)}, 6);
  CHECK(std::binary_search(c.begin(), c.end(), rat(1, 6)));
  CHECK(adj_closure({rat(1, 3)}, 10) == rats({{1, 3}}));
  CHECK(adj_closure({rat(1)}, 3) == rats({{1, 1}}));
  // base values are kept even above the bound
  CHECK(adj_closure({rat(6, 7)}, 5) == rats({{6, 7}}));
  CHECK_THROWS_AS(adj_closure({rat(1, 2)}, 0), PreconditionError);
  CHECK_THROWS_AS(adj_closure({rat(1, 2)}, 2'000'000), PreconditionError);
}

TEST_CASE("closure parents are genuine") {
  auto c = adj_closure_with_parents({rat(1, 2), rat(2, 3), rat(6, 7)}, 42);
  for (const auto& [z, pr] : c.parents) {
    CHECK(adj_op(pr.first, pr.second) == z);
    CHECK(std::binary_search(c.values.begin(), c.values.end(), pr.first));
    CHECK(std::binary_search(c.values.begin(), c.values.end(), pr.second));
  }
}

TEST_CASE("closure of a standard generator is every k/q") {
  for (long q = 1; q <= 20; ++q) {
    auto c = adj_closure({standard_coeff(q)}, q);
    REQUIRE(c.size() == static_cast<std::size_t>(q));
    for (long k = 0; k < q; ++k) CHECK(c[static_cast<std::size_t>(k)] == rat(k, q));
  }
}

TEST_CASE("property: closure agrees with a naive fixed point") {
  const std::vector<Rational> pool = rats({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {3, 5}, {7, 10}, {1, 1}});
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Rational> base;
    const long k = uniform(1, 3);
    for (long i = 0; i < k; ++i) base.push_back(pick(pool));
    const long bound = uniform(2, 30);
    auto fast = adj_closure(base, bound);
    auto naive = oracles::closure_fixed_point(base, bound);
    CHECK(fast == std::vector<Rational>(naive.begin(), naive.end()));
    auto gen = adj_generated(base, bound);
    CHECK(is_subset(gen, fast));
  }
}

TEST_CASE("property: closure is monotone") {
  const std::vector<Rational> pool = rats({{1, 2}, {2, 3}, {3, 4}, {5, 6}, {6, 7}, {4, 7}, {8, 9}});
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Rational> base{pick(pool)};
    std::vector<Rational> bigger = base;
    bigger.push_back(pick(pool));
    const long b1 = uniform(2, 25), b2 = b1 + uniform(0, 20);
    CHECK(is_subset(adj_closure(base, b1), adj_closure(base, b2)));
    CHECK(is_subset(adj_closure(base, b1), adj_closure(bigger, b1)));
    CHECK(is_subset(adj_generated(base, b1), adj_generated(bigger, b2)));
  }
}

TEST_CASE("materialization") {
  CHECK(materialize(CoeffSetDesc::finite({rat(6, 7), rat(0), rat(1, 2), rat(1, 2)}), 10) ==
        rats({{0, 1}, {1, 2}, {6, 7}}));
  auto st = materialize(CoeffSetDesc::standard(), 1000);
  CHECK(st.size() == static_cast<std::size_t>(kStandardRMax));
  CHECK(st.back() == rat(42, 43));
  CHECK(materialize(CoeffSetDesc::standard(), 3) == rats({{0, 1}, {1, 2}, {2, 3}}));
  auto u = materialize(CoeffSetDesc::union_of({CoeffSetDesc::finite({rat(1, 3)}), CoeffSetDesc::standard()}), 4);
  CHECK(u == rats({{0, 1}, {1, 3}, {1, 2}, {2, 3}, {3, 4}}));
  auto cl = materialize(CoeffSetDesc::adj_closure(CoeffSetDesc::finite({rat(4, 5)})), 5);
  CHECK(cl == rats({{0, 1}, {1, 5}, {2, 5}, {3, 5}, {4, 5}}));
  auto cl1 = materialize(CoeffSetDesc::adj_closure(CoeffSetDesc::finite({rat(4, 5)}), 0, true), 5);
  CHECK(cl1.back() == 1);
  CHECK(cl1.size() == 6);
  CHECK_THROWS_AS(CoeffSetDesc::finite({rat(2)}), PreconditionError);
  CHECK_THROWS_AS(CoeffSetDesc::union_of({}), PreconditionError);
}

TEST_CASE("decreasing chains") {
  auto fin = CoeffSetDesc::finite(rats({{0, 1}, {1, 2}, {6, 7}}));
  CHECK(!find_decreasing_chain(fin, 4, 100).has_value());
  CHECK(!find_decreasing_chain(fin, 2, 100).has_value());
  auto c2 = find_decreasing_chain(CoeffSetDesc::finite(rats({{1, 4}, {1, 2}, {3, 5}})), 2, 100);
  REQUIRE(c2.has_value());
  CHECK(c2->elements == rats({{1, 2}, {1, 4}}));

  // Only short chains, each stopping above a standard value.
  CHECK(!find_decreasing_chain(CoeffSetDesc::standard(), static_cast<int>(kStandardRMax), 2000).has_value());
  auto sc = find_decreasing_chain(CoeffSetDesc::standard(), 3, 2000);
  REQUIRE(sc.has_value());
  CHECK(sc->limit > 0);

  auto closure = CoeffSetDesc::adj_closure(CoeffSetDesc::standard());
  auto chain = find_decreasing_chain(closure, 5, 2000);
  REQUIRE(chain.has_value());
  CHECK(chain->elements == rats({{1, 2}, {1, 4}, {1, 8}, {1, 16}, {1, 32}}));
  CHECK(chain->limit == 0);
  CHECK_THROWS_AS(find_decreasing_chain(fin, 0, 10), PreconditionError);
}

TEST_CASE("property: chains are decreasing members converging geometrically") {
  const std::vector<CoeffSetDesc> descs{
      CoeffSetDesc::finite(rats({{1, 2}, {1, 4}, {1, 8}, {3, 4}, {7, 8}})),
      CoeffSetDesc::standard(),
      CoeffSetDesc::adj_closure(CoeffSetDesc::standard()),
      CoeffSetDesc::adj_closure(CoeffSetDesc::finite(rats({{5, 6}, {9, 10}}))),
      CoeffSetDesc::union_of({CoeffSetDesc::standard(), CoeffSetDesc::finite(rats({{1, 5}, {1, 10}}))}),
  };
  for (const auto& d : descs)
    for (long bound : {50L, 300L})
      for (int len = 1; len <= 6; ++len) {
        auto chain = find_decreasing_chain(d, len, bound);
        if (!chain) continue;
        auto m = materialize(d, bound);
        REQUIRE(static_cast<int>(chain->elements.size()) == len);
        for (std::size_t i = 0; i < chain->elements.size(); ++i) {
          CHECK(std::binary_search(m.begin(), m.end(), chain->elements[i]));
          CHECK(chain->elements[i] > chain->limit);
          if (i > 0) {
            CHECK(chain->elements[i] < chain->elements[i - 1]);
            CHECK(chain->elements[i] - chain->limit <= (chain->elements[i - 1] - chain->limit) / 2);
          }
        }
      }
}

TEST_CASE("dcc verdicts") {
  using K = DccVerdict::Kind;
  CHECK(dcc_verdict(CoeffSetDesc::finite(rats({{0, 1}, {1, 2}, {6, 7}}))).kind == K::DCC);
  CHECK(dcc_verdict(CoeffSetDesc::standard()).kind == K::DCC);
  CHECK(dcc_verdict(CoeffSetDesc::adj_closure(CoeffSetDesc::finite(rats({{1, 2}, {2, 3}})))).kind == K::DCC);
  CHECK(dcc_verdict(CoeffSetDesc::union_of({CoeffSetDesc::standard(), CoeffSetDesc::finite({rat(1, 3)})})).kind ==
        K::DCC);

  auto v = dcc_verdict(CoeffSetDesc::adj_closure(CoeffSetDesc::standard()));
  CHECK(v.kind == K::NOT_DCC);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->elements.size() == 5);
  CHECK(v.derivations.size() == 5);
  CHECK(!v.recipe.empty());

  auto u = dcc_verdict(
      CoeffSetDesc::union_of({CoeffSetDesc::finite({rat(1, 2)}), CoeffSetDesc::adj_closure(CoeffSetDesc::standard())}));
  CHECK(u.kind == K::NOT_DCC);

  // Tiny budgets cannot produce a witness and must not claim DCC.
  auto weak = dcc_verdict(CoeffSetDesc::adj_closure(CoeffSetDesc::standard()), DccBudget{12, 10});
  CHECK(weak.kind == K::UNKNOWN);
  CHECK(to_string(K::NOT_DCC) == "NOT_DCC");
}

TEST_CASE("property: verdicts are consistent with chain search") {
  const std::vector<Rational> pool = rats({{1, 2}, {2, 3}, {3, 4}, {5, 6}, {6, 7}, {1, 3}});
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rational> vals{pick(pool), pick(pool)};
    CoeffSetDesc d = uniform(0, 1) ? CoeffSetDesc::finite(vals)
                                   : CoeffSetDesc::adj_closure(CoeffSetDesc::finite(vals));
    if (uniform(0, 2) == 0) d = CoeffSetDesc::union_of({d, CoeffSetDesc::standard()});
    auto verdict = dcc_verdict(d, DccBudget{5, 200});
    CHECK(verdict.kind == DccVerdict::Kind::DCC);
    // A DCC set can only hold chains as long as its positive finite part.
    auto m = materialize(d, 200);
    const long positive = std::count_if(m.begin(), m.end(), [](const Rational& x) { return x > 0; });
    CHECK(!find_decreasing_chain(d, static_cast<int>(positive) + 1, 200).has_value());
  }
}

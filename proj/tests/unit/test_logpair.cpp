#include "bvtk/linalg.hpp"
#include "bvtk/logpair.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace bvtk;
using namespace testing_support;

namespace {

MonomialValuation val(std::initializer_list<long> xs) { return MonomialValuation(lattice(xs)); }

LocalSNCPair pair_of(std::initializer_list<Rational> cs) { return LocalSNCPair(std::vector<Rational>(cs)); }

const std::vector<Rational> kCoeffPool{rat(0), rat(1, 2), rat(2, 3), rat(6, 7), rat(41, 42), rat(1)};

LocalSNCPair random_pair(int n) {
  std::vector<Rational> cs;
  for (int i = 0; i < n; ++i) cs.push_back(pick(kCoeffPool));
  return LocalSNCPair(cs);
}

}  // namespace

TEST_CASE("log discrepancy") {
  auto p = pair_of({rat(1, 2), rat(2, 3), rat(6, 7)});
  for (int i = 0; i < 3; ++i) CHECK(log_discrepancy(p, MonomialValuation(unit_vector(3, i))) == 1 - p.coeffs[i]);
  CHECK(log_discrepancy(pair_of({rat(1, 2), rat(1, 2)}), val({1, 1})) == 1);
  CHECK(log_discrepancy(pair_of({rat(0), rat(0), rat(0)}), val({1, 1, 1})) == 3);
}

TEST_CASE("L and M coefficients") {
  for (auto b1 : kCoeffPool)
    for (auto b2 : kCoeffPool) {
      Rational e = b1 + b2 - 1;
      CHECK(L_coeff(pair_of({b1, b2}), val({1, 1})) == (e < 0 ? Rational(0) : e));
    }
  CHECK(L_coeff(pair_of({rat(1, 2), rat(2, 3)}), val({2, 1})) == 0);
  auto p = pair_of({rat(1, 2), rat(2, 3)});
  CHECK(L_coeff(p, val({1, 0})) == rat(1, 2));
  CHECK(L_coeff(p, val({0, 1})) == rat(2, 3));
  CHECK(M_coeff(p, val({0, 1})) == rat(2, 3));
  CHECK(M_coeff(p, val({1, 1})) == 1);
  CHECK(M_coeff(p, val({3, 1})) == 1);
}

TEST_CASE("valuations and pairs reject bad input") {
  CHECK_THROWS_AS(val({0, 0}), PreconditionError);
  CHECK_THROWS_AS(val({2, 4}), PreconditionError);
  CHECK_THROWS_AS(val({-1, 1}), PreconditionError);
  CHECK_THROWS_AS(pair_of({rat(3, 2)}), PreconditionError);
  CHECK_THROWS_AS(pair_of({rat(-1, 2)}), PreconditionError);
  CHECK_THROWS_AS(log_discrepancy(pair_of({rat(1, 2)}), val({1, 1})), PreconditionError);
  CHECK_THROWS_AS(BDivisor({rat(1, 2)}, {{lattice({1}), rat(2)}}), PreconditionError);
  CHECK_THROWS_AS(BDivisor({rat(1, 2), rat(1)}, {{lattice({1, 1}), rat(0)}, {lattice({1, 1}), rat(0)}}),
                  PreconditionError);
}

TEST_CASE("b-divisor evaluation") {
  BDivisor b({rat(1, 2), rat(1)}, {{lattice({1, 1}), rat(1, 3)}});
  CHECK(bdiv_eval(b, val({1, 1})) == rat(1, 3));
  CHECK(bdiv_eval(b, val({2, 1})) == 1);
  CHECK(bdiv_eval(b, val({1, 0})) == rat(1, 2));
  CHECK(bdiv_eval(b, val({0, 1})) == 1);
}

TEST_CASE("traces on fans") {
  auto p = pair_of({rat(1, 2), rat(2, 3)});
  auto t = L_trace_on_fan(p, orthant_fan(2));
  CHECK(t.ray_coeffs == std::vector<Rational>{rat(1, 2), rat(2, 3)});

  for (auto b1 : kCoeffPool)
    for (auto b2 : kCoeffPool) {
      auto q = pair_of({b1, b2});
      auto blow = L_trace_on_fan(q, star_subdivide(orthant_fan(2), lattice({1, 1})));
      Rational e = b1 + b2 - 1;
      CHECK(blow.coeff(lattice({1, 1})) == (e < 0 ? Rational(0) : e));
    }

  auto f = ensure_rays(orthant_fan(2), {lattice({1, 2})});
  CHECK(L_trace_on_fan(p, f).coeff(lattice({1, 2})) == 0);
  CHECK_THROWS_AS(L_trace_on_fan(p, orthant_fan(3)), PreconditionError);
}

TEST_CASE("L relative to a model") {
  auto p = pair_of({rat(1, 2), rat(2, 3), rat(6, 7)});
  auto triv = L_trace_on_fan(p, orthant_fan(3));
  for (int k = 0; k < 200; ++k) {
    auto v = random_primitive(3, 12);
    CHECK(L_coeff_rel_model(triv, v) == L_coeff(p, MonomialValuation(v)));
  }

  Fan blow = star_subdivide(orthant_fan(2), lattice({1, 1}));
  std::vector<Rational> coeffs(blow.rays().size());
  coeffs[*blow.ray_index(lattice({1, 0}))] = rat(1, 2);
  coeffs[*blow.ray_index(lattice({0, 1}))] = rat(1);
  coeffs[*blow.ray_index(lattice({1, 1}))] = rat(1, 2);
  ModelDivisor md(blow, coeffs);
  CHECK(L_coeff_rel_model(md, lattice({1, 2})) == rat(1, 2));
  CHECK(L_coeff_rel_model(md, lattice({1, 1})) == rat(1, 2));
}

TEST_CASE("meet") {
  Fan f = orthant_fan(2);
  ModelDivisor a(f, {rat(1, 2), rat(1)});
  ModelDivisor b(f, {rat(2, 3), rat(1, 3)});
  ModelDivisor one(f, {rat(1), rat(1)});
  CHECK(meet(a, a).ray_coeffs == a.ray_coeffs);
  CHECK(meet(a, b).ray_coeffs == std::vector<Rational>{rat(1, 2), rat(1, 3)});
  CHECK(meet(a, one).ray_coeffs == a.ray_coeffs);
  CHECK_THROWS_AS(meet(a, ModelDivisor(star_subdivide(f, lattice({1, 1})), {rat(1), rat(1), rat(1)})),
                  PreconditionError);
}

TEST_CASE("mld at the origin") {
  CHECK(mld_origin(pair_of({rat(0), rat(0), rat(0)})).value == 3);
  CHECK(mld_origin(pair_of({rat(1, 2), rat(1, 2)})).value == 1);
  CHECK(mld_origin(pair_of({rat(2, 3), rat(2, 3)})).value == rat(2, 3));
  auto nonklt = mld_origin(pair_of({rat(1, 2), rat(1)}));
  CHECK_FALSE(nonklt.klt);
  CHECK(nonklt.value == rat(1, 2));
}

TEST_CASE("rounding inequality") {
  auto a = round_identity_check({rat(1, 2)}, 3);
  CHECK(a.lhs == std::vector<Integer>{1});
  CHECK(a.rhs == std::vector<Integer>{1});
  CHECK(a.equal);
  auto b = round_identity_check({rat(2, 5)}, 2);
  CHECK(b.lhs == std::vector<Integer>{0});
  CHECK(b.rhs == std::vector<Integer>{1});
  CHECK_FALSE(b.equal);
  CHECK(b.le);
  for (long m = 1; m <= 100; ++m) CHECK(round_identity_check({rat(6, 7)}, m).equal);
  CHECK_THROWS_AS(round_identity_check({rat(1)}, 3), PreconditionError);
}

TEST_CASE("property: L is the clamped complement of the log discrepancy") {
  for (int k = 0; k < 500; ++k) {
    const int n = static_cast<int>(uniform(1, 4));
    auto p = random_pair(n);
    MonomialValuation nu(random_primitive(n, 9));
    Rational one_minus = 1 - log_discrepancy(p, nu);
    CHECK(L_coeff(p, nu) == (one_minus < 0 ? Rational(0) : one_minus));
  }
}

TEST_CASE("property: affine in nu, pinned at 0 and the unit vectors") {
  for (int k = 0; k < 300; ++k) {
    const int n = static_cast<int>(uniform(1, 4));
    auto p = random_pair(n);
    MonomialValuation nu(random_primitive(n, 9));
    // Affine extension with value 1 at 0 and c_i at e_i.
    Rational affine = 1;
    for (int i = 0; i < n; ++i) affine += Rational(nu.vec()(i)) * (p.coeffs[i] - 1);
    CHECK(1 - log_discrepancy(p, nu) == affine);
  }
}

TEST_CASE("property: agrees with iterated blow-ups in dimension two") {
  for (auto b1 : kCoeffPool)
    for (auto b2 : kCoeffPool)
      for (long v1 = 0; v1 <= 8; ++v1)
        for (long v2 = 0; v2 <= 8; ++v2) {
          if (std::gcd(v1, v2) != 1) continue;
          CHECK(L_coeff(pair_of({b1, b2}), val({v1, v2})) == oracles::blowup_chain_coeff(v1, v2, b1, b2));
        }
}

TEST_CASE("property: L relative to a model is well defined on shared faces") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(uniform(2, 3));
    Fan f = orthant_fan(n);
    for (int k = 0; k < 4; ++k) f = star_subdivide(f, random_orthant_point(n, 6));
    std::vector<Rational> coeffs;
    for (std::size_t r = 0; r < f.rays().size(); ++r) coeffs.push_back(pick(kCoeffPool));
    ModelDivisor md(f, coeffs);
    for (int k = 0; k < 40; ++k) {
      // A point on a face: combination of the rays of a random cone with one coefficient zeroed.
      const auto& cone = f.cones()[static_cast<std::size_t>(uniform(0, static_cast<long>(f.cones().size()) - 1))];
      LatticeVec v = LatticeVec::Constant(n, Integer(0));
      const long skip = uniform(0, n - 1);
      for (int j = 0; j < n; ++j)
        if (j != skip) v += Integer(uniform(1, 4)) * f.rays()[cone[j]];
      const Rational expected = L_affine_rel_model(md, v);
      for (std::size_t c = 0; c < f.cones().size(); ++c) {
        auto lam = solve(f.generators(c), v);
        bool inside = true;
        for (Eigen::Index j = 0; j < lam->size(); ++j) inside = inside && (*lam)(j) >= 0;
        if (!inside) continue;
        Rational value = 1;
        for (int j = 0; j < n; ++j) value -= (*lam)(j) * (1 - coeffs[f.cones()[c][j]]);
        CHECK(value == expected);
      }
    }
  }
}

TEST_CASE("property: L is monotone in the pair") {
  for (int k = 0; k < 300; ++k) {
    const int n = static_cast<int>(uniform(1, 3));
    auto p = random_pair(n);
    auto q = p;
    for (auto& c : q.coeffs)
      if (uniform(0, 1)) c = std::max(c, pick(kCoeffPool));
    MonomialValuation nu(random_primitive(n, 9));
    CHECK(L_coeff(p, nu) <= L_coeff(LocalSNCPair(q.coeffs), nu));
  }
}

TEST_CASE("property: mld box is never beaten by a larger box") {
  for (int k = 0; k < 40; ++k) {
    const int n = static_cast<int>(uniform(1, 3));
    std::vector<Rational> cs;
    for (int i = 0; i < n; ++i) cs.push_back(pick(std::vector<Rational>{rat(0), rat(1, 2), rat(2, 3), rat(6, 7)}));
    LocalSNCPair p(cs);
    auto box = mld_search_box(p);
    Rational best = mld_origin(p).value;
    std::vector<long> v(n, 1);
    while (true) {
      Rational a = 0;
      for (int i = 0; i < n; ++i) a += Rational(v[i]) * (1 - cs[i]);
      CHECK(a >= best);
      int i = n - 1;
      while (i >= 0 && v[i] == 2 * box[i].convert_to<long>()) v[i--] = 1;
      if (i < 0) break;
      ++v[i];
    }
  }
}

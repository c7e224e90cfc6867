// One line per acceptance criterion; exit status 1 if any fails.

#include "bvtk/bounds.hpp"
#include "bvtk/dcc.hpp"
#include "bvtk/logpair.hpp"
#include "bvtk/reduction.hpp"

#include "../unit/instances.hpp"
#include "../unit/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <thread>

using namespace bvtk;
using namespace testing_support;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  std::string info;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<void(Check&)> body;
};

// Sylvester terms by the recursion alone.
std::vector<Integer> sylvester_terms(int k) {
  std::vector<Integer> r{Integer(1)};
  while (static_cast<int>(r.size()) <= k) r.push_back(r.back() * r.back() + r.back());
  return r;
}

void sylvester_suite(Check& c) {
  const auto r = sylvester(8);
  c.expect(r.size() == 9, "sylvester(8) has 9 terms");
  c.expect(r[0] == 1, "r_0 = 1");
  Integer prod = 1;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    c.expect(r[i + 1] == r[i] * (r[i] + 1), "recursion at " + std::to_string(i));
    prod *= r[i] + 1;
    c.expect(r[i + 1] == prod, "product identity at " + std::to_string(i));
  }
  c.expect(r[3] == 42, "r_3 = 42");
  c.expect(min_volume_candidate(1) == Rational(1, 42), "min volume 1/42");
}

void pn_volume_suite(Check& c) {
  for (int n = 1; n <= 4; ++n) {
    const auto r = sylvester_terms(n + 2);
    std::vector<Rational> a;
    for (int i = 0; i < n + 2; ++i) a.push_back(Rational(r[static_cast<std::size_t>(i)]) / Rational(r[static_cast<std::size_t>(i)] + 1));
    Rational expected = 1;
    for (int i = 0; i < n; ++i) expected /= Rational(r[static_cast<std::size_t>(n + 2)]);
    c.expect(pn_log_volume(n, a) == expected, "n = " + std::to_string(n));
    c.expect(min_volume_candidate(n) == expected, "candidate n = " + std::to_string(n));
  }
}

void fermat_suite(Check& c) {
  int first = 0;
  for (long n = 1; n <= 10; ++n) {
    const auto rep = fermat_report(n, n + 3);
    Integer ratio = 1, bound = 1;
    for (long i = 1; i <= n + 2; ++i) ratio *= i;
    for (long i = 0; i < n; ++i) {
      ratio *= n + 3;
      bound *= 42;
    }
    c.expect(rep.get("ratio") == Rational(ratio), "ratio at n = " + std::to_string(n));
    if (ratio > bound && first == 0) first = static_cast<int>(n);
  }
  c.expect(first == 5, "first strict excess at n = 5");
  c.expect(fermat_report(4, 7).get("ratio") == 1728720 && pow_int(42, 4) == 3111696, "n = 4 boundary values");
  c.expect(fermat_report(4, 7).get("ratio") < fermat_report(4, 7).get("42^n"), "n = 4 fails");
  c.expect(fermat_report(5, 8).get("ratio") == 165150720 && pow_int(42, 5) == 130691232, "n = 5 boundary values");
}

bool prime_power_oracle(long q) {
  for (long p = 2; p <= q; ++p) {
    bool prime = true;
    for (long d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
    if (!prime) continue;
    long x = 1;
    while (x < q) x *= p;
    if (x == q) return true;
  }
  return false;
}

void unitary_suite(Check& c) {
  for (long n = 1; n <= 6; ++n) {
    const long expected = (n + 2) * (n + 1) / 2 + (n + 3) * (n + 2) / 2 - 1;
    c.expect(static_cast<long>(*unitary_polynomial(n).poly.degree()) == expected, "degree at n = " + std::to_string(n));
  }
  c.expect(*unitary_polynomial(1).poly.degree() == 8, "deg order = 8");
  const RatPoly vol({Rational(-2), Rational(-1), Rational(1)});  // (q+1)(q-2)
  c.expect(*vol.degree() * 4 == *unitary_polynomial(1).poly.degree(), "8 = 4 deg vol");
  const auto report = charp_ratio_check(50);
  int tested = 0;
  for (long q = 3; q <= 50; ++q) {
    if (!prime_power_oracle(q)) continue;
    ++tested;
    const Integer Q = q;
    const Integer order = Q * Q * Q * (Q * Q - 1) * (Q * Q * Q + 1) / gcd(Integer(3), Q + 1);
    const Integer v = (Q + 1) * (Q - 2);
    c.expect(report.get("order(q=" + std::to_string(q) + ")") == Rational(order), "order at q = " + std::to_string(q));
    c.expect(order <= 216 * v * v * v * v, "216 vol^4 at q = " + std::to_string(q));
  }
  c.expect(tested == 22, "22 prime powers in [3, 50]");
}

void hurwitz_suite(Check& c) {
  for (long g = 2; g <= 100; ++g) {
    const auto h = hurwitz(g);
    c.expect(h.get("bound") == 84 * (g - 1) && h.get("bound") == 42 * (2 * g - 2), "g = " + std::to_string(g));
  }
  for (long n = 1; n <= 5; ++n)
    for (long g = 2; g <= 12; ++g) {
      Integer p = 1;
      for (long i = 0; i < n; ++i) p *= 42;
      c.expect(product_example(n, g).get("ratio") == Rational(p), "product n = " + std::to_string(n));
    }
}

void l_formula_suite(Check& c) {
  const auto& pool = standard_coeffs();
  for (const auto& b1 : pool)
    for (const auto& b2 : pool) {
      LocalSNCPair p({b1, b2});
      for (long v1 = 0; v1 <= 8; ++v1)
        for (long v2 = 0; v2 <= 8; ++v2) {
          if (std::gcd(v1, v2) != 1) continue;
          const Rational fast = L_coeff(p, MonomialValuation(lattice({v1, v2})));
          c.expect(fast == oracles::blowup_chain_coeff(v1, v2, b1, b2),
                   "(" + std::to_string(v1) + "," + std::to_string(v2) + ")");
        }
    }
}

void reduction_suite(Check& c) {
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  int instances = 0;
  long checked = 0, cuts = 0, nontrivial = 0;
  for (int k = 0; k < 210; ++k) {
    const int n = 1 + k % 3;
    // Two in three models start with a witness; the rest are unrestricted.
    auto inst = random_reduction_instance(n);
    for (int tries = 0; k % 3 != 0 && tries < 500 && pair_weight(inst.model, inst.B) < 0; ++tries)
      inst = random_reduction_instance(n);
    const int w0 = pair_weight(inst.model, inst.B);
    if (w0 >= 0) ++nontrivial;
    const auto trace = reduce(inst.model, inst.B);
    int prev = w0;
    for (const auto& st : trace.steps) {
      c.expect(st.weight_before == prev && st.weight_after < st.weight_before, "weights decrease");
      prev = st.weight_after;
    }
    c.expect(prev == -1 && trace.terminated_weight == -1, "ends at -1");
    c.expect(pair_weight(trace.final_state) == -1, "final weight -1");
    const auto report = verify_L_le_B(trace.final_state, 12, threads);
    c.expect(report.ok, "L <= B in box 12 (instance " + std::to_string(k) + ")");
    checked += report.checked;
    cuts += static_cast<long>(trace.steps.size());
    ++instances;
  }
  c.info = std::to_string(instances) + " models (" + std::to_string(nontrivial) + " with witnesses), " + std::to_string(cuts) + " cuts, " + std::to_string(checked) + " valuations checked";
  c.expect(instances >= 200, "at least 200 instances");
  c.expect(nontrivial >= 100, "at least 100 models need a cut");
}

void f_and_mld_suite(Check& c) {
  const std::vector<Rational> pool{Rational(0), Rational(1, 2), Rational(2, 3), Rational(6, 7), Rational(41, 42)};
  for (int k = 0; k < 100; ++k) {
    const int n = static_cast<int>(uniform(1, 3));
    std::vector<Rational> cs;
    for (int i = 0; i < n; ++i) cs.push_back(pick(pool));
    LocalSNCPair pair(cs);
    c.expect(pair.is_klt(), "klt");

    // F by brute force over the box f_i < 1 / (1 - c_i) + 1.
    std::vector<LatticeVec> naive;
    std::vector<long> hi;
    for (const auto& x : cs) hi.push_back(static_cast<long>(ceil_of(1 / (1 - x))));
    std::vector<long> f(static_cast<std::size_t>(n), 0);
    while (true) {
      Rational s = 0;
      for (int i = 0; i < n; ++i) s += f[static_cast<std::size_t>(i)] * (1 - cs[static_cast<std::size_t>(i)]);
      if (s < 1) {
        LatticeVec v(n);
        for (int i = 0; i < n; ++i) v(i) = f[static_cast<std::size_t>(i)];
        naive.push_back(v);
      }
      int i = n - 1;
      while (i >= 0 && f[static_cast<std::size_t>(i)] == hi[static_cast<std::size_t>(i)]) f[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) break;
      ++f[static_cast<std::size_t>(i)];
    }
    std::sort(naive.begin(), naive.end(), LexLess{});
    c.expect(enumerate_F(cs) == naive, "F matches the box");

    // mld by brute force over the doubled box, in integers.
    long D = 1;
    for (const auto& x : cs) D = std::lcm(D, denominator(x).convert_to<long>());
    std::vector<long> w, box;
    for (const auto& x : cs) w.push_back(numerator((1 - x) * D).convert_to<long>());
    for (const auto& b : mld_search_box(pair)) box.push_back(2 * b.convert_to<long>());
    std::vector<long> v(static_cast<std::size_t>(n), 1);
    long best = -1;
    while (true) {
      long g = 0, a = 0;
      for (int i = 0; i < n; ++i) {
        g = std::gcd(g, v[static_cast<std::size_t>(i)]);
        a += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
      }
      if (g == 1 && (best < 0 || a < best)) best = a;
      int i = n - 1;
      while (i >= 0 && v[static_cast<std::size_t>(i)] == box[static_cast<std::size_t>(i)]) v[static_cast<std::size_t>(i--)] = 1;
      if (i < 0) break;
      ++v[static_cast<std::size_t>(i)];
    }
    c.expect(mld_origin(pair).value == Rational(best, D), "mld matches the doubled box");
  }
}

void dcc_suite(Check& c) {
  for (long q = 1; q <= 20; ++q) {
    std::vector<Rational> expected;
    for (long k = 0; k < q; ++k) expected.push_back(Rational(k, q));
    c.expect(adj_closure({Rational(q - 1, q)}, q) == expected, "closure of (q-1)/q at q = " + std::to_string(q));
  }
  const auto closure = CoeffSetDesc::adj_closure(CoeffSetDesc::standard());
  const auto v = dcc_verdict(closure);
  c.expect(v.kind == DccVerdict::Kind::NOT_DCC, "closure of the standard set is not DCC");
  c.expect(v.witness && v.witness->elements.size() >= 5, "witness of length >= 5");
  if (v.witness) {
    std::vector<Rational> base;
    for (long r = 1; r <= kStandardRMax; ++r) base.push_back(Rational(r - 1, r));
    Integer den = 1;
    for (const auto& x : v.witness->elements) den = std::max(den, denominator(x));
    const auto members = oracles::closure_fixed_point(base, den.convert_to<long>());
    const auto& e = v.witness->elements;
    for (std::size_t i = 0; i < e.size(); ++i) {
      c.expect(members.count(e[i]) == 1, to_string(e[i]) + " lies in the closure");
      if (i > 0) c.expect(e[i] < e[i - 1], "strictly decreasing");
    }
  }
  c.expect(dcc_verdict(CoeffSetDesc::standard()).kind == DccVerdict::Kind::DCC, "standard set is DCC");
}

void rounding_suite(Check& c) {
  for (int k = 0; k < 2000; ++k) {
    const long q = uniform(1, 200), p = uniform(0, q - 1);
    const long m = uniform(1, 100);
    const auto r = round_identity_check({Rational(p, q)}, m);
    const long lhs = (m * p) / q, rhs = ((m - 1) * p + q - 1) / q;
    c.expect(r.lhs[0] == lhs && r.rhs[0] == rhs && lhs <= rhs && r.le, "random c = " + std::to_string(p) + "/" + std::to_string(q));
  }
  for (long r = 1; r <= 50; ++r)
    for (long m = 1; m <= 100; ++m)
      c.expect(round_identity_check({Rational(r - 1, r)}, m).equal, "equality at r = " + std::to_string(r));
}

void constants_suite(Check& c) {
  const auto rep = constants(2, 1, 1, Rational(1, 42));
  // gamma = 2n/eps, m = 2 gamma0 (1+gamma)^(n-1), gamma' = 4n/eps, C = 2 (1+gamma')^(n-1)
  c.expect(rep.get("gamma_rec") == 4, "gamma_rec = 4");
  c.expect(rep.get("m_rec") == 10, "m_rec = 10");
  c.expect(rep.get("C") == 18, "C = 18");
  c.expect(rep.get("vol_threshold") == 1296, "vol_threshold = 1296");
  c.expect(rep.get("M_min") == 1514, "M_min = 1514");
  c.expect(Rational(1514) > Rational(18 * 2 * 42 + 1) && Rational(1513) <= Rational(18 * 2 * 42 + 1), "1514 is least");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Sylvester recursion and product identity", 1, sylvester_suite},
      {2, "log volume on P^n equals 1/r_{n+2}^n", 1, pn_volume_suite},
      {3, "Fermat ratio first exceeds 42^n at n = 5", 1, fermat_suite},
      {4, "unitary degrees and the 216 vol^4 bound", 5, unitary_suite},
      {5, "Hurwitz identity and product ratios", 1, hurwitz_suite},
      {6, "L coefficient equals blow-up propagation", 10, l_formula_suite},
      {7, "weight descent on random local models", 120, reduction_suite},
      {8, "F and mld against brute force", 30, f_and_mld_suite},
      {9, "adjunction closures and the DCC verdicts", 30, dcc_suite},
      {10, "rounding inequality", 5, rounding_suite},
      {11, "explicit constants", 1, constants_suite},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (check.ok && secs > cr.limit_s) {
      check.ok = false;
      check.detail = "over the time limit";
    }
    if (!check.ok) ++failures;
    const std::string note = check.ok ? check.info : check.detail;
    std::printf("criterion %2d %s  %-48s %8.3f s (limit %g s)%s%s\n", cr.id, check.ok ? "PASS" : "FAIL",
                cr.title.c_str(), secs, cr.limit_s, note.empty() ? "" : "  ", note.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

#include "bvtk/bounds.hpp"

#include "bvtk/linalg.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace bvtk {

const Rational& BoundReport::get(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e.value;
  throw PreconditionError("report '" + title + "' has no entry '" + name + "'");
}

bool BoundReport::has(const std::string& name) const {
  return std::any_of(entries.begin(), entries.end(), [&](const BoundEntry& e) { return e.name == name; });
}

void BoundReport::add(std::string name, Rational value, std::string formula) {
  entries.push_back({std::move(name), std::move(value), std::move(formula)});
}

std::vector<Integer> sylvester(long k) {
  if (k < 1) throw PreconditionError("sylvester: k must be at least 1");
  std::vector<Integer> r{Integer(1)};
  for (long i = 0; i < k; ++i) r.push_back(r.back() * (r.back() + 1));
  return r;
}

Rational min_volume_candidate(long n) {
  if (n < 1) throw PreconditionError("min_volume_candidate: n must be at least 1");
  const auto r = sylvester(n + 2);
  return Rational(1) / Rational(pow_int(r.back(), static_cast<unsigned long>(n)));
}

Rational pn_log_volume(long n, const std::vector<Rational>& a) {
  if (n < 1) throw PreconditionError("pn_log_volume: n must be at least 1");
  if (static_cast<long>(a.size()) != n + 2)
    throw PreconditionError("pn_log_volume: expected " + std::to_string(n + 2) + " coefficients, got " +
                            std::to_string(a.size()));
  Rational s = 0;
  for (const auto& x : a) {
    if (x < 0 || x > 1) throw PreconditionError("pn_log_volume: coefficient " + to_string(x) + " outside [0,1]");
    s += x;
  }
  const Rational t = s - (n + 1);
  if (t <= 0) return 0;
  return pow_rat(t, static_cast<unsigned long>(n));
}

namespace {

Rational slack(const Halfspace& h, const RationalVec& x) {
  Rational s = h.offset;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += Rational(h.normal(i)) * x(i);
  return s;
}

bool feasible(const std::vector<Halfspace>& hs, const RationalVec& x) {
  return std::all_of(hs.begin(), hs.end(), [&](const Halfspace& h) { return slack(h, x) >= 0; });
}

void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == k) {
      f(idx);
      return;
    }
    for (int i = start; i <= m - (k - pos); ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

// Basis of {x : A x = 0}, scaled to integer vectors.
std::vector<LatticeVec> nullspace(const Matrix<Rational>& a) {
  Matrix<Rational> m = a;
  const Eigen::Index cols = m.cols();
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < m.rows(); ++c) {
    Eigen::Index p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.row(r).swap(m.row(p));
    const Rational inv = Rational(1) / m(r, c);
    m.row(r) *= inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      m.row(i) -= f * m.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<LatticeVec> basis;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    RationalVec v = RationalVec::Zero(cols);
    v(free) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v(pivots[i]) = -m(static_cast<Eigen::Index>(i), free);
    Integer l = 1;
    for (Eigen::Index i = 0; i < cols; ++i) l = lcm(l, denominator(v(i)));
    LatticeVec w(cols);
    for (Eigen::Index i = 0; i < cols; ++i) w(i) = numerator(v(i) * l);
    basis.push_back(w);
  }
  return basis;
}

Matrix<Rational> normals_matrix(const std::vector<Halfspace>& hs, int n) {
  Matrix<Rational> a(static_cast<Eigen::Index>(hs.size()), n);
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (int j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), j) = Rational(hs[i].normal(j));
  return a;
}

std::vector<RationalVec> enumerate_vertices(const std::vector<Halfspace>& hs, int n) {
  std::set<std::vector<Rational>> seen;
  std::vector<RationalVec> out;
  for_each_subset(static_cast<int>(hs.size()), n, [&](const std::vector<int>& rows) {
    Matrix<Rational> a(n, n);
    RationalVec b(n);
    for (int i = 0; i < n; ++i) {
      const auto& h = hs[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])];
      for (int j = 0; j < n; ++j) a(i, j) = Rational(h.normal(j));
      b(i) = -h.offset;
    }
    auto x = solve(a, b);
    if (!x || !feasible(hs, *x)) return;
    std::vector<Rational> key(x->data(), x->data() + n);
    if (seen.insert(key).second) out.push_back(*x);
  });
  std::sort(out.begin(), out.end(), [](const RationalVec& u, const RationalVec& v) {
    return std::lexicographical_compare(u.data(), u.data() + u.size(), v.data(), v.data() + v.size());
  });
  return out;
}

void validate(const Polytope& P) {
  if (P.dim < 1 || P.dim > 4) throw PreconditionError("polytope dimension must be between 1 and 4");
  for (const auto& h : P.halfspaces) {
    if (h.normal.size() != P.dim) throw PreconditionError("halfspace normal has the wrong dimension");
    if (is_zero(h.normal)) throw PreconditionError("halfspace normal is zero");
  }
}

long affine_dim(const std::vector<RationalVec>& pts, const std::vector<int>& idx) {
  if (idx.size() <= 1) return 0;
  const auto& base = pts[static_cast<std::size_t>(idx[0])];
  Matrix<Rational> m(static_cast<Eigen::Index>(idx.size() - 1), base.size());
  for (std::size_t i = 1; i < idx.size(); ++i)
    m.row(static_cast<Eigen::Index>(i - 1)) = (pts[static_cast<std::size_t>(idx[i])] - base).transpose();
  return static_cast<long>(rank(m));
}

// Simplices of a triangulation of the face spanned by `face`, coning from its
// smallest vertex over the facets that miss it.
void triangulate_face(const std::vector<RationalVec>& pts, const std::vector<std::vector<bool>>& tight,
                      const std::vector<int>& face, long d, std::vector<int>& prefix,
                      std::vector<std::vector<int>>& out) {
  if (d == 0) {
    out.push_back(prefix);
    out.back().push_back(face[0]);
    return;
  }
  const int apex = face[0];
  std::set<std::vector<int>> facets;
  const std::size_t m = tight.empty() ? 0 : tight[0].size();
  for (std::size_t j = 0; j < m; ++j) {
    if (tight[static_cast<std::size_t>(apex)][j]) continue;
    std::vector<int> sub;
    for (int v : face)
      if (tight[static_cast<std::size_t>(v)][j]) sub.push_back(v);
    if (static_cast<long>(sub.size()) < d || affine_dim(pts, sub) != d - 1) continue;
    facets.insert(sub);
  }
  prefix.push_back(apex);
  for (const auto& f : facets) triangulate_face(pts, tight, f, d - 1, prefix, out);
  prefix.pop_back();
}

}  // namespace

std::vector<RationalVec> polytope_vertices(const Polytope& P) {
  validate(P);
  const int n = P.dim;
  std::vector<Halfspace> hs = P.halfspaces;
  const auto lineality = nullspace(normals_matrix(hs, n));
  for (const auto& l : lineality) {
    hs.push_back({l, Rational(0)});
    hs.push_back({LatticeVec(-l), Rational(0)});
  }
  auto verts = enumerate_vertices(hs, n);
  if (verts.empty()) return verts;
  if (!lineality.empty()) throw PreconditionError("polytope is unbounded: it contains a line");

  const Matrix<Rational> a = normals_matrix(P.halfspaces, n);
  for_each_subset(static_cast<int>(P.halfspaces.size()), n - 1, [&](const std::vector<int>& rows) {
    Matrix<Rational> sub(n - 1, n);
    for (int i = 0; i < n - 1; ++i) sub.row(i) = a.row(rows[static_cast<std::size_t>(i)]);
    const LatticeVec d = kernel_vector(sub);
    if (is_zero(d)) return;
    const RationalVec dr = d.cast<Rational>();
    const RationalVec ad = a * dr;
    const bool up = (ad.array() >= Rational(0)).all();
    const bool down = (ad.array() <= Rational(0)).all();
    if (up || down) throw PreconditionError("polytope is unbounded along " + to_string(up ? d : LatticeVec(-d)));
  });
  return verts;
}

Rational polytope_volume(const Polytope& P) {
  const auto verts = polytope_vertices(P);
  const int n = P.dim;
  if (static_cast<int>(verts.size()) < n + 1) return 0;
  std::vector<int> all(verts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  if (affine_dim(verts, all) < n) return 0;

  std::vector<std::vector<bool>> tight(verts.size(), std::vector<bool>(P.halfspaces.size()));
  for (std::size_t v = 0; v < verts.size(); ++v)
    for (std::size_t j = 0; j < P.halfspaces.size(); ++j) tight[v][j] = slack(P.halfspaces[j], verts[v]) == 0;

  std::vector<std::vector<int>> simplices;
  std::vector<int> prefix;
  triangulate_face(verts, tight, all, n, prefix, simplices);

  Rational total = 0;
  for (const auto& s : simplices) {
    Matrix<Rational> m(n, n);
    for (int i = 1; i <= n; ++i)
      m.row(i - 1) = (verts[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])] -
                      verts[static_cast<std::size_t>(s[0])])
                         .transpose();
    total += abs(determinant(m));
  }
  return total / Rational(factorial(n));
}

Polytope scaled_simplex(int n, const Rational& d) {
  Polytope P{n, {}};
  for (int i = 0; i < n; ++i) P.halfspaces.push_back({unit_vector(n, i), Rational(0)});
  P.halfspaces.push_back({LatticeVec(LatticeVec::Constant(n, Integer(-1))), d});
  return P;
}

Polytope cube(int n, const Rational& side) {
  Polytope P{n, {}};
  for (int i = 0; i < n; ++i) {
    P.halfspaces.push_back({unit_vector(n, i), Rational(0)});
    P.halfspaces.push_back({LatticeVec(-unit_vector(n, i)), side});
  }
  return P;
}

BoundReport hurwitz(long g) {
  if (g < 2) throw PreconditionError("not of general type: genus must be at least 2");
  BoundReport r{"hurwitz", {}, {}};
  r.add("g", g, "g");
  r.add("bound", 84 * (Integer(g) - 1), "84(g-1)");
  r.add("vol", 2 * (Integer(g) - 1), "2g-2");
  r.add("ratio", 42, "bound / vol");
  if (r.get("bound") != 42 * r.get("vol")) throw InvariantError("84(g-1) != 42(2g-2)");
  return r;
}

BoundReport product_example(long n, long g) {
  if (n < 1) throw PreconditionError("product_example: n must be at least 1");
  if (g < 2) throw PreconditionError("not of general type: genus must be at least 2");
  const auto e = static_cast<unsigned long>(n);
  const Integer base = 2 * (Integer(g) - 1);
  BoundReport r{"product", {}, {}};
  r.add("n", n, "n");
  r.add("g", g, "g");
  r.add("aut", factorial(n) * pow_int(42, e) * pow_int(base, e), "n! 42^n (2g-2)^n");
  r.add("vol", factorial(n) * pow_int(base, e), "n! (2g-2)^n");
  r.add("ratio", r.get("aut") / r.get("vol"), "aut / vol");
  return r;
}

BoundReport fermat_report(long n, long m) {
  if (n < 1) throw PreconditionError("fermat_report: n must be at least 1");
  if (m <= n + 2) throw PreconditionError("not of general type: volume <= 0");
  const auto e = static_cast<unsigned long>(n);
  BoundReport r{"fermat", {}, {}};
  r.add("n", n, "n");
  r.add("m", m, "m");
  r.add("aut_lower", factorial(n + 2) * pow_int(m, e + 1), "(n+2)! m^(n+1)");
  r.add("vol", Integer(m) * pow_int(Integer(m - n - 2), e), "m (m-n-2)^n");
  r.add("ratio", r.get("aut_lower") / r.get("vol"), "aut_lower / vol");
  r.add("42^n", pow_int(42, e), "42^n");
  r.notes.push_back("aut_lower is a lower bound for the automorphism group");
  return r;
}

UnitaryPolynomial unitary_polynomial(long n) {
  if (n < 1) throw PreconditionError("unitary_order: n must be at least 1");
  const auto lead = static_cast<std::size_t>(binomial(n + 2, 2).convert_to<long>());
  UniPoly<Integer> p = UniPoly<Integer>::monomial(1, lead);
  for (long i = 2; i <= n + 2; ++i) {
    const Integer sign = (i % 2 == 0) ? 1 : -1;
    p = p * (UniPoly<Integer>::monomial(1, static_cast<std::size_t>(i)) - UniPoly<Integer>::constant(sign));
  }
  return {p, n + 2,
          "order = poly(q) / gcd(" + std::to_string(n + 2) + ", q+1); the gcd factor does not change the degree"};
}

bool is_prime_power(long q) {
  if (q < 2) return false;
  long p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) return true;
  while (q % p == 0) q /= p;
  return q == 1;
}

BoundReport unitary_order(long n, long q) {
  if (!is_prime_power(q)) throw PreconditionError("q = " + std::to_string(q) + " is not a prime power");
  const auto up = unitary_polynomial(n);
  const Integer value = up.poly(Integer(q));
  const Integer g = gcd(Integer(up.gcd_argument), Integer(q + 1));
  BoundReport r{"unitary", {}, {up.note}};
  r.add("n", n, "n");
  r.add("q", q, "q");
  r.add("gcd", g, "gcd(n+2, q+1)");
  r.add("poly_value", value, "q^C(n+2,2) prod_{i=2}^{n+2} (q^i - (-1)^i)");
  r.add("order", value / g, "poly_value / gcd");
  r.add("degree", static_cast<long>(*up.poly.degree()), "C(n+2,2) + C(n+3,2) - 1");
  return r;
}

BoundReport charp_ratio_check(long q_max) {
  if (q_max < 3) throw PreconditionError("charp_ratio_check: q_max must be at least 3");
  BoundReport r{"charp", {}, {}};
  Rational best = -1;
  long best_q = 0;
  for (long q = 3; q <= q_max; ++q) {
    if (!is_prime_power(q)) continue;
    const Integer vol = Integer(q + 1) * (q - 2);
    const Integer order = numerator(unitary_order(1, q).get("order"));
    const Integer cap = 216 * pow_int(vol, 4);
    if (order > cap)
      throw InvariantError("q = " + std::to_string(q) + ": order " + to_string(order) + " exceeds 216 vol^4 = " +
                           to_string(cap));
    const Rational ratio = Rational(order) / Rational(pow_int(vol, 4));
    r.add("order(q=" + std::to_string(q) + ")", order, "|U_3(q)|");
    r.add("vol(q=" + std::to_string(q) + ")", vol, "(q+1)(q-2)");
    if (ratio > best) {
      best = ratio;
      best_q = q;
    }
  }
  r.add("max_ratio", best, "max order / vol^4");
  r.add("argmax_q", best_q, "q attaining max_ratio");
  r.add("c", 216, "order <= c vol^4");
  return r;
}

BoundReport constants(long n, const Rational& eps, const Rational& gamma0, const Rational& delta) {
  if (n < 1) throw PreconditionError("constants: n must be at least 1");
  if (eps <= 0 || delta <= 0) throw PreconditionError("constants: eps and delta must be positive");
  if (gamma0 < 1) throw PreconditionError("constants: gamma0 must be at least 1");
  const auto e = static_cast<unsigned long>(n - 1);
  BoundReport r{"constants", {}, {}};
  const Rational g_rec = Rational(2 * n) / eps;
  const Rational m_rec = 2 * gamma0 * pow_rat(1 + g_rec, e);
  const Rational g_t = Rational(4 * n) / eps;
  const Rational C = 2 * pow_rat(1 + g_t, e);
  const Rational Cn = C * n;
  const Rational M = Rational(floor_of(Cn / delta) + 2);
  r.add("gamma_rec", g_rec, "2n/eps");
  r.add("m_rec", m_rec, "2 gamma0 (1+gamma_rec)^(n-1)");
  r.add("gamma_C", g_t, "4n/eps");
  r.add("C", C, "2 (1+gamma_C)^(n-1)");
  r.add("vol_threshold", pow_rat(Cn, static_cast<unsigned long>(n)), "(C n)^n");
  r.add("M_min", M, "least integer > C n / delta + 1");
  if (!(M > Cn / delta + 1) || M - 1 > Cn / delta + 1) throw InvariantError("M_min is not the least admissible integer");
  return r;
}

}  // namespace bvtk

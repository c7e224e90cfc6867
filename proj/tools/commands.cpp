#include "bvtk/bounds.hpp"
#include "bvtk/cli.hpp"
#include "bvtk/dcc.hpp"
#include "bvtk/linalg.hpp"
#include "bvtk/logpair.hpp"
#include "bvtk/reduction.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <thread>

namespace bvtk::cli {

namespace {

// ---- argument decoding -----------------------------------------------------

const json& field(const json& args, const std::string& key) {
  if (!args.is_object() || !args.contains(key)) throw PreconditionError("missing argument '" + key + "'");
  return args.at(key);
}

Rational as_rational(const json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw PreconditionError(what + " must be an integer or a rational string such as \"2/3\"");
}

Integer as_integer(const json& j, const std::string& what) {
  if (j.is_string()) return parse_integer(j.get<std::string>());
  if (j.is_number_integer()) return Integer(j.get<long long>());
  throw PreconditionError(what + " must be an integer");
}

long as_long(const json& j, const std::string& what) {
  const Integer v = as_integer(j, what);
  if (v > std::numeric_limits<long>::max() || v < std::numeric_limits<long>::min())
    throw PreconditionError(what + " is out of range");
  return v.convert_to<long>();
}

long long_arg(const json& args, const std::string& key) { return as_long(field(args, key), key); }

long long_arg(const json& args, const std::string& key, long fallback) {
  return args.contains(key) ? as_long(args.at(key), key) : fallback;
}

Rational rational_arg(const json& args, const std::string& key) { return as_rational(field(args, key), key); }

bool bool_arg(const json& args, const std::string& key) {
  if (!args.contains(key)) return false;
  const json& j = args.at(key);
  if (!j.is_boolean()) throw PreconditionError("argument '" + key + "' must be true or false");
  return j.get<bool>();
}

std::vector<Rational> rational_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw PreconditionError(what + " must be a list");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(as_rational(x, what));
  return out;
}

LatticeVec as_vec(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw PreconditionError(what + " must be a nonempty list of integers");
  LatticeVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = as_integer(j[i], what);
  return v;
}

LocalModel model_arg(const json& args) {
  const json& m = field(args, "model");
  auto coeffs = rational_list(field(m, "coeffs"), "model.coeffs");
  if (coeffs.empty()) throw PreconditionError("model.coeffs must be nonempty");
  if (m.contains("n") && as_long(m.at("n"), "model.n") != static_cast<long>(coeffs.size()))
    throw PreconditionError("model.n does not match the number of coefficients");
  return LocalModel(LocalSNCPair(std::move(coeffs)));
}

BDivisor b_arg(const json& args, const LocalModel& model) {
  std::vector<std::pair<LatticeVec, Rational>> devs;
  if (args.contains("B")) {
    const json& b = args.at("B");
    if (!b.is_object()) throw PreconditionError("B must be an object");
    if (b.contains("deviations")) {
      for (const auto& d : b.at("deviations")) {
        auto v = as_vec(field(d, "v"), "deviation vector");
        if (v.size() != model.pair.dim()) throw PreconditionError("deviation " + to_string(v) + " has the wrong dimension");
        devs.emplace_back(v, as_rational(field(d, "value"), "deviation value"));
      }
    }
  }
  return BDivisor(model.pair.coeffs, devs);
}

CoeffSetDesc set_arg(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "finite") return CoeffSetDesc::finite(rational_list(field(j, "values"), "values"));
  if (kind == "standard") return CoeffSetDesc::standard();
  if (kind == "union") {
    std::vector<CoeffSetDesc> parts;
    for (const auto& p : field(j, "parts")) parts.push_back(set_arg(p));
    return CoeffSetDesc::union_of(std::move(parts));
  }
  if (kind == "adj_closure")
    return CoeffSetDesc::adj_closure(set_arg(field(j, "base")), long_arg(j, "denom_bound", 0), bool_arg(j, "include_one"));
  throw PreconditionError("unknown set kind '" + kind + "' (finite, standard, union, adj_closure)");
}

Polytope polytope_arg(const json& args) {
  const json& p = field(args, "polytope");
  Polytope P;
  P.dim = static_cast<int>(long_arg(p, "dim"));
  for (const auto& h : field(p, "halfspaces")) {
    P.halfspaces.push_back({as_vec(field(h, "normal"), "normal"), as_rational(field(h, "offset"), "offset")});
  }
  return P;
}

// ---- encoding ----------------------------------------------------------------

json str(const Rational& x) { return to_string(x); }
json str(const Integer& x) { return to_string(x); }

json vec_json(const LatticeVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > std::numeric_limits<long long>::max() || v(i) < std::numeric_limits<long long>::min())
      a.push_back(to_string(v(i)));
    else
      a.push_back(v(i).convert_to<long long>());
  }
  return a;
}

json rats_json(const std::vector<Rational>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(str(x));
  return a;
}

json report_json(const BoundReport& r) {
  json out = json::object();
  json formulas = json::object();
  for (const auto& e : r.entries) {
    out[e.name] = str(e.value);
    formulas[e.name] = e.formula;
  }
  out["formulas"] = formulas;
  out["notes"] = r.notes;
  return out;
}

std::string poly_text(const UniPoly<Integer>& p) {
  std::string s;
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k] == 0) continue;
    const bool neg = c[k] < 0;
    const Integer mag = neg ? Integer(-c[k]) : c[k];
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (mag != 1 || k == 0) s += to_string(mag);
    if (k > 0) s += (mag != 1 ? "*q" : "q");
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s.empty() ? "0" : s;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvariantError("verification failed: " + message);
}

json fan_rays_json(const ModelDivisor& md, const char* coeff_key) {
  json rays = json::array();
  for (std::size_t i = 0; i < md.fan.rays().size(); ++i)
    rays.push_back({{"v", vec_json(md.fan.rays()[i])}, {coeff_key, str(md.ray_coeffs[i])}});
  return rays;
}

// ---- independent recomputations used by --verify ----------------------------

// Iterated point blow-ups of (C^2, b1 H1 + b2 H2) down the Stern-Brocot path
// of (v1, v2).
Rational blowup_coeff(const LatticeVec& v, const Rational& b1, const Rational& b2) {
  Integer lp = 1, lq = 0, rp = 0, rq = 1;
  Rational cl = b1, cr = b2;
  auto clamp = [](const Rational& x) { return x < 0 ? Rational(0) : x; };
  if (v(1) == 0) return clamp(cl);
  if (v(0) == 0) return clamp(cr);
  while (true) {
    const Integer mp = lp + rp, mq = lq + rq;
    const Rational cm = cl + cr - 1;
    if (mp == v(0) && mq == v(1)) return clamp(cm);
    if (v(1) * mp < v(0) * mq) {
      rp = mp, rq = mq, cr = cm;
    } else {
      lp = mp, lq = mq, cl = cm;
    }
  }
}

Rational direct_log_discrepancy(const std::vector<Rational>& c, const LatticeVec& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += Rational(v(static_cast<Eigen::Index>(i))) - Rational(v(static_cast<Eigen::Index>(i))) * c[i];
  return s;
}

void for_each_box_point(const std::vector<Integer>& lo, const std::vector<Integer>& hi,
                        const std::function<void(const LatticeVec&)>& f) {
  const auto n = static_cast<Eigen::Index>(lo.size());
  LatticeVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = lo[static_cast<std::size_t>(i)];
  while (true) {
    f(v);
    Eigen::Index i = n - 1;
    while (i >= 0 && v(i) == hi[static_cast<std::size_t>(i)]) {
      v(i) = lo[static_cast<std::size_t>(i)];
      --i;
    }
    if (i < 0) return;
    v(i) += 1;
  }
}

// Volume by slicing along the first coordinate with Simpson's rule between
// vertex abscissae.
Rational sliced_volume(const std::vector<std::vector<Rational>>& a0, const std::vector<Rational>& b0) {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (std::size_t i = 0; i < a0.size(); ++i) {
    if (std::all_of(a0[i].begin(), a0[i].end(), [](const Rational& x) { return x == 0; })) {
      if (b0[i] < 0) return 0;
      continue;
    }
    a.push_back(a0[i]);
    b.push_back(b0[i]);
  }
  if (a.empty()) return 0;
  const std::size_t n = a[0].size();
  if (n == 1) {
    std::optional<Rational> lo, hi;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Rational t = -b[i] / a[i][0];
      if (a[i][0] > 0) {
        if (!lo || t > *lo) lo = t;
      } else if (!hi || t < *hi) {
        hi = t;
      }
    }
    if (!lo || !hi) throw InvariantError("verification failed: unbounded slice");
    return *hi > *lo ? Rational(*hi - *lo) : Rational(0);
  }
  std::set<Rational> xs;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == n) {
      Matrix<Rational> m(n, n);
      RationalVec rhs(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = a[pick[i]][j];
        rhs(i) = -b[pick[i]];
      }
      if (auto x = solve(m, rhs)) xs.insert((*x)(0));
      return;
    }
    for (std::size_t i = start; i + (n - pos) <= a.size(); ++i) {
      pick[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  auto slice = [&](const Rational& t) {
    std::vector<std::vector<Rational>> sa;
    std::vector<Rational> sb;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sa.emplace_back(a[i].begin() + 1, a[i].end());
      sb.push_back(b[i] + a[i][0] * t);
    }
    return sliced_volume(sa, sb);
  };
  const std::vector<Rational> bp(xs.begin(), xs.end());
  Rational total = 0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const Rational mid = (bp[i] + bp[i + 1]) / 2;
    const Rational fm = slice(mid);
    if (fm != 0) total += (bp[i + 1] - bp[i]) / 6 * (slice(bp[i]) + 4 * fm + slice(bp[i + 1]));
  }
  return total;
}

void check_chain(const Chain& c, const CoeffSetDesc& d, long bound) {
  const auto members = materialize(d, bound);
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    require(std::binary_search(members.begin(), members.end(), c.elements[i]),
            to_string(c.elements[i]) + " is not in the set");
    require(c.elements[i] > c.limit, "chain element below its limit");
    if (i > 0)
      require(c.elements[i] - c.limit <= (c.elements[i - 1] - c.limit) / 2, "chain does not halve its distance to the limit");
  }
}

Integer direct_unitary(long n, const Integer& q) {
  Integer v = pow_int(q, binomial(n + 2, 2).convert_to<unsigned long>());
  for (long i = 2; i <= n + 2; ++i) v *= pow_int(q, static_cast<unsigned long>(i)) - (i % 2 == 0 ? 1 : -1);
  return v / gcd(Integer(n + 2), q + 1);
}

// ---- commands ------------------------------------------------------------------

json cmd_ldisc(const json& args, bool verify) {
  const auto model = model_arg(args);
  const MonomialValuation nu(as_vec(field(args, "v"), "v"));
  const Rational a = log_discrepancy(model.pair, nu);
  if (verify) require(a == direct_log_discrepancy(model.pair.coeffs, nu.vec()), "log discrepancy");
  return {{"log_discrepancy", str(a)}};
}

json cmd_lcoeff(const json& args, bool verify) {
  const auto model = model_arg(args);
  const MonomialValuation nu(as_vec(field(args, "v"), "v"));
  const Rational L = L_coeff(model.pair, nu);
  json out{{"L", str(L)}, {"M", str(M_coeff(model.pair, nu))}};
  if (args.contains("B")) out["B"] = str(bdiv_eval(b_arg(args, model), nu));
  if (verify) {
    if (model.pair.dim() == 2)
      require(L == blowup_coeff(nu.vec(), model.pair.coeffs[0], model.pair.coeffs[1]), "blow-up propagation");
    const Rational a = direct_log_discrepancy(model.pair.coeffs, nu.vec());
    require(L == (a < 1 ? Rational(1 - a) : Rational(0)), "positive part of 1 - a");
  }
  return out;
}

json cmd_ltrace(const json& args, bool verify) {
  const auto model = model_arg(args);
  Fan fan = orthant_fan(model.pair.dim());
  if (args.contains("blowups"))
    for (const auto& b : args.at("blowups")) fan = star_subdivide(fan, as_vec(b, "blow-up vector"));
  const ModelDivisor md = L_trace_on_fan(model.pair, fan);
  if (verify)
    for (std::size_t i = 0; i < fan.rays().size(); ++i)
      require(md.ray_coeffs[i] == L_coeff(model.pair, MonomialValuation(fan.rays()[i])), "trace on ray " + to_string(fan.rays()[i]));
  return {{"cones", fan.cones().size()}, {"rays", fan_rays_json(md, "L")}, {"smooth", is_smooth(fan)}};
}

json cmd_mld(const json& args, bool verify) {
  const auto model = model_arg(args);
  const auto r = mld_origin(model.pair);
  if (verify) {
    auto hi = mld_search_box(model.pair);
    for (auto& h : hi) h *= 2;
    std::optional<Rational> best;
    for_each_box_point(std::vector<Integer>(hi.size(), Integer(1)), hi, [&](const LatticeVec& v) {
      if (!is_primitive(v)) return;
      const Rational a = direct_log_discrepancy(model.pair.coeffs, v);
      if (!best || a < *best) best = a;
    });
    require(best && *best == r.value, "brute-force minimum over the doubled box");
  }
  return {{"klt", r.klt}, {"minimizer", vec_json(r.minimizer)}, {"mld", str(r.value)}};
}

json cmd_round_check(const json& args, bool verify) {
  const auto coeffs = rational_list(field(args, "coeffs"), "coeffs");
  const long m = long_arg(args, "m");
  const auto r = round_identity_check(coeffs, m);
  json lhs = json::array(), rhs = json::array();
  for (const auto& x : r.lhs) lhs.push_back(str(x));
  for (const auto& x : r.rhs) rhs.push_back(str(x));
  if (verify)
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const Integer p = numerator(coeffs[i]), q = denominator(coeffs[i]);
      const Integer fl = (p * m) / q;
      const Integer num = p * (m - 1);
      const Integer ce = (num + q - 1) / q;
      require(fl == r.lhs[i] && ce == r.rhs[i], "integer floor and ceiling");
    }
  return {{"equal", r.equal}, {"le", r.le}, {"lhs", lhs}, {"rhs", rhs}};
}

json cmd_fset(const json& args, bool verify) {
  const auto model = model_arg(args);
  const auto F = enumerate_F(model);
  json list = json::array();
  for (const auto& f : F) list.push_back(vec_json(f));
  if (verify) {
    const std::vector<Rational> low(model.pair.coeffs.begin(), model.pair.coeffs.begin() + model.s);
    std::vector<LatticeVec> naive;
    if (low.empty()) {
      naive.emplace_back(0);
    } else {
      std::vector<Integer> hi;
      for (const auto& c : low) hi.push_back(ceil_of(1 / (1 - c)));
      for_each_box_point(std::vector<Integer>(low.size(), Integer(0)), hi, [&](const LatticeVec& f) {
        Rational s = 0;
        for (std::size_t i = 0; i < low.size(); ++i) s += Rational(f(static_cast<Eigen::Index>(i))) * (1 - low[i]);
        if (s < 1) naive.push_back(f);
      });
    }
    std::sort(naive.begin(), naive.end(), LexLess{});
    require(naive == F, "naive box enumeration");
  }
  return {{"F", list}, {"count", F.size()}, {"s", model.s}};
}

json cmd_weight(const json& args, bool verify) {
  const auto model = model_arg(args);
  const auto B = b_arg(args, model);
  const auto state = initial_state(model, B);
  json ws = json::array();
  int best = -1;
  for (const auto& w : witnesses(state)) {
    ws.push_back({{"B", str(w.B_value)}, {"L", str(w.L_value)}, {"stratum", w.stratum}, {"v", vec_json(w.nu)}, {"weight", w.weight}});
    best = std::max(best, w.weight);
  }
  json out{{"pair_weight", pair_weight(model, B)}, {"witnesses", ws}};
  if (args.contains("stratum")) {
    std::vector<int> coords;
    for (const auto& c : args.at("stratum")) coords.push_back(static_cast<int>(as_long(c, "stratum")));
    out["weight"] = weight(model, B, coords);
  }
  if (verify) require(out["pair_weight"].get<int>() == best, "pair weight is the largest witness weight");
  return out;
}

json state_json(const ReductionState& s) {
  json devs = json::array();
  for (const auto& [v, val] : s.B.deviations()) devs.push_back({{"v", vec_json(v)}, {"value", str(val)}});
  return {{"cones", s.fan().cones().size()}, {"deviations", devs}, {"rays", fan_rays_json(s.phi, "phi")}};
}

json verify_json(const VerifyReport& r, long box) {
  json out{{"box", box}, {"checked", r.checked}, {"ok", r.ok}, {"violation", nullptr}};
  if (r.first_violation)
    out["violation"] = {{"B", str(r.first_violation->B_value)}, {"L", str(r.first_violation->L_value)},
                        {"v", vec_json(r.first_violation->nu)}};
  return out;
}

unsigned worker_count() { return std::max(1u, std::min(4u, std::thread::hardware_concurrency())); }

json cmd_reduce(const json& args, bool verify) {
  const auto model = model_arg(args);
  const auto B = b_arg(args, model);
  const int initial = pair_weight(model, B);
  const auto trace = reduce(model, B);
  json steps = json::array();
  for (const auto& st : trace.steps) {
    json added = json::array();
    for (std::size_t i = 0; i < st.cut.rays_added.size(); ++i)
      added.push_back({{"theta", str(st.cut.theta_on_added[i])}, {"v", vec_json(st.cut.rays_added[i])}});
    json sigma = json::array();
    for (const auto& s : st.cut.sigma) sigma.push_back(vec_json(s));
    steps.push_back({{"rays_added", added}, {"sigma", sigma}, {"strata", st.strata}, {"weight_after", st.weight_after},
                     {"weight_before", st.weight_before}});
  }
  json out{{"cuts", trace.steps.size()},
           {"final", state_json(trace.final_state)},
           {"initial_weight", initial},
           {"steps", steps},
           {"terminated_weight", trace.terminated_weight}};
  const long box = long_arg(args, "box", verify ? 12 : 0);
  if (box > 0) {
    const auto report = verify_L_le_B(trace.final_state, box, worker_count());
    out["box_check"] = verify_json(report, box);
    if (!report.ok) throw InvariantError("reduced model violates L <= B at " + to_string(report.first_violation->nu));
  }
  if (verify) {
    int prev = initial;
    for (const auto& st : trace.steps) {
      require(st.weight_before == prev && st.weight_after < st.weight_before, "weights strictly decrease");
      prev = st.weight_after;
    }
    require(prev == -1 && trace.terminated_weight == -1, "descent ends at weight -1");
  }
  return out;
}

json cmd_verify(const json& args, bool) {
  const auto model = model_arg(args);
  const auto B = b_arg(args, model);
  const long box = long_arg(args, "box", 12);
  const auto threads = static_cast<unsigned>(long_arg(args, "threads", static_cast<long>(worker_count())));
  const bool initial = bool_arg(args, "initial");
  const ReductionState state = initial ? initial_state(model, B) : reduce(model, B).final_state;
  const auto report = verify_L_le_B(state, box, threads);
  if (!initial && !report.ok)
    throw InvariantError("reduced model violates L <= B at " + to_string(report.first_violation->nu));
  json out = verify_json(report, box);
  out["state"] = initial ? "initial" : "reduced";
  return out;
}

json cmd_closure(const json& args, bool verify) {
  const auto base = rational_list(field(args, "base"), "base");
  const long bound = long_arg(args, "bound");
  const std::string mode = args.value("mode", std::string("pairwise"));
  if (mode != "pairwise" && mode != "generated") throw PreconditionError("mode must be 'pairwise' or 'generated'");
  const auto values = mode == "pairwise" ? adj_closure(base, bound) : adj_generated(base, bound);
  if (verify) {
    if (bound > 200) throw PreconditionError("--verify for closure supports bound <= 200");
    std::set<Rational> s(base.begin(), base.end());
    for (bool grew = true; grew;) {
      grew = false;
      const std::vector<Rational> cur(s.begin(), s.end());
      for (const auto& x : cur)
        for (const auto& y : cur) {
          const Rational z = x + y - 1;
          if (z >= 0 && denominator(z) <= bound && s.insert(z).second) grew = true;
        }
    }
    const std::vector<Rational> naive(s.begin(), s.end());
    if (mode == "pairwise")
      require(values == naive, "naive fixed point");
    else
      require(std::includes(naive.begin(), naive.end(), values.begin(), values.end()), "generated values lie in the closure");
  }
  return {{"count", values.size()}, {"mode", mode}, {"values", rats_json(values)}};
}

json cmd_chain(const json& args, bool verify) {
  const auto d = set_arg(field(args, "set"));
  const long bound = long_arg(args, "bound", 2000);
  const auto c = find_decreasing_chain(d, static_cast<int>(long_arg(args, "length")), bound);
  if (!c) return {{"chain", nullptr}, {"limit", nullptr}};
  if (verify) check_chain(*c, d, bound);
  return {{"chain", rats_json(c->elements)}, {"limit", str(c->limit)}};
}

json cmd_dcc(const json& args, bool verify) {
  const auto d = set_arg(field(args, "set"));
  DccBudget budget;
  budget.threshold = static_cast<int>(long_arg(args, "threshold", budget.threshold));
  budget.denom_bound = long_arg(args, "bound", budget.denom_bound);
  const auto v = dcc_verdict(d, budget);
  json out{{"derivations", v.derivations}, {"recipe", v.recipe}, {"verdict", to_string(v.kind)}, {"witness", nullptr}};
  if (v.witness) {
    out["witness"] = {{"elements", rats_json(v.witness->elements)}, {"limit", str(v.witness->limit)}};
    if (verify) {
      check_chain(*v.witness, d, budget.denom_bound);
      require(static_cast<int>(v.witness->elements.size()) >= budget.threshold, "witness meets the threshold");
    }
  }
  return out;
}

json cmd_sylvester(const json& args, bool verify) {
  const auto r = sylvester(long_arg(args, "k"));
  json terms = json::array();
  for (const auto& x : r) terms.push_back(str(x));
  if (verify) {
    Integer prod = 1;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      prod *= r[i] + 1;
      require(r[i + 1] == prod, "product identity");
    }
  }
  return {{"terms", terms}};
}

std::vector<Rational> sylvester_coeffs(long n) {
  const auto r = sylvester(n + 2);
  std::vector<Rational> a;
  for (long i = 0; i < n + 2; ++i) a.push_back(Rational(r[static_cast<std::size_t>(i)]) / (r[static_cast<std::size_t>(i)] + 1));
  return a;
}

json cmd_minvol(const json& args, bool verify) {
  const long n = long_arg(args, "n");
  const Rational v = min_volume_candidate(n);
  if (verify) require(v == pn_log_volume(n, sylvester_coeffs(n)), "log volume of the Sylvester boundary");
  return {{"volume", str(v)}};
}

json cmd_pnvol(const json& args, bool verify) {
  const long n = long_arg(args, "n");
  const auto a = args.contains("a") ? rational_list(args.at("a"), "a") : sylvester_coeffs(n);
  const Rational v = pn_log_volume(n, a);
  if (verify) {
    Rational t = -(n + 1);
    for (const auto& x : a) t += x;
    Rational p = 1;
    for (long i = 0; i < n; ++i) p *= t;
    require(v == (t > 0 ? p : Rational(0)), "direct power");
  }
  return {{"volume", str(v)}};
}

json cmd_polyvol(const json& args, bool verify) {
  const auto P = polytope_arg(args);
  const Rational v = polytope_volume(P);
  json verts = json::array();
  for (const auto& x : polytope_vertices(P)) {
    json row = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) row.push_back(str(x(i)));
    verts.push_back(row);
  }
  if (verify) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (const auto& h : P.halfspaces) {
      std::vector<Rational> row;
      for (Eigen::Index i = 0; i < h.normal.size(); ++i) row.emplace_back(h.normal(i));
      a.push_back(row);
      b.push_back(h.offset);
    }
    require(v == sliced_volume(a, b), "volume by slicing");
  }
  return {{"vertices", verts}, {"volume", str(v)}};
}

json cmd_hurwitz(const json& args, bool verify) {
  const auto r = hurwitz(long_arg(args, "g"));
  if (verify) require(r.get("bound") == 42 * r.get("vol"), "84(g-1) = 42(2g-2)");
  return report_json(r);
}

json cmd_product(const json& args, bool verify) {
  const long n = long_arg(args, "n");
  const auto r = product_example(n, long_arg(args, "g"));
  if (verify) require(r.get("ratio") == Rational(pow_int(42, static_cast<unsigned long>(n))), "ratio 42^n");
  return report_json(r);
}

json fermat_scan(const json& args) {
  const std::string rule = args.value("m_rule", std::string("n+3"));
  if (rule.size() < 3 || rule.substr(0, 2) != "n+") throw PreconditionError("m_rule must look like n+K");
  const long k = as_long(json(rule.substr(2)), "m_rule offset");
  const long n_max = long_arg(args, "n_max", 10);
  if (n_max < 1) throw PreconditionError("n_max must be at least 1");
  json rows = json::array();
  json first = nullptr;
  for (long n = 1; n <= n_max; ++n) {
    const auto r = fermat_report(n, n + k);
    const bool pass = r.get("ratio") > r.get("42^n");
    if (pass && first.is_null()) first = n;
    rows.push_back({{"42^n", str(r.get("42^n"))}, {"aut_lower", str(r.get("aut_lower"))}, {"m", n + k}, {"n", n},
                    {"pass", pass}, {"ratio", str(r.get("ratio"))}, {"vol", str(r.get("vol"))}});
  }
  return {{"first_pass", first}, {"m_rule", rule}, {"rows", rows}};
}

json cmd_fermat(const json& args, bool verify) {
  if (bool_arg(args, "scan")) {
    json out = fermat_scan(args);
    if (verify)
      for (const auto& row : out["rows"]) {
        const long n = row["n"].get<long>(), m = row["m"].get<long>();
        Integer aut = factorial(n + 2), vol = m;
        for (long i = 0; i <= n; ++i) aut *= m;
        for (long i = 0; i < n; ++i) vol *= m - n - 2;
        require(row["aut_lower"] == to_string(aut) && row["vol"] == to_string(vol), "scan row " + std::to_string(n));
      }
    return out;
  }
  const long n = long_arg(args, "n"), m = long_arg(args, "m");
  const auto r = fermat_report(n, m);
  if (verify) {
    Integer aut = factorial(n + 2), vol = m;
    for (long i = 0; i <= n; ++i) aut *= m;
    for (long i = 0; i < n; ++i) vol *= m - n - 2;
    require(r.get("aut_lower") == Rational(aut) && r.get("vol") == Rational(vol), "direct products");
  }
  return report_json(r);
}

json cmd_unitary(const json& args, bool verify) {
  const long n = long_arg(args, "n");
  if (args.contains("q")) {
    const long q = long_arg(args, "q");
    const auto r = unitary_order(n, q);
    if (verify) require(r.get("order") == Rational(direct_unitary(n, q)), "direct product");
    return report_json(r);
  }
  const auto up = unitary_polynomial(n);
  json coeffs = json::array();
  for (const auto& c : up.poly.coefficients()) coeffs.push_back(str(c));
  const long degree = static_cast<long>(*up.poly.degree());
  if (verify) {
    require(degree == (binomial(n + 2, 2) + binomial(n + 3, 2) - 1).convert_to<long>(), "degree formula");
    for (long q : {2L, 3L, 4L, 5L, 7L})
      require(up.poly(Integer(q)) / gcd(Integer(n + 2), Integer(q + 1)) == direct_unitary(n, q), "value at q = " + std::to_string(q));
  }
  return {{"coefficients", coeffs},
          {"degree", degree},
          {"gcd_rule", "gcd(" + std::to_string(up.gcd_argument) + ", q+1)"},
          {"note", up.note},
          {"polynomial", poly_text(up.poly)}};
}

json cmd_charp(const json& args, bool verify) {
  const long q_max = long_arg(args, "q_max");
  const auto r = charp_ratio_check(q_max);
  if (verify)
    for (long q = 3; q <= q_max; ++q) {
      if (!is_prime_power(q)) continue;
      const Integer vol = Integer(q + 1) * (q - 2);
      require(r.get("order(q=" + std::to_string(q) + ")") == Rational(direct_unitary(1, q)), "order at q = " + std::to_string(q));
      require(direct_unitary(1, q) <= 216 * pow_int(vol, 4), "216 vol^4 at q = " + std::to_string(q));
    }
  return report_json(r);
}

json cmd_constants(const json& args, bool verify) {
  const long n = long_arg(args, "n");
  const Rational eps = rational_arg(args, "eps"), delta = rational_arg(args, "delta");
  const Rational gamma0 = args.contains("gamma0") ? rational_arg(args, "gamma0") : Rational(1);
  const auto r = constants(n, eps, gamma0, delta);
  if (verify) {
    Rational base = 1 + Rational(4 * n) / eps, C = 2;
    for (long i = 1; i < n; ++i) C *= base;
    require(C == r.get("C"), "C");
    const Rational target = C * n / delta + 1;
    Integer M = ceil_of(target);
    if (Rational(M) == target) M += 1;
    require(Rational(M) == r.get("M_min"), "least integer above C n / delta + 1");
  }
  return report_json(r);
}

using Handler = std::function<json(const json&, bool)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"ldisc", cmd_ldisc},       {"lcoeff", cmd_lcoeff},       {"ltrace", cmd_ltrace},   {"mld", cmd_mld},
      {"round-check", cmd_round_check}, {"fset", cmd_fset},     {"weight", cmd_weight},   {"reduce", cmd_reduce},
      {"verify", cmd_verify},     {"closure", cmd_closure},     {"chain", cmd_chain},     {"dcc", cmd_dcc},
      {"sylvester", cmd_sylvester}, {"minvol", cmd_minvol},     {"pnvol", cmd_pnvol},     {"polyvol", cmd_polyvol},
      {"hurwitz", cmd_hurwitz},   {"product", cmd_product},     {"fermat", cmd_fermat},   {"unitary", cmd_unitary},
      {"charp", cmd_charp},       {"constants", cmd_constants},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

json execute(const std::string& command, const json& args, bool verify) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw PreconditionError("unknown command '" + command + "'");
  if (!args.is_object()) throw PreconditionError("arguments must be a JSON object");
  try {
    json out = it->second(args, verify);
    if (verify) out["verified"] = true;
    return out;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed arguments: ") + e.what());
  }
}

std::string scan_csv(const json& scan) {
  std::string s = "n,m,aut_lower,vol,ratio,42^n,pass\n";
  for (const auto& r : scan.at("rows")) {
    s += std::to_string(r["n"].get<long>()) + "," + std::to_string(r["m"].get<long>()) + "," +
         r["aut_lower"].get<std::string>() + "," + r["vol"].get<std::string>() + "," + r["ratio"].get<std::string>() + "," +
         r["42^n"].get<std::string>() + "," + (r["pass"].get<bool>() ? "true" : "false") + "\n";
  }
  return s;
}

}  // namespace bvtk::cli

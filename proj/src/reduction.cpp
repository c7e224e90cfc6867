#include "bvtk/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <tuple>

namespace bvtk {

LocalModel::LocalModel(LocalSNCPair p) : pair(std::move(p)), s(0), w(0) {
  for (const auto& c : pair.coeffs) {
    if (c == 1) {
      ++w;
    } else {
      if (w > 0) throw PreconditionError("coefficient-one components must come last in a local model");
      ++s;
    }
  }
}

ReductionState initial_state(const LocalModel& model, const BDivisor& B) {
  const int n = model.pair.dim();
  if (B.dim() != n) throw PreconditionError("b-divisor and model have different dimensions");
  for (int i = 0; i < n; ++i) {
    if (B(unit_vector(n, i)) != model.pair.coeffs[static_cast<std::size_t>(i)])
      throw PreconditionError("b-divisor must agree with the pair on the coordinate hyperplanes");
  }
  return ReductionState{ModelDivisor(orthant_fan(n), model.pair.coeffs), B};
}

namespace {

void enumerate_rec(const std::vector<Rational>& coeffs, std::size_t i, const Rational& budget, LatticeVec& cur,
                   std::vector<LatticeVec>& out) {
  if (i == coeffs.size()) {
    out.push_back(cur);
    return;
  }
  const Rational step = 1 - coeffs[i];
  Rational used = 0;
  for (Integer v = 0; used < budget; ++v, used += step) {
    cur(static_cast<Eigen::Index>(i)) = v;
    enumerate_rec(coeffs, i + 1, budget - used, cur, out);
  }
  cur(static_cast<Eigen::Index>(i)) = 0;
}

bool is_ray(const Fan& f, const LatticeVec& v) { return f.ray_index(v).has_value(); }

struct StratumSplit {
  std::vector<int> low;  // coefficient below one
  std::vector<int> one;
};

StratumSplit split_stratum(const ReductionState& state, const std::vector<int>& stratum) {
  StratumSplit out;
  for (int r : stratum) (state.phi.ray_coeffs[static_cast<std::size_t>(r)] == 1 ? out.one : out.low).push_back(r);
  return out;
}

// Coordinates of v with respect to the rays of a smooth stratum, or nullopt
// when v lies outside the closed cone.
std::optional<std::pair<LatticeVec, LatticeVec>> stratum_coordinates(const ReductionState& state,
                                                                     const StratumSplit& sp, const LatticeVec& v) {
  const auto loc = locate(state.fan(), v);
  std::map<int, Rational> coord;
  for (std::size_t j = 0; j < loc.rays.size(); ++j)
    if (loc.lambdas(static_cast<Eigen::Index>(j)) > 0) coord[loc.rays[j]] = loc.lambdas(static_cast<Eigen::Index>(j));
  auto take = [&](const std::vector<int>& rays) {
    LatticeVec x(static_cast<Eigen::Index>(rays.size()));
    for (std::size_t i = 0; i < rays.size(); ++i) {
      auto it = coord.find(rays[i]);
      Rational c = it == coord.end() ? Rational(0) : it->second;
      if (denominator(c) != 1) throw InvariantError("stratum of a smooth model has non-integral coordinates");
      x(static_cast<Eigen::Index>(i)) = numerator(c);
      if (it != coord.end()) coord.erase(it);
    }
    return x;
  };
  LatticeVec f = take(sp.low);
  LatticeVec tail = take(sp.one);
  if (!coord.empty()) return std::nullopt;
  return std::make_pair(f, tail);
}

LatticeVec combine(const ReductionState& state, const StratumSplit& sp, const LatticeVec& f, const LatticeVec& tail) {
  LatticeVec v = LatticeVec::Constant(state.fan().dim(), Integer(0));
  for (std::size_t i = 0; i < sp.low.size(); ++i)
    v += f(static_cast<Eigen::Index>(i)) * state.fan().rays()[static_cast<std::size_t>(sp.low[i])];
  for (std::size_t j = 0; j < sp.one.size(); ++j)
    v += tail(static_cast<Eigen::Index>(j)) * state.fan().rays()[static_cast<std::size_t>(sp.one[j])];
  return v;
}

bool in_F(const std::vector<Rational>& coeffs, const LatticeVec& f) {
  Rational a = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (f(static_cast<Eigen::Index>(i)) < 0) return false;
    a += Rational(f(static_cast<Eigen::Index>(i))) * (1 - coeffs[i]);
  }
  return a < 1;
}

// Minimal B value over the deviations in the fiber over f; ties go to the
// smallest tail. Falls back to (f, 1, ..., 1), or nullopt without a tail.
std::optional<LatticeVec> fiber_minimizer(const ReductionState& state, const StratumSplit& sp, const LatticeVec& f) {
  std::optional<std::tuple<Rational, LatticeVec, LatticeVec>> best;
  for (const auto& [nu, value] : state.B.deviations()) {
    if (value >= 1) continue;
    auto coords = stratum_coordinates(state, sp, nu);
    if (!coords || coords->first != f) continue;
    const auto& tail = coords->second;
    if (!best || value < std::get<0>(*best) ||
        (value == std::get<0>(*best) && lex_compare(tail, std::get<1>(*best)) < 0))
      best = std::make_tuple(value, tail, nu);
  }
  if (best) return std::get<2>(*best);
  if (sp.one.empty()) {
    if (is_zero(f) || !is_primitive(f)) return std::nullopt;
    return combine(state, sp, f, LatticeVec(0));
  }
  return combine(state, sp, f, LatticeVec::Constant(static_cast<Eigen::Index>(sp.one.size()), Integer(1)));
}

}  // namespace

std::vector<LatticeVec> enumerate_F(const std::vector<Rational>& coeffs) {
  for (const auto& c : coeffs)
    if (c >= 1) throw PreconditionError("the set F needs every coefficient below one");
  std::vector<LatticeVec> out;
  LatticeVec cur = LatticeVec::Constant(static_cast<Eigen::Index>(coeffs.size()), Integer(0));
  enumerate_rec(coeffs, 0, Rational(1), cur, out);
  return out;
}

std::vector<LatticeVec> enumerate_F(const LocalModel& model) {
  return enumerate_F(std::vector<Rational>(model.pair.coeffs.begin(), model.pair.coeffs.begin() + model.s));
}

std::vector<Witness> witnesses(const ReductionState& state) {
  std::vector<Witness> out;
  for (const auto& [nu, value] : state.B.deviations()) {
    if (is_ray(state.fan(), nu)) continue;
    const Rational L = state.L(nu);
    if (!(value < L)) continue;
    const auto stratum = locate(state.fan(), nu).support();
    int w = 0;
    for (int r : stratum) w += state.phi.ray_coeffs[static_cast<std::size_t>(r)] == 1;
    out.push_back(Witness{nu, stratum, w, value, L});
  }
  std::sort(out.begin(), out.end(), [](const Witness& a, const Witness& b) {
    if (a.stratum != b.stratum) return a.stratum < b.stratum;
    return lex_compare(a.nu, b.nu) < 0;
  });
  return out;
}

int weight(const ReductionState& state, const std::vector<int>& stratum) {
  std::vector<int> key = stratum;
  std::sort(key.begin(), key.end());
  for (const auto& wt : witnesses(state))
    if (wt.stratum == key) return wt.weight;
  return -1;
}

int weight(const LocalModel& model, const BDivisor& B, const std::vector<int>& coordinates) {
  if (coordinates.empty()) throw PreconditionError("a stratum needs at least one coordinate");
  for (int i : coordinates)
    if (i < 0 || i >= model.pair.dim()) throw PreconditionError("stratum coordinate out of range");
  return weight(initial_state(model, B), coordinates);
}

int pair_weight(const ReductionState& state) {
  int w = -1;
  for (const auto& wt : witnesses(state)) w = std::max(w, wt.weight);
  return w;
}

int pair_weight(const LocalModel& model, const BDivisor& B) { return pair_weight(initial_state(model, B)); }

std::optional<LatticeVec> choose_sigma(const LocalModel& model, const BDivisor& B, const LatticeVec& f) {
  const std::vector<Rational> low(model.pair.coeffs.begin(), model.pair.coeffs.begin() + model.s);
  if (f.size() != model.s || !in_F(low, f)) throw PreconditionError("f does not belong to the set F");
  const ReductionState state = initial_state(model, B);
  std::vector<int> all(static_cast<std::size_t>(model.pair.dim()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return fiber_minimizer(state, split_stratum(state, all), f);
}

std::vector<LatticeVec> stratum_sigmas(const ReductionState& state, const std::vector<int>& stratum) {
  const StratumSplit sp = split_stratum(state, stratum);
  std::vector<Rational> low;
  for (int r : sp.low) low.push_back(state.phi.ray_coeffs[static_cast<std::size_t>(r)]);
  std::vector<LatticeVec> out;
  for (const auto& f : enumerate_F(low)) {
    std::optional<LatticeVec> sigma;
    if (sp.one.empty()) {
      if (!is_zero(f) && is_primitive(f)) sigma = combine(state, sp, f, LatticeVec(0));
    } else {
      sigma = fiber_minimizer(state, sp, f);
    }
    if (sigma && !is_ray(state.fan(), *sigma)) out.push_back(*sigma);
  }
  return out;
}

ReductionState build_cut(const ReductionState& state, const std::vector<LatticeVec>& sigma_in, CutRecord* record) {
  const Fan& Z = state.fan();
  const int n = Z.dim();

  std::vector<LatticeVec> sigma;
  std::set<LatticeVec, LexLess> seen;
  for (const auto& s : sigma_in) {
    MonomialValuation nu(s);
    if (nu.dim() != n) throw PreconditionError("valuation dimension does not match the model");
    if (is_ray(Z, s) || !seen.insert(s).second) continue;
    if (state.L(s) <= 0) throw PreconditionError("cut valuation " + to_string(s) + " has L_Phi = 0");
    sigma.push_back(s);
  }
  if (sigma.empty()) throw PreconditionError("a cut needs at least one exceptional valuation");

  // Y_sigma with Gamma_sigma = (L_Phi ^ B) traced on it. Only sigma with
  // B(sigma) < L_Phi(sigma) give an L_Gamma different from L_Phi.
  std::vector<ModelDivisor> lowered;
  Fan refined = Z;
  for (const auto& s : sigma) {
    const Rational L = state.L(s);
    const Rational b = state.B(s);
    if (!(b < L)) continue;
    Fan Y = star_subdivide(Z, s);
    std::vector<Rational> gamma;
    for (const auto& r : Y.rays()) gamma.push_back(r == s ? b : state.phi.coeff(r));
    lowered.emplace_back(Y, std::move(gamma));
    refined = refine_for_star(refined, Z, s);
  }
  const Fan Zp = ensure_rays(refined, sigma);

  std::vector<Rational> new_phi;
  std::vector<std::pair<LatticeVec, Rational>> new_devs;
  std::vector<Rational> pair_coeffs(static_cast<std::size_t>(n));
  if (record) *record = CutRecord{sigma, {}, {}};
  for (const auto& r : Zp.rays()) {
    Rational theta = state.L(r);
    for (const auto& md : lowered) theta = std::min(theta, L_coeff_rel_model(md, r));
    const Rational value = std::min(theta, state.B(r));
    new_phi.push_back(value);
    if (r.sum() == 1) {
      for (int i = 0; i < n; ++i)
        if (r(i) == 1) pair_coeffs[static_cast<std::size_t>(i)] = value;
    } else if (value < 1) {
      new_devs.emplace_back(r, value);
    }
    if (record && !is_ray(Z, r)) {
      record->rays_added.push_back(r);
      record->theta_on_added.push_back(theta);
    }
  }
  for (const auto& [nu, value] : state.B.deviations())
    if (!is_ray(Zp, nu)) new_devs.emplace_back(nu, value);

  ReductionState next{ModelDivisor(Zp, new_phi), BDivisor(pair_coeffs, new_devs)};
  for (std::size_t i = 0; i < Zp.rays().size(); ++i)
    if (next.B(Zp.rays()[i]) != new_phi[i]) throw InvariantError("cut left B and its trace inconsistent on a ray");
  return next;
}

ReductionTrace reduce(const LocalModel& model, const BDivisor& B) {
  ReductionTrace trace{{}, initial_state(model, B), -1};
  ReductionState& state = trace.final_state;
  int w = pair_weight(state);
  const int max_steps = model.pair.dim() + 2;
  while (w >= 0) {
    if (static_cast<int>(trace.steps.size()) >= max_steps)
      throw InvariantError("reduction did not terminate within the weight bound");
    std::vector<std::vector<int>> strata;
    for (const auto& wt : witnesses(state))
      if (wt.weight == w && (strata.empty() || strata.back() != wt.stratum)) strata.push_back(wt.stratum);
    std::vector<LatticeVec> sigma;
    for (const auto& st : strata)
      for (auto& s : stratum_sigmas(state, st)) sigma.push_back(std::move(s));
    if (sigma.empty()) throw InvariantError("no valuation to cut at although the weight is nonnegative");
    ReductionStep step{w, -1, strata, {}};
    ReductionState next = build_cut(state, sigma, &step.cut);
    const int w_next = pair_weight(next);
    if (w_next >= w)
      throw InvariantError("weight failed to decrease: " + std::to_string(w) + " -> " + std::to_string(w_next));
    step.weight_after = w_next;
    trace.steps.push_back(std::move(step));
    state = std::move(next);
    w = w_next;
  }
  trace.terminated_weight = w;
  return trace;
}

namespace {

void consider(const ReductionState& state, const LatticeVec& nu, std::optional<Violation>& best, long& checked) {
  ++checked;
  const Rational L = state.L(nu);
  const Rational b = state.B(nu);
  if (L > b && (!best || lex_compare(nu, best->nu) < 0)) best = Violation{nu, L, b};
}

}  // namespace

VerifyReport verify_L_le_B(const ReductionState& state, long box, unsigned threads) {
  if (box < 1) throw PreconditionError("verification box must be positive");
  const int n = state.fan().dim();
  std::optional<Violation> best;
  long checked = 0;
  for (const auto& [nu, value] : state.B.deviations()) consider(state, nu, best, checked);
  for (const auto& r : state.fan().rays()) consider(state, r, best, checked);

  // Split the box on the first coordinate; each slice is scanned in
  // lexicographic order and the slices are merged in order.
  const long slices = box + 1;
  std::vector<std::optional<Violation>> found(static_cast<std::size_t>(slices));
  std::vector<long> counts(static_cast<std::size_t>(slices), 0);
  auto scan = [&](long first) {
    LatticeVec v = LatticeVec::Constant(n, Integer(0));
    v(0) = first;
    while (true) {
      if (!is_zero(v) && is_primitive(v))
        consider(state, v, found[static_cast<std::size_t>(first)], counts[static_cast<std::size_t>(first)]);
      int i = n - 1;
      while (i >= 1 && v(i) == box) v(i--) = 0;
      if (i < 1) break;
      v(i) += 1;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(slices)));
  if (workers == 1) {
    for (long a = 0; a < slices; ++a) scan(a);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (long a = t; a < slices; a += workers) scan(a);
      });
    for (auto& th : pool) th.join();
  }
  for (long a = 0; a < slices; ++a) {
    checked += counts[static_cast<std::size_t>(a)];
    const auto& v = found[static_cast<std::size_t>(a)];
    if (v && (!best || lex_compare(v->nu, best->nu) < 0)) best = v;
  }
  return VerifyReport{!best.has_value(), checked, best};
}

}  // namespace bvtk

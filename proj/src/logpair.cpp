#include "bvtk/logpair.hpp"

#include <algorithm>
#include <string>

namespace bvtk {

namespace {

void check_unit_interval(const Rational& x, const char* what) {
  if (x < 0 || x > 1) throw PreconditionError(std::string(what) + " " + to_string(x) + " lies outside [0,1]");
}

void check_dim(int expected, int got) {
  if (expected != got)
    throw PreconditionError("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                            std::to_string(got));
}

std::optional<Eigen::Index> unit_index(const LatticeVec& v) {
  std::optional<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == 0) continue;
    if (v(i) != 1 || idx) return std::nullopt;
    idx = i;
  }
  return idx;
}

Rational clamp0(const Rational& x) { return x < 0 ? Rational(0) : x; }

}  // namespace

LocalSNCPair::LocalSNCPair(std::vector<Rational> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) throw PreconditionError("pair dimension must be positive");
  for (const auto& x : coeffs) check_unit_interval(x, "pair coefficient");
}

bool LocalSNCPair::is_klt() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c < 1; });
}

MonomialValuation::MonomialValuation(LatticeVec v) : v_(std::move(v)) {
  if (v_.size() == 0) throw PreconditionError("valuation has dimension zero");
  if (is_zero(v_)) throw PreconditionError("the zero vector is not a valuation");
  if (!is_nonnegative(v_)) throw PreconditionError("valuation lies outside the positive orthant");
  if (!is_primitive(v_)) throw PreconditionError("valuation vector is not primitive");
}

BDivisor::BDivisor(std::vector<Rational> pair_coeffs, const std::vector<std::pair<LatticeVec, Rational>>& deviations)
    : pair_coeffs_(std::move(pair_coeffs)) {
  if (pair_coeffs_.empty()) throw PreconditionError("b-divisor dimension must be positive");
  for (const auto& x : pair_coeffs_) check_unit_interval(x, "b-divisor value");
  for (const auto& [v, value] : deviations) {
    MonomialValuation nu(v);
    check_dim(dim(), nu.dim());
    check_unit_interval(value, "b-divisor value");
    if (!deviations_.emplace(v, value).second) throw PreconditionError("duplicate deviation key");
  }
}

Rational BDivisor::operator()(const LatticeVec& v) const {
  check_dim(dim(), static_cast<int>(v.size()));
  auto it = deviations_.find(v);
  if (it != deviations_.end()) return it->second;
  if (auto i = unit_index(v)) return pair_coeffs_[static_cast<std::size_t>(*i)];
  return 1;
}

ModelDivisor::ModelDivisor(Fan f, std::vector<Rational> coeffs) : fan(std::move(f)), ray_coeffs(std::move(coeffs)) {
  if (ray_coeffs.size() != fan.rays().size()) throw PreconditionError("every fan ray needs a coefficient");
}

Rational ModelDivisor::coeff(const LatticeVec& ray) const {
  auto idx = fan.ray_index(ray);
  if (!idx) throw PreconditionError("vector is not a ray of the model");
  return ray_coeffs[static_cast<std::size_t>(*idx)];
}

Rational log_discrepancy(const LocalSNCPair& p, const MonomialValuation& nu) {
  check_dim(p.dim(), nu.dim());
  Rational a = 0;
  for (int i = 0; i < p.dim(); ++i) a += Rational(nu.vec()(i)) * (1 - p.coeffs[static_cast<std::size_t>(i)]);
  return a;
}

Rational L_coeff(const LocalSNCPair& p, const MonomialValuation& nu) { return clamp0(1 - log_discrepancy(p, nu)); }

Rational M_coeff(const LocalSNCPair& p, const MonomialValuation& nu) {
  check_dim(p.dim(), nu.dim());
  if (auto i = unit_index(nu.vec())) return p.coeffs[static_cast<std::size_t>(*i)];
  return 1;
}

Rational bdiv_eval(const BDivisor& b, const MonomialValuation& nu) { return b(nu.vec()); }

ModelDivisor L_trace_on_fan(const LocalSNCPair& p, const Fan& f) {
  check_dim(p.dim(), f.dim());
  std::vector<Rational> coeffs;
  for (const auto& r : f.rays()) coeffs.push_back(L_coeff(p, MonomialValuation(r)));
  return ModelDivisor(f, std::move(coeffs));
}

Rational L_affine_rel_model(const ModelDivisor& md, const LatticeVec& nu) {
  if (auto r = md.fan.ray_index(nu)) return md.ray_coeffs[static_cast<std::size_t>(*r)];
  const auto loc = locate(md.fan, nu);
  Rational value = 1;
  for (std::size_t j = 0; j < loc.rays.size(); ++j)
    value -= loc.lambdas(static_cast<Eigen::Index>(j)) * (1 - md.ray_coeffs[static_cast<std::size_t>(loc.rays[j])]);
  return value;
}

Rational L_coeff_rel_model(const ModelDivisor& md, const LatticeVec& nu) { return clamp0(L_affine_rel_model(md, nu)); }

ModelDivisor meet(const ModelDivisor& a, const ModelDivisor& b) {
  if (!(a.fan == b.fan)) throw PreconditionError("meet requires divisors on the same model");
  std::vector<Rational> coeffs;
  for (std::size_t i = 0; i < a.ray_coeffs.size(); ++i) coeffs.push_back(std::min(a.ray_coeffs[i], b.ray_coeffs[i]));
  return ModelDivisor(a.fan, std::move(coeffs));
}

// For v with all v_i >= 1 the log discrepancy a(v) is at least v_i (1 - c_i)
// plus the other terms, so a minimizer, whose value is at most
// a0 = a(1,...,1), satisfies v_i (1 - c_i) <= a0. Coordinates with c_i = 1 do
// not affect the value and are pinned to 1.
std::vector<Integer> mld_search_box(const LocalSNCPair& p) {
  Rational a0 = 0;
  for (const auto& c : p.coeffs) a0 += 1 - c;
  std::vector<Integer> box;
  for (const auto& c : p.coeffs) box.push_back(c == 1 ? Integer(1) : std::max(Integer(1), ceil_of(a0 / (1 - c))));
  return box;
}

MldResult mld_origin(const LocalSNCPair& p) {
  const int n = p.dim();
  const auto box = mld_search_box(p);
  LatticeVec v = LatticeVec::Constant(n, Integer(1));
  std::optional<MldResult> best;
  while (true) {
    if (is_primitive(v)) {
      Rational a = 0;
      for (int i = 0; i < n; ++i) a += Rational(v(i)) * (1 - p.coeffs[static_cast<std::size_t>(i)]);
      if (!best || a < best->value) best = MldResult{a, v, p.is_klt()};
    }
    int i = n - 1;
    while (i >= 0 && v(i) == box[static_cast<std::size_t>(i)]) {
      v(i) = 1;
      --i;
    }
    if (i < 0) break;
    v(i) += 1;
  }
  return *best;
}

RoundCheck round_identity_check(const std::vector<Rational>& coeffs, long m) {
  if (m < 1) throw PreconditionError("m must be a positive integer");
  RoundCheck out{{}, {}, true, true};
  for (const auto& c : coeffs) {
    if (c < 0 || c >= 1) throw PreconditionError("rounding inequality requires coefficients in [0,1), got " + to_string(c));
    out.lhs.push_back(floor_of(Rational(m) * c));
    out.rhs.push_back(ceil_of(Rational(m - 1) * c));
    if (out.lhs.back() > out.rhs.back()) out.le = false;
    if (out.lhs.back() != out.rhs.back()) out.equal = false;
  }
  if (!out.le) throw InvariantError("rounding inequality floor(m c) <= ceil((m-1) c) failed");
  return out;
}

}  // namespace bvtk

#pragma once

// Local SNC pairs (C^n, sum c_i H_i), monomial valuations, and the b-divisors
// L (positive part of the log pullback) and M (default-one) evaluated on
// toric models.

#include "bvtk/arith.hpp"
#include "bvtk/fan.hpp"

#include <map>
#include <utility>
#include <vector>

namespace bvtk {

struct LocalSNCPair {
  /// Throws PreconditionError unless every coefficient lies in [0, 1].
  explicit LocalSNCPair(std::vector<Rational> coeffs);

  int dim() const { return static_cast<int>(coeffs.size()); }
  bool is_klt() const;

  std::vector<Rational> coeffs;
};

/// A primitive nonzero lattice vector in the closed positive orthant.
class MonomialValuation {
 public:
  explicit MonomialValuation(LatticeVec v);

  const LatticeVec& vec() const { return v_; }
  operator const LatticeVec&() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

 private:
  LatticeVec v_;
};

/// Default-one b-divisor: value pair_coeffs[i] on e_i, the listed deviation
/// on each key, and 1 on every other valuation. Deviations take precedence.
class BDivisor {
 public:
  BDivisor(std::vector<Rational> pair_coeffs, const std::vector<std::pair<LatticeVec, Rational>>& deviations);

  int dim() const { return static_cast<int>(pair_coeffs_.size()); }
  const std::vector<Rational>& pair_coeffs() const { return pair_coeffs_; }
  const std::map<LatticeVec, Rational, LexLess>& deviations() const { return deviations_; }

  Rational operator()(const LatticeVec& v) const;

 private:
  std::vector<Rational> pair_coeffs_;
  std::map<LatticeVec, Rational, LexLess> deviations_;
};

/// A divisor on a toric model: one coefficient per ray of the fan.
struct ModelDivisor {
  ModelDivisor(Fan fan, std::vector<Rational> ray_coeffs);

  Rational coeff(const LatticeVec& ray) const;

  Fan fan;
  std::vector<Rational> ray_coeffs;
};

/// sum_i v_i (1 - c_i)
Rational log_discrepancy(const LocalSNCPair& p, const MonomialValuation& nu);

/// max(0, 1 - log_discrepancy)
Rational L_coeff(const LocalSNCPair& p, const MonomialValuation& nu);

/// c_i on e_i, 1 elsewhere.
Rational M_coeff(const LocalSNCPair& p, const MonomialValuation& nu);

Rational bdiv_eval(const BDivisor& b, const MonomialValuation& nu);

ModelDivisor L_trace_on_fan(const LocalSNCPair& p, const Fan& f);

/// max(0, 1 - sum_j lambda_j (1 - gamma_j)) where nu = sum_j lambda_j r_j in
/// a cone of md.fan with ray coefficients gamma_j.
Rational L_coeff_rel_model(const ModelDivisor& md, const LatticeVec& nu);

/// Unclamped 1 - sum_j lambda_j (1 - gamma_j): the linear function on the
/// located cone. Agrees with L_coeff_rel_model wherever that is positive.
Rational L_affine_rel_model(const ModelDivisor& md, const LatticeVec& nu);

ModelDivisor meet(const ModelDivisor& a, const ModelDivisor& b);

struct MldResult {
  Rational value;
  LatticeVec minimizer;
  bool klt;
};

/// Minimum of the log discrepancy over valuations centred at the origin.
MldResult mld_origin(const LocalSNCPair& p);

/// Per-coordinate box that contains every minimizer of mld_origin.
std::vector<Integer> mld_search_box(const LocalSNCPair& p);

struct RoundCheck {
  std::vector<Integer> lhs;  // floor(m c)
  std::vector<Integer> rhs;  // ceil((m - 1) c)
  bool le;
  bool equal;
};

/// Rounding inequality: floor(m c) <= ceil((m - 1) c) for c in [0, 1).
RoundCheck round_identity_check(const std::vector<Rational>& coeffs, long m);

}  // namespace bvtk

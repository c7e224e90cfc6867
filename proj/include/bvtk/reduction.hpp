#pragma once

// Weight descent for a b-divisor B over a local SNC pair: cuts replace the
// current toric model by a finer one and lower B on the new divisors until
// L_Phi <= B holds everywhere.

#include "bvtk/arith.hpp"
#include "bvtk/fan.hpp"
#include "bvtk/logpair.hpp"

#include <optional>
#include <vector>

namespace bvtk {

/// A local pair whose coefficient-one components come last.
struct LocalModel {
  /// Throws PreconditionError if a coefficient-one component precedes one
  /// with coefficient below one.
  explicit LocalModel(LocalSNCPair pair);

  LocalSNCPair pair;
  int s;  // coefficients below one
  int w;  // coefficients equal to one
};

/// The current model Z (phi.fan), the trace Phi = B_Z (phi.ray_coeffs), and B.
/// B agrees with phi on every ray of Z.
struct ReductionState {
  ModelDivisor phi;
  BDivisor B;

  const Fan& fan() const { return phi.fan; }
  Rational L(const LatticeVec& nu) const { return L_coeff_rel_model(phi, nu); }
};

/// Starting state on the orthant fan. B's values on the e_i must equal the
/// pair's coefficients.
ReductionState initial_state(const LocalModel& model, const BDivisor& B);

/// Lattice points f of N^k with sum_i f_i (1 - c_i) < 1, lexicographically
/// sorted, including zero. All c_i must be below one.
std::vector<LatticeVec> enumerate_F(const std::vector<Rational>& coeffs);
std::vector<LatticeVec> enumerate_F(const LocalModel& model);

/// A valuation nu with B(nu) < L_Phi(nu). Its centre is the stratum of the
/// smallest cone containing it; the weight counts coefficient-one rays there.
struct Witness {
  LatticeVec nu;
  std::vector<int> stratum;  // sorted ray indices of the current fan
  int weight;
  Rational B_value;
  Rational L_value;
};

/// Every witness, sorted by (stratum, nu). Only listed deviations can be
/// witnesses: elsewhere B is 1 or agrees with Phi on a ray.
std::vector<Witness> witnesses(const ReductionState& state);

/// Weight of a stratum given by sorted ray indices; -1 without a witness.
int weight(const ReductionState& state, const std::vector<int>& stratum);
/// Weight of the stratum cut out by the listed coordinates (0-based).
int weight(const LocalModel& model, const BDivisor& B, const std::vector<int>& coordinates);

int pair_weight(const ReductionState& state);
int pair_weight(const LocalModel& model, const BDivisor& B);

/// A valuation over f minimizing B on its fiber; ties go to the
/// lexicographically smallest tail, and (f, 1, ..., 1) stands in when nothing
/// in the fiber is below one. nullopt when the fiber has no valuation.
std::optional<LatticeVec> choose_sigma(const LocalModel& model, const BDivisor& B, const LatticeVec& f);

/// The valuations cut at for one stratum of the current model.
std::vector<LatticeVec> stratum_sigmas(const ReductionState& state, const std::vector<int>& stratum);

struct CutRecord {
  std::vector<LatticeVec> sigma;
  std::vector<LatticeVec> rays_added;
  std::vector<Rational> theta_on_added;  // parallel to rays_added
};

/// The cut associated to Sigma. Members already rays of the model are
/// skipped; each remaining sigma must have L_Phi(sigma) > 0.
ReductionState build_cut(const ReductionState& state, const std::vector<LatticeVec>& sigma,
                         CutRecord* record = nullptr);

struct ReductionStep {
  int weight_before;
  int weight_after;
  std::vector<std::vector<int>> strata;  // ray indices in the model before the cut
  CutRecord cut;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  ReductionState final_state;
  int terminated_weight;
};

/// Cuts until the weight is -1. Throws InvariantError if a cut fails to lower
/// the weight.
ReductionTrace reduce(const LocalModel& model, const BDivisor& B);

struct Violation {
  LatticeVec nu;
  Rational L_value;
  Rational B_value;
};

struct VerifyReport {
  bool ok;
  long checked;
  std::optional<Violation> first_violation;  // lexicographically smallest
};

/// Checks L_Phi(nu) <= B(nu) on every deviation, every ray, and every
/// primitive nu in [0, box]^n.
VerifyReport verify_L_le_B(const ReductionState& state, long box, unsigned threads = 1);

}  // namespace bvtk

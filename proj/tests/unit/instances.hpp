#pragma once

#include "bvtk/reduction.hpp"
#include "support.hpp"

#include <algorithm>
#include <set>

namespace testing_support {

inline const std::vector<Rational>& standard_coeffs() {
  static const std::vector<Rational> pool{rat(0), rat(1, 2), rat(2, 3), rat(6, 7), rat(41, 42), rat(1)};
  return pool;
}

struct ReductionInstance {
  bvtk::LocalModel model;
  bvtk::BDivisor B;
};

// Coefficients from the standard pool (ones moved last), up to three
// deviations on non-unit valuations with entries at most max_entry.
inline ReductionInstance random_reduction_instance(int n, long max_entry = 4) {
  std::vector<Rational> cs;
  for (int i = 0; i < n; ++i) cs.push_back(pick(standard_coeffs()));
  std::stable_partition(cs.begin(), cs.end(), [](const Rational& c) { return c < 1; });
  std::vector<std::pair<LatticeVec, Rational>> devs;
  std::set<LatticeVec, bvtk::LexLess> used;
  const long count = uniform(0, 3);
  for (long k = 0; k < count; ++k) {
    LatticeVec v = random_primitive(n, max_entry);
    if (v.sum() == 1 || !used.insert(v).second) continue;
    devs.emplace_back(v, pick(standard_coeffs()));
  }
  return ReductionInstance{bvtk::LocalModel(bvtk::LocalSNCPair(cs)), bvtk::BDivisor(cs, devs)};
}

}  // namespace testing_support

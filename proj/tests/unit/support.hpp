#pragma once

#include "bvtk/arith.hpp"

#include <random>
#include <vector>

namespace testing_support {

using bvtk::Integer;
using bvtk::LatticeVec;
using bvtk::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611ULL);
  return engine;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

template <typename T>
const T& pick(const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uniform(0, static_cast<long>(xs.size()) - 1))];
}

inline LatticeVec random_orthant_point(int n, long max_entry) {
  LatticeVec v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = uniform(0, max_entry);
  } while (bvtk::is_zero(v));
  return v;
}

inline LatticeVec random_primitive(int n, long max_entry) { return bvtk::primitive_part(random_orthant_point(n, max_entry)); }

inline Rational rat(long p, long q = 1) { return Rational(p, q); }

}  // namespace testing_support

#pragma once

// Simplicial fans supported on the closed positive orthant of R^n.
//
// A Fan is an immutable value: rays are primitive lattice vectors, maximal
// cones are lists of n ray indices in generator order. Cones are kept in a
// canonical order (lexicographic by their sorted ray indices), so "the
// lexicographically first cone" is simply the lowest cone index.

#include "bvtk/arith.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace bvtk {

/// Practical dimension cap for fan computations.
inline constexpr int kMaxFanDim = 6;

namespace detail {
struct FanIndex;
}

using ConeRays = std::vector<int>;
struct BarycentricResult;
class FanBuilder;

class Fan {
 public:
  /// Validates and canonicalizes. Throws PreconditionError if a ray is not
  /// primitive or leaves the orthant, if a cone has the wrong size, repeats a
  /// ray, or has linearly dependent generators.
  Fan(int n, std::vector<LatticeVec> rays, std::vector<ConeRays> cones);

  int dim() const { return n_; }
  const std::vector<LatticeVec>& rays() const { return rays_; }
  const std::vector<ConeRays>& cones() const { return cones_; }

  /// Generators of a maximal cone as matrix columns, in generator order.
  Matrix<Integer> generators(std::size_t cone) const;
  const Integer& determinant(std::size_t cone) const;
  std::optional<int> ray_index(const LatticeVec& v) const;

  /// Maximal cones containing every listed ray (sorted cone indices).
  std::vector<std::size_t> cones_containing(const std::vector<int>& rays) const;

  friend bool operator==(const Fan& a, const Fan& b);
  friend BarycentricResult locate(const Fan& f, const LatticeVec& v);
  friend class FanBuilder;

 private:
  int n_;
  std::vector<LatticeVec> rays_;
  std::vector<ConeRays> cones_;
  std::shared_ptr<const detail::FanIndex> index_;
};

struct BarycentricResult {
  std::size_t cone;
  ConeRays rays;        // generator order of that cone
  RationalVec lambdas;  // sum_j lambdas[j] * rays()[rays[j]] == query

  /// Ray indices carrying a positive coefficient, i.e. the smallest face of
  /// the fan containing the query point in its relative interior.
  std::vector<int> support() const;
};

Fan orthant_fan(int n);

/// Replaces each maximal cone containing r by the cones joining r to the
/// facets of that cone not containing r. r is made primitive first.
Fan star_subdivide(const Fan& f, const LatticeVec& r);

/// Maximal cone containing v and the exact coefficients of v in it. Points on
/// a shared face resolve to the lowest-indexed containing cone.
BarycentricResult locate(const Fan& f, const LatticeVec& v);

bool is_smooth(const Fan& f);

/// Smooth refinement by repeated star subdivision at the lexicographically
/// smallest nonzero lattice point of the half-open fundamental parallelepiped
/// of a non-smooth cone.
Fan resolve(const Fan& f);

/// Star subdivides at each vector in order (existing rays are skipped), then
/// resolves.
Fan ensure_rays(const Fan& f, const std::vector<LatticeVec>& vs);

/// A simplicial fan refining both `fine` and star_subdivide(base, r), where
/// `fine` must already refine `base`. Cones of `fine` lying in a cone of base
/// that contains r are cut along the walls of the star subdivision and the
/// pieces are re-triangulated consistently.
Fan refine_for_star(const Fan& fine, const Fan& base, const LatticeVec& r);

/// True when every maximal cone of `fine` lies inside some maximal cone of
/// `coarse`.
bool refines(const Fan& fine, const Fan& coarse);

}  // namespace bvtk

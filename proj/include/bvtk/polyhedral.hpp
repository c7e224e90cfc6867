#pragma once

#include "bvtk/arith.hpp"

#include <vector>

namespace bvtk {

/// Triangulates the pointed polyhedral cone spanned by points[cell] by
/// pulling vertices in increasing index order. `normals` must contain an
/// inward normal (h . x >= 0 on the cone) for every facet; extra valid
/// inequalities are harmless. Because the pulling order is global, two cones
/// sharing a face with the same vertex set induce the same triangulation on
/// it. Each simplex is returned as sorted point indices.
std::vector<std::vector<int>> pulling_triangulation(const std::vector<LatticeVec>& points,
                                                    const std::vector<int>& cell,
                                                    const std::vector<LatticeVec>& normals);

/// Rank of the listed points as column vectors.
long point_rank(const std::vector<LatticeVec>& points, const std::vector<int>& subset);

}  // namespace bvtk

#include "bvtk/polyhedral.hpp"

#include "bvtk/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bvtk {

long point_rank(const std::vector<LatticeVec>& points, const std::vector<int>& subset) {
  if (subset.empty()) return 0;
  Matrix<Integer> m(points[subset[0]].size(), static_cast<Eigen::Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = points[subset[j]];
  return static_cast<long>(rank(m));
}

namespace {

using Face = std::vector<int>;

class Puller {
 public:
  Puller(const std::vector<LatticeVec>& points, const std::vector<LatticeVec>& normals)
      : points_(points), normals_(normals) {}

  const std::vector<Face>& triangulate(const Face& face, long dim) {
    auto it = memo_.find(face);
    if (it != memo_.end()) return it->second;
    std::vector<Face> out;
    if (static_cast<long>(face.size()) == dim) {
      out.push_back(face);
    } else {
      const int apex = face.front();
      std::set<Face> facets;
      for (const auto& h : normals_) {
        Face tight;
        bool apex_tight = false;
        for (int p : face) {
          if (h.dot(points_[p]) == 0) {
            tight.push_back(p);
            if (p == apex) apex_tight = true;
          }
        }
        if (apex_tight || static_cast<long>(tight.size()) < dim - 1) continue;
        if (tight.size() == face.size()) continue;
        if (point_rank(points_, tight) != dim - 1) continue;
        facets.insert(tight);
      }
      for (const auto& g : facets) {
        for (const auto& s : triangulate(g, dim - 1)) {
          Face simplex = s;
          simplex.insert(std::lower_bound(simplex.begin(), simplex.end(), apex), apex);
          out.push_back(std::move(simplex));
        }
      }
    }
    return memo_.emplace(face, std::move(out)).first->second;
  }

 private:
  const std::vector<LatticeVec>& points_;
  const std::vector<LatticeVec>& normals_;
  std::map<Face, std::vector<Face>> memo_;
};

}  // namespace

std::vector<std::vector<int>> pulling_triangulation(const std::vector<LatticeVec>& points,
                                                    const std::vector<int>& cell,
                                                    const std::vector<LatticeVec>& normals) {
  Face face = cell;
  std::sort(face.begin(), face.end());
  face.erase(std::unique(face.begin(), face.end()), face.end());
  if (face.empty()) return {};
  const long dim = point_rank(points, face);
  Puller puller(points, normals);
  return puller.triangulate(face, dim);
}

}  // namespace bvtk

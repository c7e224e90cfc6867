#include "bvtk/fan.hpp"

#include "bvtk/linalg.hpp"
#include "bvtk/polyhedral.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace bvtk {

namespace detail {

// Integer matrices and vectors with small entries, for sign tests in the walk.
struct SmallMatrix {
  bool ok = false;
  std::array<std::int64_t, kMaxFanDim * kMaxFanDim> a{};
};

struct SmallVector {
  bool ok = false;
  std::array<std::int64_t, kMaxFanDim> v{};
};

constexpr std::int64_t kSmallBound = std::int64_t(1) << 40;

inline bool small_entry(const Integer& x, std::int64_t& out) {
  if (abs(x) >= kSmallBound) return false;
  out = x.convert_to<std::int64_t>();
  return true;
}

inline SmallMatrix make_small(const Matrix<Integer>& m) {
  SmallMatrix out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!small_entry(m(i, j), out.a[static_cast<std::size_t>(i * m.cols() + j)])) return out;
  out.ok = true;
  return out;
}

inline SmallVector make_small(const LatticeVec& v) {
  SmallVector out;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!small_entry(v(i), out.v[static_cast<std::size_t>(i)])) return out;
  out.ok = true;
  return out;
}

// Signs of m * v.
inline std::array<int, kMaxFanDim> product_signs(const Matrix<Integer>& m, const SmallMatrix& sm, const LatticeVec& v,
                                                 const SmallVector& sv) {
  std::array<int, kMaxFanDim> out{};
  const Eigen::Index n = m.rows();
  if (sm.ok && sv.ok) {
    for (Eigen::Index i = 0; i < n; ++i) {
      __int128 acc = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        acc += static_cast<__int128>(sm.a[static_cast<std::size_t>(i * n + j)]) * sv.v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = acc > 0 ? 1 : (acc < 0 ? -1 : 0);
    }
    return out;
  }
  const LatticeVec x = m * v;
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = x(i) > 0 ? 1 : (x(i) < 0 ? -1 : 0);
  return out;
}

struct FanIndex {
  std::vector<Matrix<Integer>> adj;  // normalized so that det > 0
  std::vector<SmallMatrix> small_adj;
  std::vector<Integer> det;
  std::vector<Integer> signed_det;
  std::map<LatticeVec, int, LexLess> ray_lookup;
  std::vector<std::vector<std::size_t>> ray_cones;
  std::vector<std::vector<long>> neighbors;  // across the facet opposite each position
  std::vector<std::vector<double>> centre;   // unit direction of the sum of unit rays
};

}  // namespace detail

namespace {

void check_dim(int n) {
  if (n < 1) throw PreconditionError("fan dimension must be positive");
  if (n > kMaxFanDim)
    throw PreconditionError("fan dimension " + std::to_string(n) + " exceeds the supported maximum " +
                            std::to_string(kMaxFanDim));
}

void check_orthant_vector(const LatticeVec& v, int n, const char* what) {
  if (v.size() != n) throw PreconditionError(std::string(what) + " has the wrong dimension");
  if (is_zero(v)) throw PreconditionError(std::string(what) + " must be nonzero");
  if (!is_nonnegative(v)) throw PreconditionError(std::string(what) + " lies outside the positive orthant");
}

ConeRays sorted_copy(ConeRays c) {
  std::sort(c.begin(), c.end());
  return c;
}

Matrix<Integer> columns(const std::vector<LatticeVec>& rays, const ConeRays& cone) {
  Matrix<Integer> g(rays.front().size(), static_cast<Eigen::Index>(cone.size()));
  for (std::size_t j = 0; j < cone.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = rays[cone[j]];
  return g;
}

// Adjugate and determinant with the sign moved so the determinant is positive;
// adj * v then gives det * (barycentric coordinates of v).
std::pair<Matrix<Integer>, Integer> positive_adjugate(const Matrix<Integer>& g) {
  auto [adj, det] = adjugate(g);
  if (det < 0) {
    adj = -adj;
    det = -det;
  }
  return {adj, det};
}

ConeRays facet_key(const ConeRays& cone, std::size_t skip) {
  ConeRays key;
  for (std::size_t j = 0; j < cone.size(); ++j)
    if (j != skip) key.push_back(cone[j]);
  std::sort(key.begin(), key.end());
  return key;
}

std::vector<double> normalized(std::vector<double> x) {
  double norm = 0;
  for (double t : x) norm += t * t;
  norm = std::sqrt(norm);
  for (double& t : x) t /= norm;
  return x;
}

std::vector<double> unit_direction(const LatticeVec& v) {
  std::vector<double> x(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) x[static_cast<std::size_t>(i)] = v(i).convert_to<double>();
  return normalized(std::move(x));
}

// Deterministic step generator for the stochastic walk.
struct WalkRng {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  std::size_t pick(std::size_t k) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<std::size_t>((state >> 33) % k);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Fan

Fan::Fan(int n, std::vector<LatticeVec> rays, std::vector<ConeRays> cones)
    : n_(n), rays_(std::move(rays)), cones_(std::move(cones)) {
  check_dim(n);
  auto index = std::make_shared<detail::FanIndex>();
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    const auto& r = rays_[i];
    check_orthant_vector(r, n, "ray");
    if (!is_primitive(r)) throw PreconditionError("ray is not primitive");
    if (!index->ray_lookup.emplace(r, static_cast<int>(i)).second) throw PreconditionError("duplicate ray");
  }
  if (cones_.empty()) throw PreconditionError("fan has no maximal cones");
  for (const auto& c : cones_) {
    if (static_cast<int>(c.size()) != n) throw PreconditionError("maximal cone must have n generators");
    for (int r : c)
      if (r < 0 || r >= static_cast<int>(rays_.size())) throw PreconditionError("cone refers to a missing ray");
    auto s = sorted_copy(c);
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw PreconditionError("cone repeats a ray");
  }
  std::stable_sort(cones_.begin(), cones_.end(),
                   [](const ConeRays& a, const ConeRays& b) { return sorted_copy(a) < sorted_copy(b); });
  for (std::size_t i = 1; i < cones_.size(); ++i)
    if (sorted_copy(cones_[i - 1]) == sorted_copy(cones_[i])) throw PreconditionError("duplicate maximal cone");

  index->ray_cones.resize(rays_.size());
  std::map<ConeRays, std::vector<std::size_t>> facets;
  for (std::size_t c = 0; c < cones_.size(); ++c) {
    const Matrix<Integer> g = columns(rays_, cones_[c]);
    const Integer signed_det = ::bvtk::determinant(g);
    if (signed_det == 0) throw PreconditionError("maximal cone generators are linearly dependent");
    auto [adj, det] = positive_adjugate(g);
    index->small_adj.push_back(detail::make_small(adj));
    index->adj.push_back(std::move(adj));
    index->det.push_back(std::move(det));
    index->signed_det.push_back(signed_det);
    for (int r : cones_[c]) index->ray_cones[r].push_back(c);
    for (std::size_t j = 0; j < cones_[c].size(); ++j) facets[facet_key(cones_[c], j)].push_back(c);
    std::vector<double> centre(static_cast<std::size_t>(n), 0.0);
    for (int r : cones_[c]) {
      const auto u = unit_direction(rays_[r]);
      for (int i = 0; i < n; ++i) centre[i] += u[i];
    }
    index->centre.push_back(normalized(std::move(centre)));
  }
  index->neighbors.assign(cones_.size(), std::vector<long>(static_cast<std::size_t>(n), -1));
  for (std::size_t c = 0; c < cones_.size(); ++c) {
    for (std::size_t j = 0; j < cones_[c].size(); ++j) {
      const auto& owners = facets[facet_key(cones_[c], j)];
      if (owners.size() > 2) throw PreconditionError("a facet is shared by more than two maximal cones");
      for (auto o : owners)
        if (o != c) index->neighbors[c][j] = static_cast<long>(o);
    }
  }
  index_ = std::move(index);
}

Matrix<Integer> Fan::generators(std::size_t cone) const { return columns(rays_, cones_.at(cone)); }

const Integer& Fan::determinant(std::size_t cone) const { return index_->signed_det.at(cone); }

std::optional<int> Fan::ray_index(const LatticeVec& v) const {
  auto it = index_->ray_lookup.find(v);
  if (it == index_->ray_lookup.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Fan::cones_containing(const std::vector<int>& rays) const {
  if (rays.empty()) {
    std::vector<std::size_t> all(cones_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  std::vector<std::size_t> out = index_->ray_cones.at(rays[0]);
  for (std::size_t k = 1; k < rays.size(); ++k) {
    const auto& other = index_->ray_cones.at(rays[k]);
    std::vector<std::size_t> next;
    std::set_intersection(out.begin(), out.end(), other.begin(), other.end(), std::back_inserter(next));
    out = std::move(next);
  }
  return out;
}

bool operator==(const Fan& a, const Fan& b) {
  return a.n_ == b.n_ && a.rays_ == b.rays_ && a.cones_ == b.cones_;
}

std::vector<int> BarycentricResult::support() const {
  std::vector<int> s;
  for (std::size_t j = 0; j < rays.size(); ++j)
    if (lambdas(static_cast<Eigen::Index>(j)) > 0) s.push_back(rays[j]);
  std::sort(s.begin(), s.end());
  return s;
}

Fan orthant_fan(int n) {
  check_dim(n);
  std::vector<LatticeVec> rays;
  ConeRays cone;
  for (int i = 0; i < n; ++i) {
    rays.push_back(unit_vector(n, i));
    cone.push_back(i);
  }
  return Fan(n, std::move(rays), {cone});
}

namespace {

bool all_nonnegative(const LatticeVec& x) { return is_nonnegative(x); }

RationalVec to_lambdas(const LatticeVec& x, const Integer& det) {
  RationalVec l(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) l(j) = Rational(x(j), det);
  return l;
}

}  // namespace

BarycentricResult locate(const Fan& f, const LatticeVec& v) {
  if (v.size() != f.dim()) throw PreconditionError("query vector has the wrong dimension");
  if (is_zero(v)) throw PreconditionError("cannot locate the zero vector");
  if (!is_nonnegative(v)) throw PreconditionError("query vector lies outside the positive orthant");
  const auto& idx = *f.index_;
  const std::size_t ncones = f.cones().size();

  std::optional<std::size_t> found;
  WalkRng rng;
  std::size_t c = 0;
  if (ncones > 32) {
    // Start the walk from the closest of about sqrt(ncones) sampled cones.
    const auto u = unit_direction(v);
    const std::size_t stride = static_cast<std::size_t>(std::sqrt(static_cast<double>(ncones)));
    double best = -2;
    for (std::size_t k = 0; k < ncones; k += stride) {
      double dot = 0;
      for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * idx.centre[k][i];
      if (dot > best) {
        best = dot;
        c = k;
      }
    }
  }
  const std::size_t max_steps = 4 * ncones + 64;
  const auto sv = detail::make_small(v);
  for (std::size_t step = 0; step < max_steps; ++step) {
    const auto sign = detail::product_signs(idx.adj[c], idx.small_adj[c], v, sv);
    std::vector<std::size_t> exits;
    bool inside = true;
    for (std::size_t j = 0; j < static_cast<std::size_t>(f.dim()); ++j) {
      if (sign[j] >= 0) continue;
      inside = false;
      if (idx.neighbors[c][j] >= 0) exits.push_back(j);
    }
    if (exits.empty()) {
      if (inside) found = c;
      break;
    }
    c = static_cast<std::size_t>(idx.neighbors[c][exits[rng.pick(exits.size())]]);
  }
  if (!found) {
    for (std::size_t k = 0; k < ncones && !found; ++k)
      if (all_nonnegative(LatticeVec(idx.adj[k] * v))) found = k;
  }
  if (!found) throw InvariantError("fan invariant violation: no maximal cone contains the query vector");

  const LatticeVec x = idx.adj[*found] * v;
  std::vector<int> support;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (x(j) > 0) support.push_back(f.cones()[*found][static_cast<std::size_t>(j)]);
  std::sort(support.begin(), support.end());
  const std::size_t best = f.cones_containing(support).front();
  const LatticeVec xb = idx.adj[best] * v;
  if (!all_nonnegative(xb)) throw InvariantError("fan invariant violation: inconsistent face incidence");
  return BarycentricResult{best, f.cones()[best], to_lambdas(xb, idx.det[best])};
}

bool is_smooth(const Fan& f) {
  for (std::size_t c = 0; c < f.cones().size(); ++c)
    if (abs(f.determinant(c)) != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Mutable builder used by the subdivision operations.

class FanBuilder {
 public:
  explicit FanBuilder(const Fan& f) : n_(f.dim()), rays_(f.rays()) {
    const auto& idx = *f.index_;
    lookup_ = idx.ray_lookup;
    incidence_.resize(rays_.size());
    for (std::size_t c = 0; c < f.cones().size(); ++c) insert(f.cones()[c], idx.adj[c], idx.det[c]);
  }

  int dim() const { return n_; }
  const std::vector<LatticeVec>& rays() const { return rays_; }

  int add_ray(const LatticeVec& r) {
    auto [it, inserted] = lookup_.emplace(r, static_cast<int>(rays_.size()));
    if (inserted) {
      rays_.push_back(r);
      incidence_.emplace_back();
    }
    return it->second;
  }

  std::optional<int> ray_index(const LatticeVec& r) const {
    auto it = lookup_.find(r);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  void add_cone(const ConeRays& rays) {
    auto [adj, det] = positive_adjugate(columns(rays_, rays));
    if (det == 0) throw InvariantError("subdivision produced a degenerate cone");
    insert(rays, std::move(adj), std::move(det));
  }

  void kill(std::size_t c) {
    cones_[c].alive = false;
    for (std::size_t j = 0; j < cones_[c].rays.size(); ++j) {
      auto& owners = facets_[facet_key(cones_[c].rays, j)];
      owners.erase(std::remove(owners.begin(), owners.end(), c), owners.end());
    }
  }

  // Cone containing v (closed) and det * barycentric coordinates.
  std::pair<std::size_t, LatticeVec> locate(const LatticeVec& v) {
    WalkRng rng;
    std::size_t c = hint_;
    if (c >= cones_.size() || !cones_[c].alive) c = first_alive();
    if (cones_.size() > 32) {
      const auto u = unit_direction(v);
      auto score = [&](std::size_t k) {
        double dot = 0;
        for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * cones_[k].centre[i];
        return dot;
      };
      double best = score(c);
      const std::size_t stride = static_cast<std::size_t>(std::sqrt(static_cast<double>(cones_.size())));
      for (std::size_t k = 0; k < cones_.size(); k += stride) {
        if (!cones_[k].alive) continue;
        const double s = score(k);
        if (s > best) {
          best = s;
          c = k;
        }
      }
    }
    const std::size_t max_steps = 4 * cones_.size() + 64;
    const auto sv = detail::make_small(v);
    for (std::size_t step = 0; step < max_steps; ++step) {
      const auto sign = detail::product_signs(cones_[c].adj, cones_[c].small, v, sv);
      std::vector<std::size_t> exit_targets;
      bool inside = true;
      for (std::size_t j = 0; j < static_cast<std::size_t>(n_); ++j) {
        if (sign[j] >= 0) continue;
        inside = false;
        const auto& owners = facets_[facet_key(cones_[c].rays, j)];
        for (auto o : owners)
          if (o != c) exit_targets.push_back(o);
      }
      if (exit_targets.empty()) {
        if (inside) {
          hint_ = c;
          return {c, LatticeVec(cones_[c].adj * v)};
        }
        break;
      }
      c = exit_targets[rng.pick(exit_targets.size())];
    }
    for (std::size_t k = 0; k < cones_.size(); ++k) {
      if (!cones_[k].alive) continue;
      LatticeVec x = cones_[k].adj * v;
      if (all_nonnegative(x)) return {k, std::move(x)};
    }
    throw InvariantError("fan invariant violation: no maximal cone contains the query vector");
  }

  // Alive cones containing every listed ray.
  std::vector<std::size_t> cones_containing(const std::vector<int>& rays) const {
    std::vector<std::size_t> out;
    for (auto c : incidence_[rays.front()]) {
      if (!cones_[c].alive) continue;
      const auto& cr = cones_[c].rays;
      bool ok = true;
      for (int r : rays)
        if (std::find(cr.begin(), cr.end(), r) == cr.end()) ok = false;
      if (ok) out.push_back(c);
    }
    return out;
  }

  bool star(const LatticeVec& r) {
    if (lookup_.count(r)) return false;
    auto [c, x] = locate(r);
    std::vector<int> support;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      if (x(j) > 0) support.push_back(cones_[c].rays[static_cast<std::size_t>(j)]);
    const auto owners = cones_containing(support);
    const int ri = add_ray(r);
    for (auto d : owners) {
      const ConeRays base = cones_[d].rays;
      const LatticeVec xd = cones_[d].adj * r;
      kill(d);
      for (Eigen::Index j = 0; j < xd.size(); ++j) {
        if (xd(j) < 0) throw InvariantError("star subdivision: point lies outside a cone containing its face");
        if (xd(j) == 0) continue;
        ConeRays nc = base;
        nc[static_cast<std::size_t>(j)] = ri;
        add_cone(nc);
      }
    }
    return true;
  }

  LatticeVec pivot(std::size_t c) const {
    const auto& cone = cones_[c];
    const Integer& d = cone.det;
    const Matrix<Integer> g = columns(rays_, cone.rays);
    // Cosets of Z^n modulo the cone lattice, represented by adj * p mod d.
    auto reduce = [&](LatticeVec t) {
      for (Eigen::Index i = 0; i < t.size(); ++i) {
        t(i) %= d;
        if (t(i) < 0) t(i) += d;
      }
      return t;
    };
    std::set<LatticeVec, LexLess> seen;
    std::vector<LatticeVec> frontier{LatticeVec::Constant(n_, Integer(0))};
    seen.insert(frontier.front());
    std::optional<LatticeVec> best;
    while (!frontier.empty()) {
      std::vector<LatticeVec> next;
      for (const auto& t : frontier) {
        if (!is_zero(t)) {
          LatticeVec p = g * t;
          for (Eigen::Index i = 0; i < p.size(); ++i) p(i) /= d;
          if (!best || lex_compare(p, *best) < 0) best = p;
        }
        for (Eigen::Index k = 0; k < n_; ++k) {
          LatticeVec u = reduce(LatticeVec(t + cone.adj.col(k)));
          if (seen.insert(u).second) next.push_back(std::move(u));
        }
      }
      frontier = std::move(next);
    }
    if (!best) throw InvariantError("non-smooth cone has an empty fundamental parallelepiped");
    return *best;
  }

  void resolve() {
    for (std::size_t c = 0; c < cones_.size(); ++c) {
      if (!cones_[c].alive || cones_[c].det == 1) continue;
      if (!star(pivot(c))) throw InvariantError("resolution pivot is already a ray");
      if (cones_[c].alive) throw InvariantError("resolution step did not subdivide the cone");
    }
  }

  std::vector<std::size_t> alive_cones() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cones_.size(); ++c)
      if (cones_[c].alive) out.push_back(c);
    return out;
  }

  const ConeRays& cone_rays(std::size_t c) const { return cones_[c].rays; }
  const Matrix<Integer>& cone_adj(std::size_t c) const { return cones_[c].adj; }

  // Rays no longer used by any cone are dropped; the rest keep their order.
  Fan build() const {
    std::vector<int> remap(rays_.size(), -1);
    for (const auto& c : cones_)
      if (c.alive)
        for (int r : c.rays) remap[r] = 0;
    std::vector<LatticeVec> rays;
    for (std::size_t r = 0; r < rays_.size(); ++r) {
      if (remap[r] < 0) continue;
      remap[r] = static_cast<int>(rays.size());
      rays.push_back(rays_[r]);
    }
    std::vector<ConeRays> out;
    for (const auto& c : cones_) {
      if (!c.alive) continue;
      ConeRays cr;
      for (int r : c.rays) cr.push_back(remap[r]);
      out.push_back(std::move(cr));
    }
    return Fan(n_, std::move(rays), std::move(out));
  }

 private:
  struct Entry {
    ConeRays rays;
    Matrix<Integer> adj;
    Integer det;
    bool alive;
    detail::SmallMatrix small;
    std::vector<double> centre;
  };

  void insert(const ConeRays& rays, Matrix<Integer> adj, Integer det) {
    const std::size_t id = cones_.size();
    detail::SmallMatrix small = detail::make_small(adj);
    std::vector<double> centre(static_cast<std::size_t>(n_), 0.0);
    for (int r : rays) {
      const auto u = unit_direction(rays_[r]);
      for (int i = 0; i < n_; ++i) centre[i] += u[i];
    }
    cones_.push_back(Entry{rays, std::move(adj), std::move(det), true, small, normalized(std::move(centre))});
    for (int r : rays) incidence_[r].push_back(id);
    for (std::size_t j = 0; j < rays.size(); ++j) facets_[facet_key(rays, j)].push_back(id);
  }

  std::size_t first_alive() const {
    for (std::size_t c = 0; c < cones_.size(); ++c)
      if (cones_[c].alive) return c;
    throw InvariantError("fan has no maximal cones");
  }

  int n_;
  std::vector<LatticeVec> rays_;
  std::map<LatticeVec, int, LexLess> lookup_;
  std::vector<Entry> cones_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::map<ConeRays, std::vector<std::size_t>> facets_;
  std::size_t hint_ = 0;
};

namespace {

LatticeVec checked_primitive(const LatticeVec& r, int n) {
  check_orthant_vector(r, n, "subdivision vector");
  return primitive_part(r);
}

}  // namespace

Fan star_subdivide(const Fan& f, const LatticeVec& r) {
  const LatticeVec p = checked_primitive(r, f.dim());
  if (f.ray_index(p)) return f;
  FanBuilder b(f);
  b.star(p);
  return b.build();
}

Fan resolve(const Fan& f) {
  if (is_smooth(f)) return f;
  FanBuilder b(f);
  b.resolve();
  return b.build();
}

Fan ensure_rays(const Fan& f, const std::vector<LatticeVec>& vs) {
  FanBuilder b(f);
  for (const auto& v : vs) b.star(checked_primitive(v, f.dim()));
  b.resolve();
  return b.build();
}

namespace {

struct Piece {
  std::vector<int> rays;
  std::vector<LatticeVec> normals;
};

// The part of a piece on the side h . x >= 0; nullopt when that part is not
// full-dimensional.
std::optional<Piece> clip(FanBuilder& b, const Piece& piece, const LatticeVec& h) {
  const int n = b.dim();
  std::vector<Integer> val;
  bool neg = false;
  for (int r : piece.rays) {
    val.push_back(h.dot(b.rays()[r]));
    if (val.back() < 0) neg = true;
  }
  if (!neg) return piece;

  Piece out;
  out.normals = piece.normals;
  out.normals.push_back(h);
  for (std::size_t a = 0; a < piece.rays.size(); ++a) {
    if (val[a] < 0) continue;
    out.rays.push_back(piece.rays[a]);
    if (val[a] == 0) continue;
    for (std::size_t c = 0; c < piece.rays.size(); ++c) {
      if (val[c] >= 0) continue;
      const LatticeVec& ra = b.rays()[piece.rays[a]];
      const LatticeVec& rc = b.rays()[piece.rays[c]];
      std::vector<LatticeVec> tight;
      for (const auto& nv : piece.normals)
        if (nv.dot(ra) == 0 && nv.dot(rc) == 0) tight.push_back(nv);
      std::vector<int> ids(tight.size());
      for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
      if (point_rank(tight, ids) != n - 2) continue;
      out.rays.push_back(b.add_ray(primitive_part(LatticeVec(val[a] * rc - val[c] * ra))));
    }
  }
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  if (point_rank(b.rays(), out.rays) != n) return std::nullopt;
  return out;
}

}  // namespace

Fan refine_for_star(const Fan& fine, const Fan& base, const LatticeVec& r) {
  if (fine.dim() != base.dim()) throw PreconditionError("fans have different dimensions");
  const int n = fine.dim();
  const LatticeVec sigma = checked_primitive(r, n);

  // Inside a base cone with sigma = sum mu_i g_i, the star subdivision has one
  // cone per k in supp(mu): {x : x_k / mu_k <= x_i / mu_i for i in supp(mu)}.
  std::vector<std::vector<std::vector<LatticeVec>>> star_cones(base.cones().size());
  for (std::size_t c = 0; c < base.cones().size(); ++c) {
    auto [adj, det] = positive_adjugate(base.generators(c));
    const LatticeVec mu = adj * sigma;
    if (!all_nonnegative(mu)) continue;
    std::vector<Eigen::Index> supp;
    for (Eigen::Index i = 0; i < n; ++i)
      if (mu(i) != 0) supp.push_back(i);
    if (supp.size() < 2) continue;
    for (auto k : supp) {
      std::vector<LatticeVec> ineqs;
      for (auto i : supp)
        if (i != k)
          ineqs.push_back(primitive_part(LatticeVec(mu(k) * adj.row(i).transpose() - mu(i) * adj.row(k).transpose())));
      star_cones[c].push_back(std::move(ineqs));
    }
  }

  FanBuilder b(fine);
  for (std::size_t d : b.alive_cones()) {
    const ConeRays cone = b.cone_rays(d);
    LatticeVec interior = LatticeVec::Constant(n, Integer(0));
    for (int ri : cone) interior += b.rays()[ri];
    const std::size_t c = locate(base, interior).cone;
    if (star_cones[c].empty()) continue;
    Piece start;
    start.rays = sorted_copy(cone);
    for (Eigen::Index i = 0; i < n; ++i) start.normals.push_back(b.cone_adj(d).row(i).transpose());
    std::vector<Piece> pieces;
    for (const auto& ineqs : star_cones[c]) {
      std::optional<Piece> p = start;
      for (const auto& h : ineqs) {
        p = clip(b, *p, h);
        if (!p) break;
      }
      if (p) pieces.push_back(std::move(*p));
    }
    if (pieces.size() == 1 && pieces.front().rays == start.rays) continue;
    b.kill(d);
    for (const auto& p : pieces)
      for (const auto& simplex : pulling_triangulation(b.rays(), p.rays, p.normals)) b.add_cone(simplex);
  }
  return b.build();
}

bool refines(const Fan& fine, const Fan& coarse) {
  if (fine.dim() != coarse.dim()) return false;
  for (std::size_t d = 0; d < fine.cones().size(); ++d) {
    LatticeVec interior = LatticeVec::Constant(fine.dim(), Integer(0));
    for (int ri : fine.cones()[d]) interior += fine.rays()[ri];
    const auto loc = locate(coarse, interior);
    auto [adj, det] = positive_adjugate(coarse.generators(loc.cone));
    for (int ri : fine.cones()[d])
      if (!all_nonnegative(LatticeVec(adj * fine.rays()[ri]))) return false;
  }
  return true;
}

}  // namespace bvtk

#pragma once

// Brute-force face lattices of small V-polytopes, Minkowski sums of
// V-polytopes, and the face-decomposition check for sums.
//
// Facets are found by testing the hyperplane through every affinely
// independent r-subset of points (r = affine dimension), in coordinates of
// the affine hull. Every nonempty face is an intersection of facets, so the
// lattice is the closure of the facet set under intersection.

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "facetkit/linalg.hpp"
#include "facetkit/random.hpp"

namespace facetkit::oracle {

inline constexpr std::size_t kMaxPoints = 256;
using IndexSet = std::bitset<kMaxPoints>;

struct LatticeLimits {
  int max_dim = 5;
  std::size_t max_points = 24;
  double max_subsets = 5e6;
};

/// Desk-scale guard for user-supplied polytopes.
inline constexpr LatticeLimits kDeskLimits{5, 24, 5e6};
/// Guard for pairwise-sum clouds built internally.
inline constexpr LatticeLimits kCloudLimits{5, kMaxPoints, 5e6};

class SizeGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecompositionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Face {
  std::vector<int> points;  // indices into FaceLattice::points
  int dim = 0;
  Vec normal;               // exposing direction (ambient); zero for the whole polytope
};

struct Facet {
  Vec normal;   // unit, ambient, orthogonal to the affine hull
  double offset = 0.0;
  std::vector<int> points;
};

struct FaceLattice {
  std::vector<Vec> points;              // deduplicated input
  std::vector<int> point_of_input;      // input index -> points index
  std::vector<Face> faces;              // sorted by (dim, points)
  std::vector<Facet> facets;
  Vec hull_origin;                      // affine hull = origin + span(hull_directions)
  Mat hull_directions;
  int dim = 0;
  bool near_degenerate = false;

  std::set<int> dims() const {
    std::set<int> out;
    for (const auto& f : faces) out.insert(f.dim);
    return out;
  }

  std::map<int, int> counts_by_dim() const {
    std::map<int, int> out;
    for (const auto& f : faces) ++out[f.dim];
    return out;
  }

  std::vector<int> extreme_points() const {
    std::vector<int> out;
    for (const auto& f : faces)
      if (f.points.size() == 1) out.push_back(f.points.front());
    return out;
  }

  const Face* find(const std::vector<int>& pts) const {
    for (const auto& f : faces)
      if (f.points == pts) return &f;
    return nullptr;
  }

  const Face& whole() const { return faces.back(); }
};

namespace detail {

inline std::vector<int> to_indices(const IndexSet& s, std::size_t n) {
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i)
    if (s.test(i)) out.push_back(static_cast<int>(i));
  return out;
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Unit normal of the hyperplane through r points in R^r, or empty if the
// points are affinely dependent.
inline Vec hyperplane_normal(const std::vector<const Vec*>& pts, Eigen::Index r) {
  if (r == 1) return Vec::Ones(1);
  Mat d(r - 1, r);
  for (Eigen::Index i = 1; i < r; ++i) d.row(i - 1) = (*pts[static_cast<std::size_t>(i)] - *pts[0]).transpose();
  Eigen::JacobiSVD<Mat> svd(d, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s(0));
  if (s(r - 2) <= tol::rank * scale) return Vec();
  return svd.matrixV().col(r - 1);
}

template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct IndexSetHash {
  std::size_t operator()(const IndexSet& s) const { return std::hash<IndexSet>{}(s); }
};

} // namespace detail

/// Exact face lattice of conv(vertices). Throws SizeGuardExceeded when the
/// affine dimension, point count or hyperplane-candidate count exceeds
/// `limits`.
inline FaceLattice face_lattice(std::span<const Vec> vertices, LatticeLimits limits = kDeskLimits) {
  require(!vertices.empty(), "face_lattice: empty vertex list");
  const Eigen::Index ambient = vertices.front().size();
  for (const auto& v : vertices) require(v.size() == ambient, "face_lattice: mixed dimensions");

  FaceLattice lat;
  lat.points = dedupe_points(vertices);
  {
    const double scale = std::max(1.0, max_abs_coord(vertices));
    for (const auto& v : vertices) {
      int idx = 0;
      for (std::size_t j = 0; j < lat.points.size(); ++j)
        if ((v - lat.points[j]).norm() <= tol::point * scale) {
          idx = static_cast<int>(j);
          break;
        }
      lat.point_of_input.push_back(idx);
    }
  }
  const std::size_t n = lat.points.size();
  if (n > limits.max_points || n > kMaxPoints)
    throw SizeGuardExceeded("face_lattice: " + std::to_string(n) + " points exceeds guard of " +
                            std::to_string(limits.max_points));

  lat.hull_origin = lat.points.front();
  lat.hull_directions = affine_directions(lat.points);
  const Eigen::Index r = lat.hull_directions.cols();
  lat.dim = static_cast<int>(r);
  if (r > limits.max_dim)
    throw SizeGuardExceeded("face_lattice: affine dimension " + std::to_string(r) + " exceeds guard of " +
                            std::to_string(limits.max_dim));
  if (detail::binomial(n, static_cast<std::size_t>(r)) > limits.max_subsets)
    throw SizeGuardExceeded("face_lattice: too many hyperplane candidates");

  IndexSet all;
  for (std::size_t i = 0; i < n; ++i) all.set(i);

  if (r == 0) {
    lat.faces.push_back({{0}, 0, Vec::Zero(ambient)});
    return lat;
  }

  // Local coordinates in the affine hull.
  std::vector<Vec> local;
  local.reserve(n);
  for (const auto& p : lat.points) local.push_back(lat.hull_directions.transpose() * (p - lat.hull_origin));
  const double scale = std::max(1.0, max_abs_coord(local));
  const double band = tol::face * scale;

  std::unordered_map<IndexSet, Vec, detail::IndexSetHash> facet_normals;
  std::vector<IndexSet> facet_order;
  std::vector<const Vec*> chosen(static_cast<std::size_t>(r));
  std::vector<double> s(n);

  detail::for_each_subset(n, static_cast<std::size_t>(r), [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) chosen[i] = &local[idx[i]];
    Vec normal = detail::hyperplane_normal(chosen, r);
    if (normal.size() == 0) return;
    const double off = normal.dot(*chosen[0]);
    bool below = true, above = true;
    for (std::size_t j = 0; j < n; ++j) {
      s[j] = normal.dot(local[j]) - off;
      below = below && s[j] <= band;
      above = above && s[j] >= -band;
    }
    if (!below && !above) return;
    if (!below) normal = -normal;
    IndexSet set;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs(s[j]);
      if (a <= band) set.set(j);
      else if (a <= 10.0 * band) lat.near_degenerate = true;
    }
    if (facet_normals.emplace(set, normal).second) facet_order.push_back(set);
  });

  for (const auto& set : facet_order) {
    const Vec& nl = facet_normals.at(set);
    Facet f;
    f.normal = lat.hull_directions * nl;
    f.points = detail::to_indices(set, n);
    f.offset = f.normal.dot(lat.points[static_cast<std::size_t>(f.points.front())]);
    lat.facets.push_back(std::move(f));
  }

  // Closure under intersection.
  std::unordered_set<IndexSet, detail::IndexSetHash> seen;
  std::vector<IndexSet> faces;
  auto add = [&](const IndexSet& f) {
    if (f.none() || !seen.insert(f).second) return;
    faces.push_back(f);
  };
  add(all);
  for (const auto& f : facet_order) add(f);
  for (std::size_t i = 1; i < faces.size(); ++i)
    for (const auto& g : facet_order) add(faces[i] & g);

  for (const auto& set : faces) {
    Face face;
    face.points = detail::to_indices(set, n);
    std::vector<Vec> pts;
    for (int i : face.points) pts.push_back(lat.points[static_cast<std::size_t>(i)]);
    face.dim = affine_rank(pts);
    face.normal = Vec::Zero(ambient);
    if (set != all)
      for (std::size_t k = 0; k < facet_order.size(); ++k)
        if ((set & ~facet_order[k]).none()) face.normal += lat.facets[k].normal;
    lat.faces.push_back(std::move(face));
  }
  std::sort(lat.faces.begin(), lat.faces.end(), [](const Face& a, const Face& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.points < b.points;
  });
  return lat;
}

/// Vertices of P + Q: the extreme points of the pairwise-sum cloud.
inline std::vector<Vec> minkowski_sum(std::span<const Vec> p, std::span<const Vec> q) {
  require(!p.empty() && !q.empty(), "minkowski_sum: empty operand");
  require(p.front().size() == q.front().size(), "minkowski_sum: ambient dimensions differ");
  if (p.size() * q.size() > kMaxPoints)
    throw SizeGuardExceeded("minkowski_sum: |P|*|Q| = " + std::to_string(p.size() * q.size()) +
                            " exceeds guard of " + std::to_string(kMaxPoints));
  std::vector<Vec> cloud;
  for (const auto& a : p)
    for (const auto& b : q) cloud.push_back(a + b);
  const auto lat = face_lattice(cloud, kCloudLimits);
  std::vector<Vec> out;
  for (int i : lat.extreme_points()) out.push_back(lat.points[static_cast<std::size_t>(i)]);
  return out;
}

struct Decomposition {
  std::vector<int> face;    // indices into Lemma1Report::sum.points
  int dim = 0;
  std::vector<int> face_p;  // indices into Lemma1Report::p.points
  std::vector<int> face_q;  // indices into Lemma1Report::q.points
  double hull_residual = 0.0;
};

struct Lemma1Report {
  FaceLattice p, q, sum;
  std::vector<Decomposition> decompositions;
  double max_residual = 0.0;
};

/// Decomposes every face F of P + Q as F_P + F_Q with
///   F_P = { p in P : p + q in F for some q in Q },  F_Q symmetric,
/// checks F_P and F_Q against the lattices of P and Q, and checks that the
/// pairwise sums F_P + F_Q recover F exactly. Throws DecompositionFailure
/// on any mismatch.
inline Lemma1Report check_lemma1(std::span<const Vec> p_in, std::span<const Vec> q_in,
                                 LatticeLimits limits = kDeskLimits) {
  require(!p_in.empty() && !q_in.empty(), "check_lemma1: empty operand");
  require(p_in.front().size() == q_in.front().size(), "check_lemma1: ambient dimensions differ");
  Lemma1Report rep;
  rep.p = face_lattice(p_in, limits);
  rep.q = face_lattice(q_in, limits);
  const auto& pv = rep.p.points;
  const auto& qv = rep.q.points;
  if (pv.size() * qv.size() > kMaxPoints) throw SizeGuardExceeded("check_lemma1: sum cloud too large");

  std::vector<Vec> cloud;
  for (const auto& a : pv)
    for (const auto& b : qv) cloud.push_back(a + b);
  rep.sum = face_lattice(cloud, kCloudLimits);
  const auto pair_point = [&](std::size_t i, std::size_t j) {
    return rep.sum.point_of_input[i * qv.size() + j];
  };
  const double scale = std::max(1.0, max_abs_coord(rep.sum.points));

  for (const auto& face : rep.sum.faces) {
    std::set<int> in_face(face.points.begin(), face.points.end());
    std::set<int> fp, fq;
    for (std::size_t i = 0; i < pv.size(); ++i)
      for (std::size_t j = 0; j < qv.size(); ++j)
        if (in_face.count(pair_point(i, j))) {
          fp.insert(static_cast<int>(i));
          fq.insert(static_cast<int>(j));
        }
    Decomposition d;
    d.face = face.points;
    d.dim = face.dim;
    d.face_p.assign(fp.begin(), fp.end());
    d.face_q.assign(fq.begin(), fq.end());

    if (!rep.p.find(d.face_p))
      throw DecompositionFailure("check_lemma1: F_P is not a face of P");
    if (!rep.q.find(d.face_q))
      throw DecompositionFailure("check_lemma1: F_Q is not a face of Q");

    std::set<int> recovered;
    const double u_norm = face.normal.norm();
    const double h = u_norm > 0 ? face.normal.dot(rep.sum.points[static_cast<std::size_t>(face.points.front())]) : 0.0;
    for (int i : d.face_p)
      for (int j : d.face_q) {
        const auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
        recovered.insert(pair_point(ii, jj));
        if (u_norm > 0) {
          const double res = std::abs(face.normal.dot(pv[ii] + qv[jj]) - h) / (u_norm * scale);
          d.hull_residual = std::max(d.hull_residual, res);
        }
      }
    if (recovered != in_face)
      throw DecompositionFailure("check_lemma1: F_P + F_Q does not reproduce F");
    if (d.hull_residual > 1e-9)
      throw DecompositionFailure("check_lemma1: hull residual " + std::to_string(d.hull_residual));
    rep.max_residual = std::max(rep.max_residual, d.hull_residual);
    rep.decompositions.push_back(std::move(d));
  }
  return rep;
}

struct PolytopePair {
  std::vector<Vec> p, q;
  int redraws = 0;
};

/// Random pair of polytopes for the decomposition suite: each has between
/// dim+1 and max_vertices Gaussian points. Instances whose lattices come
/// within 10 * tol::face of a non-incident hyperplane are redrawn.
inline PolytopePair random_polytope_pair(std::uint64_t seed, int dim, int max_vertices) {
  require(dim >= 1 && max_vertices >= dim + 1, "random_polytope_pair: need max_vertices > dim");
  PolytopePair out;
  for (std::uint64_t attempt = 0;; ++attempt) {
    CounterRng rng(seed, 0x4C454D4DULL + attempt);
    auto draw = [&] {
      const auto span = static_cast<std::uint64_t>(max_vertices - dim);
      const int count = dim + 1 + static_cast<int>(rng.below(span));
      std::vector<Vec> pts;
      for (int i = 0; i < count; ++i) pts.push_back(rng.gaussian_vector(dim));
      return pts;
    };
    out.p = draw();
    out.q = draw();
    out.redraws = static_cast<int>(attempt);
    const auto lp = face_lattice(out.p, kCloudLimits);
    const auto lq = face_lattice(out.q, kCloudLimits);
    if (lp.near_degenerate || lq.near_degenerate) continue;
    std::vector<Vec> cloud;
    for (const auto& a : lp.points)
      for (const auto& b : lq.points) cloud.push_back(a + b);
    if (face_lattice(cloud, kCloudLimits).near_degenerate) continue;
    return out;
  }
}

} // namespace facetkit::oracle

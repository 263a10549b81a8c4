#pragma once

// Spherical fractals whose convex hulls have fractal extreme-point sets:
// an Apollonian packing of caps on S^2 (the extreme points of the hull are
// the residual set left after removing every open cap) and a Sierpinski
// triangle centrally projected onto S^2. Box counting estimates the
// dimension of point samples of either.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "facetkit/linalg.hpp"
#include "facetkit/random.hpp"

namespace facetkit::fractal {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

/// Open spherical cap { x in S^2 : <normal, x> > offset }.
struct Cap {
  Vec3 normal;
  double offset = 0.0;

  double angular_radius() const { return std::atan2(std::sqrt((1.0 - offset) * (1.0 + offset)), offset); }
  double area() const { return 2.0 * std::numbers::pi * (1.0 - offset); }
  bool contains(const Vec3& x) const { return normal.dot(x) > offset; }
};

inline double angular_distance(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

/// Circle in the stereographic chart; negative curvature marks the circle
/// whose exterior is the cap (the cap containing the projection pole).
struct PlanarCircle {
  Complex center;
  double curvature = 1.0;

  double radius() const { return 1.0 / std::abs(curvature); }
};

/// Stereographic chart from the north pole of a rotated frame: a sphere
/// point x is first rotated to x' = R x, then sent to (x'_0, x'_1) / (1 - x'_2).
class StereoChart {
 public:
  /// Chart whose projection pole is `pole` (unit).
  explicit StereoChart(const Vec3& pole) {
    const Vec3 p = pole.normalized();
    Vec3 helper = std::abs(p.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = (helper - helper.dot(p) * p).normalized();
    const Vec3 e2 = p.cross(e1);
    rot_.row(0) = e1.transpose();
    rot_.row(1) = e2.transpose();
    rot_.row(2) = p.transpose();
  }

  Complex to_plane(const Vec3& x) const {
    const Vec3 y = rot_ * x;
    return Complex(y.x(), y.y()) / (1.0 - y.z());
  }

  Vec3 to_sphere(Complex w) const {
    const double r2 = std::norm(w);
    const Vec3 y(2.0 * w.real(), 2.0 * w.imag(), r2 - 1.0);
    return rot_.transpose() * (y / (r2 + 1.0));
  }

  /// Image of a cap boundary; the cap must not pass through the pole.
  PlanarCircle to_circle(const Cap& cap) const {
    const Vec3 n = rot_ * cap.normal;
    const double lambda = n.z() - cap.offset;
    if (std::abs(lambda) < 1e-14) throw std::invalid_argument("StereoChart: cap boundary passes through the pole");
    const Complex z(-n.x() / lambda, -n.y() / lambda);
    const double rho2 = 1.0 + std::norm(z) + 2.0 * cap.offset / lambda;
    const double rho = std::sqrt(rho2);
    return {z, (lambda > 0 ? -1.0 : 1.0) / rho};
  }

  /// Cap whose boundary maps to `c` and whose interior maps to the disk
  /// (curvature > 0) or to the exterior (curvature < 0).
  Cap to_cap(const PlanarCircle& c) const {
    const double rho = c.radius();
    const double z2 = std::norm(c.center);
    const Vec3 m(-c.center.real(), -c.center.imag(), 0.5 * (1.0 - z2 + rho * rho));
    const double lambda = (c.curvature > 0 ? -1.0 : 1.0) / m.norm();
    Cap cap;
    cap.normal = rot_.transpose() * (lambda * m);
    cap.offset = -lambda * 0.5 * (1.0 + z2 - rho * rho);
    return cap;
  }

  const Mat3& rotation() const { return rot_; }

 private:
  Mat3 rot_;
};

/// Descartes quadruple residual |(sum k)^2 - 2 sum k^2| / (sum |k|)^2.
inline double descartes_residual(const std::array<double, 4>& k) {
  double s = 0, s2 = 0, a = 0;
  for (double x : k) {
    s += x;
    s2 += x * x;
    a += std::abs(x);
  }
  return std::abs(s * s - 2.0 * s2) / (a * a);
}

/// Complex Descartes residual on the curvature-weighted centers k*z.
inline double complex_descartes_residual(const std::array<PlanarCircle, 4>& c) {
  Complex s = 0, s2 = 0;
  double a = 0;
  for (const auto& x : c) {
    const Complex kz = x.curvature * x.center;
    s += kz;
    s2 += kz * kz;
    a += std::abs(kz) + std::abs(x.curvature);
  }
  return std::abs(s * s - 2.0 * s2) / (a * a);
}

struct CapPacking {
  std::vector<Cap> caps;
  std::vector<PlanarCircle> circles;          // chart images, parallel to caps
  std::vector<int> generation;                // 0 for the tetrahedral caps
  std::vector<std::array<int, 2>> tangencies; // index pairs known to be tangent
  int generation_depth = 0;
  double max_descartes_residual = 0.0;
  Vec3 pole;

  std::size_t size() const { return caps.size(); }

  double covered_area() const {
    double a = 0.0;
    for (const auto& c : caps) a += c.area();
    return a;
  }

  /// 1 - (total cap area) / 4 pi: the fraction of the sphere left over.
  double residual_fraction() const { return 1.0 - covered_area() / (4.0 * std::numbers::pi); }
};

inline constexpr int kMaxPackingDepth = 12;

/// Caps cut from the unit sphere by the face planes of the regular
/// tetrahedron with vertices (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1). Its
/// edges touch the sphere at (+-1,0,0), (0,+-1,0), (0,0,+-1), so the four
/// boundary circles are pairwise tangent.
inline std::array<Cap, 4> tetrahedral_caps() {
  const double s = 1.0 / std::sqrt(3.0);
  const std::array<Vec3, 4> verts = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  std::array<Cap, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = {(-verts[i]).normalized(), s};
  return out;
}

/// Apollonian cap packing through `depth` generations. Generation 0 is the
/// tetrahedral configuration; each later generation places one cap in every
/// curvilinear triangular gap, using the Descartes reflection
///   k' = 2 (k1 + k2 + k3) - k4,   k'z' = 2 (k1 z1 + k2 z2 + k3 z3) - k4 z4
/// in a stereographic chart whose pole is the center of cap 0.
inline CapPacking apollonian_packing(int depth) {
  require(depth >= 0 && depth <= kMaxPackingDepth,
          "apollonian_packing: depth must be in [0, " + std::to_string(kMaxPackingDepth) + "]");
  CapPacking pk;
  pk.generation_depth = depth;
  const auto start = tetrahedral_caps();
  pk.pole = start[0].normal;
  const StereoChart chart(pk.pole);
  for (int i = 0; i < 4; ++i) {
    pk.caps.push_back(start[static_cast<std::size_t>(i)]);
    pk.circles.push_back(chart.to_circle(start[static_cast<std::size_t>(i)]));
    pk.generation.push_back(0);
    for (int j = 0; j < i; ++j) pk.tangencies.push_back({j, i});
  }

  struct Gap {
    std::array<int, 3> sides;
    int opposite;
  };
  std::vector<Gap> gaps = {{{1, 2, 3}, 0}, {{0, 2, 3}, 1}, {{0, 1, 3}, 2}, {{0, 1, 2}, 3}};
  for (int g = 1; g <= depth; ++g) {
    std::vector<Gap> next;
    next.reserve(gaps.size() * 3);
    for (const auto& gap : gaps) {
      const auto& a = pk.circles[static_cast<std::size_t>(gap.sides[0])];
      const auto& b = pk.circles[static_cast<std::size_t>(gap.sides[1])];
      const auto& c = pk.circles[static_cast<std::size_t>(gap.sides[2])];
      const auto& d = pk.circles[static_cast<std::size_t>(gap.opposite)];
      PlanarCircle fresh;
      fresh.curvature = 2.0 * (a.curvature + b.curvature + c.curvature) - d.curvature;
      const Complex kz = 2.0 * (a.curvature * a.center + b.curvature * b.center + c.curvature * c.center) -
                         d.curvature * d.center;
      fresh.center = kz / fresh.curvature;
      pk.max_descartes_residual =
          std::max({pk.max_descartes_residual,
                    descartes_residual({a.curvature, b.curvature, c.curvature, fresh.curvature}),
                    complex_descartes_residual({a, b, c, fresh})});

      const int idx = static_cast<int>(pk.caps.size());
      pk.circles.push_back(fresh);
      pk.caps.push_back(chart.to_cap(fresh));
      pk.generation.push_back(g);
      for (int s : gap.sides) pk.tangencies.push_back({s, idx});
      const auto [p, q, r] = gap.sides;
      next.push_back({{p, q, idx}, r});
      next.push_back({{p, r, idx}, q});
      next.push_back({{q, r, idx}, p});
    }
    gaps = std::move(next);
  }
  return pk;
}

/// Point-location index for caps: each small cap is filed in a hash grid
/// whose cell side is at least the diameter of the cap's chordal bounding
/// ball, so a query inspects one cell per grid level.
class CapIndex {
 public:
  explicit CapIndex(const std::vector<Cap>& caps) : caps_(&caps) {
    for (std::size_t i = 0; i < caps.size(); ++i) {
      const Cap& c = caps[i];
      const double chord = std::sqrt(2.0 * (1.0 - c.offset));
      int level = static_cast<int>(std::floor(-std::log2(std::max(2.0 * chord, 1e-300))));
      level = std::clamp(level, 0, kMaxLevel);
      if (level < kFirstGridLevel) {
        large_.push_back(static_cast<int>(i));
        continue;
      }
      const double cell = std::ldexp(1.0, -level);
      std::array<std::int64_t, 3> lo{}, hi{};
      for (int a = 0; a < 3; ++a) {
        lo[a] = cell_coord(c.normal(a) - chord, cell);
        hi[a] = cell_coord(c.normal(a) + chord, cell);
      }
      for (auto x = lo[0]; x <= hi[0]; ++x)
        for (auto y = lo[1]; y <= hi[1]; ++y)
          for (auto z = lo[2]; z <= hi[2]; ++z) cells_[key(level, x, y, z)].push_back(static_cast<int>(i));
      used_levels_.insert(level);
    }
    std::stable_sort(large_.begin(), large_.end(), [&](int a, int b) {
      return caps[static_cast<std::size_t>(a)].offset < caps[static_cast<std::size_t>(b)].offset;
    });
  }

  /// Index of an open cap containing x, or -1.
  int find(const Vec3& x) const {
    for (int i : large_)
      if ((*caps_)[static_cast<std::size_t>(i)].contains(x)) return i;
    for (int level : used_levels_) {
      const double cell = std::ldexp(1.0, -level);
      const auto it = cells_.find(key(level, cell_coord(x(0), cell), cell_coord(x(1), cell), cell_coord(x(2), cell)));
      if (it == cells_.end()) continue;
      for (int i : it->second)
        if ((*caps_)[static_cast<std::size_t>(i)].contains(x)) return i;
    }
    return -1;
  }

 private:
  static constexpr int kMaxLevel = 40;
  // Caps wider than 1/8 in chord are checked linearly, largest first.
  static constexpr int kFirstGridLevel = 3;

  static std::int64_t cell_coord(double v, double cell) { return static_cast<std::int64_t>(std::floor((v + 2.0) / cell)); }

  static std::uint64_t key(int level, std::int64_t x, std::int64_t y, std::int64_t z) {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(level));
    h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    h = splitmix64(h ^ static_cast<std::uint64_t>(y));
    return splitmix64(h ^ static_cast<std::uint64_t>(z));
  }

  const std::vector<Cap>* caps_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
  std::set<int> used_levels_;
  std::vector<int> large_;
};

struct ResidualSample {
  std::vector<Vec3> points;
  long candidates = 0;

  double acceptance_ratio() const {
    return candidates ? static_cast<double>(points.size()) / static_cast<double>(candidates) : 0.0;
  }
};

/// Uniform sphere points outside every open cap of the packing, by
/// rejection. Candidate i depends only on (seed, i). Throws when the
/// acceptance rate falls below 1e-4.
inline ResidualSample residual_sample(const CapPacking& packing, long n, std::uint64_t seed) {
  require(n >= 1, "residual_sample: n must be positive");
  const CapIndex index(packing.caps);
  ResidualSample out;
  out.points.reserve(static_cast<std::size_t>(n));
  CounterRng rng(seed, 0x52455349ULL);
  while (static_cast<long>(out.points.size()) < n) {
    rng.seek(static_cast<std::uint64_t>(out.candidates) << 8);
    Vec3 x;
    for (int a = 0; a < 3; ++a) x(a) = rng.gaussian();
    x.normalize();
    ++out.candidates;
    if (index.find(x) < 0) out.points.push_back(x);
    if (out.candidates >= 100000 && out.acceptance_ratio() < 1e-4)
      throw std::runtime_error("residual_sample: acceptance rate " + std::to_string(out.acceptance_ratio()) +
                               " after " + std::to_string(out.candidates) + " candidates at depth " +
                               std::to_string(packing.generation_depth) + " (" +
                               std::to_string(packing.size()) + " caps)");
  }
  return out;
}

/// Circumradius of the Sierpinski triangle in the tangent plane z = -1.
/// Each vertex sits 36.9 degrees from the south pole and two vertices are
/// 62.6 degrees apart, so the whole triangle stays within a 90 degree arc.
inline constexpr double kSierpinskiCircumradius = 0.75;

inline std::array<Vec3, 3> sierpinski_vertices() {
  std::array<Vec3, 3> v;
  for (int k = 0; k < 3; ++k) {
    const double t = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
    v[static_cast<std::size_t>(k)] =
        Vec3(kSierpinskiCircumradius * std::cos(t), kSierpinskiCircumradius * std::sin(t), -1.0);
  }
  return v;
}

/// The three contractions of the Sierpinski IFS: x -> (x + v_k) / 2.
inline Vec3 sierpinski_map(const Vec3& x, int k) { return 0.5 * (x + sierpinski_vertices()[static_cast<std::size_t>(k)]); }

/// Chaos-game orbit in the plane z = -1, started at the first vertex (a
/// fixed point of the first map, hence on the attractor).
inline std::vector<Vec3> sierpinski_plane(long points, std::uint64_t seed) {
  require(points >= 1, "sierpinski: points must be positive");
  const auto v = sierpinski_vertices();
  CounterRng rng(seed, 0x53494552ULL);
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(points));
  Vec3 x = v[0];
  for (long i = 0; i < points; ++i) {
    out.push_back(x);
    x = 0.5 * (x + v[rng.below(3)]);
  }
  return out;
}

/// Chaos-game Sierpinski points centrally projected onto the unit sphere.
inline std::vector<Vec3> sierpinski_sphere(long points, std::uint64_t seed) {
  auto pts = sierpinski_plane(points, seed);
  for (auto& p : pts) p.normalize();
  return pts;
}

struct BoxCountFit {
  std::vector<double> scales;  // box sides, descending
  std::vector<long> counts;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Occupied-cube counts N(eps) and the least-squares slope of
/// log N against log(1/eps).
inline BoxCountFit box_dimension(const std::vector<Vec3>& points, std::vector<double> scales) {
  require(scales.size() >= 3, "box_dimension: need at least 3 scales");
  require(!points.empty(), "box_dimension: no points");
  for (double s : scales) require(s > 0.0 && std::isfinite(s), "box_dimension: scales must be positive");
  std::sort(scales.begin(), scales.end(), std::greater<>());
  BoxCountFit fit;
  fit.scales = scales;
  std::unordered_set<std::uint64_t> occupied;
  for (double eps : scales) {
    occupied.clear();
    occupied.reserve(points.size());
    for (const auto& p : points) {
      std::uint64_t h = 0;
      for (int a = 0; a < 3; ++a)
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(p(a) / eps))));
      occupied.insert(h);
    }
    fit.counts.push_back(static_cast<long>(occupied.size()));
  }
  const auto m = static_cast<double>(scales.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double x = std::log(1.0 / scales[i]);
    const double y = std::log(static_cast<double>(fit.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double cov = sxy - sx * sy / m;
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  fit.slope = cov / vx;
  fit.intercept = (sy - fit.slope * sx) / m;
  fit.r2 = vy > 0 ? std::clamp(cov * cov / (vx * vy), 0.0, 1.0) : 1.0;
  return fit;
}

/// Dyadic scales 2^-lo ... 2^-hi.
inline std::vector<double> dyadic_scales(int lo, int hi) {
  require(lo <= hi, "dyadic_scales: empty range");
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

/// Exposed face of the hull of the residual set in one direction: a single
/// extreme point, or (when u is a cap normal) the flat disk spanned by that
/// cap's boundary circle.
struct GasketFace {
  int dim = 0;
  int cap = -1;       // cap whose boundary carries the face, or -1
  Vec3 point;         // the exposed point, or the disk center
  double support = 0.0;
};

inline GasketFace gasket_exposed_face(const CapPacking& packing, const CapIndex& index, const Vec3& u) {
  const double norm = u.norm();
  require(norm > 0.0, "gasket_exposed_face: zero direction");
  const Vec3 dir = u / norm;
  GasketFace f;
  f.cap = index.find(dir);
  if (f.cap < 0) {
    f.point = dir;
    f.support = norm;
    return f;
  }
  const Cap& c = packing.caps[static_cast<std::size_t>(f.cap)];
  const Vec3 tangential = dir - dir.dot(c.normal) * c.normal;
  const double sin_r = std::sqrt((1.0 - c.offset) * (1.0 + c.offset));
  if (tangential.norm() <= 1e-12) {
    f.dim = 2;
    f.point = c.offset * c.normal;
    f.support = norm * c.offset;
    return f;
  }
  f.point = c.offset * c.normal + sin_r * tangential.normalized();
  f.support = u.dot(f.point);
  return f;
}

/// Points on the boundary circle of a cap.
inline std::vector<Vec3> cap_boundary(const Cap& c, int count) {
  Vec3 helper = std::abs(c.normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 a = (helper - helper.dot(c.normal) * c.normal).normalized();
  const Vec3 b = c.normal.cross(a);
  const double sin_r = std::sqrt((1.0 - c.offset) * (1.0 + c.offset));
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * std::numbers::pi * i / count;
    out.push_back(c.offset * c.normal + sin_r * (std::cos(t) * a + std::sin(t) * b));
  }
  return out;
}

struct FaceCensus {
  std::size_t cap_count = 0;
  std::size_t disk_faces = 0;          // caps whose normal exposes a 2-dimensional face
  std::set<int> proper_dims;           // dimensions of proper faces seen
  std::map<int, long> histogram;       // exposed-face dims over random directions
  double max_support_error = 0.0;      // |h(n_i) - offset_i| over caps
};

/// Face summary of the hull of the residual set: one disk face per cap,
/// exposed by the cap normal, plus extreme points. Proper dimensions are
/// collected from the cap normals and from `directions` random directions.
inline FaceCensus face_census(const CapPacking& packing, long directions = 10000, std::uint64_t seed = 0) {
  const CapIndex index(packing.caps);
  FaceCensus out;
  out.cap_count = packing.size();
  for (std::size_t i = 0; i < packing.size(); ++i) {
    const Cap& c = packing.caps[i];
    const auto f = gasket_exposed_face(packing, index, c.normal);
    out.max_support_error = std::max(out.max_support_error, std::abs(f.support - c.offset));
    const auto ring = cap_boundary(c, 12);
    std::vector<Vec> pts;
    for (const auto& p : ring) pts.push_back(p);
    const int dim = affine_rank(pts);
    if (f.dim == 2 && dim == 2 && f.cap == static_cast<int>(i)) ++out.disk_faces;
    out.proper_dims.insert(dim);
  }
  for (long i = 0; i < directions; ++i) {
    auto rng = sample_stream(seed, 0x43454E53ULL, static_cast<std::uint64_t>(i));
    Vec3 u;
    for (int a = 0; a < 3; ++a) u(a) = rng.gaussian();
    const auto f = gasket_exposed_face(packing, index, u);
    ++out.histogram[f.dim];
    out.proper_dims.insert(f.dim);
  }
  return out;
}

} // namespace facetkit::fractal

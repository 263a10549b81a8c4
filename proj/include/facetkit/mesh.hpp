#pragma once

#include <array>
#include <cstdint>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "facetkit/bodies.hpp"

namespace facetkit {

using Vec3 = Eigen::Vector3d;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise seen from outside
};

/// Unit directions at the vertices of an icosahedron subdivided
/// `resolution` times (12, 42, 162, 642, ... directions).
inline std::vector<Vec3> geodesic_directions(int resolution) {
  require(resolution >= 0 && resolution <= 7, "geodesic_directions: resolution must be in [0, 7]");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int r = 0; r < resolution; ++r) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int idx = static_cast<int>(v.size() - 1);
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& [a, b, c] : f) {
      const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  return v;
}

/// Convex hull of a 3-D point set by incremental insertion. Points within
/// `eps` (relative to the cloud extent) of a face plane count as inside.
inline TriangleMesh convex_hull_3d(const std::vector<Vec3>& input, double eps = 1e-10) {
  std::vector<Vec> as_vec(input.begin(), input.end());
  const auto pts_vec = dedupe_points(as_vec);
  std::vector<Vec3> pts(pts_vec.begin(), pts_vec.end());
  require(affine_rank(pts_vec) == 3, "convex_hull_3d: points are not full-dimensional");
  double extent = 0.0;
  for (const auto& p : pts) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  const double tol = eps * std::max(1.0, extent);

  // Initial tetrahedron: two farthest-apart extremes, then farthest from line, then plane.
  const std::size_t n = pts.size();
  std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (pts[i].x() < pts[i0].x()) i0 = i;
  }
  double best = -1;
  for (std::size_t i = 0; i < n; ++i)
    if ((pts[i] - pts[i0]).norm() > best) best = (pts[i] - pts[i0]).norm(), i1 = i;
  best = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (pts[i] - pts[i0]).cross(pts[i1] - pts[i0]).norm();
    if (d > best) best = d, i2 = i;
  }
  const Vec3 nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
  best = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(nrm.dot(pts[i] - pts[i0]));
    if (d > best) best = d, i3 = i;
  }

  struct Tri {
    std::array<int, 3> v;
    Vec3 normal;
    double offset;
    bool alive = true;
  };
  std::vector<Tri> faces;
  auto make = [&](int a, int b, int c) {
    Tri t;
    t.v = {a, b, c};
    t.normal = (pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)])
                   .cross(pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
    const double len = t.normal.norm();
    t.normal /= len;
    t.offset = t.normal.dot(pts[static_cast<std::size_t>(a)]);
    faces.push_back(t);
  };
  const Vec3 inner = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
  const std::array<int, 4> tet = {static_cast<int>(i0), static_cast<int>(i1), static_cast<int>(i2),
                                  static_cast<int>(i3)};
  const std::array<std::array<int, 3>, 4> tet_faces = {{{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}};
  for (const auto& tf : tet_faces) {
    int a = tet[static_cast<std::size_t>(tf[0])], b = tet[static_cast<std::size_t>(tf[1])],
        c = tet[static_cast<std::size_t>(tf[2])];
    const Vec3 nn = (pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)])
                        .cross(pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
    if (nn.dot(inner - pts[static_cast<std::size_t>(a)]) > 0) std::swap(b, c);
    make(a, b, c);
  }

  for (std::size_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].alive && faces[f].normal.dot(pts[p]) - faces[f].offset > tol) visible.push_back(f);
    if (visible.empty()) continue;
    std::map<std::pair<int, int>, int> edges;  // directed edge -> count
    for (auto f : visible) {
      faces[f].alive = false;
      const auto& v = faces[f].v;
      for (int k = 0; k < 3; ++k) edges[{v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>((k + 1) % 3)]}]++;
    }
    for (const auto& [e, cnt] : edges)
      if (!edges.count({e.second, e.first})) make(e.first, e.second, static_cast<int>(p));
  }

  TriangleMesh mesh;
  std::map<int, int> remap;
  for (const auto& f : faces) {
    if (!f.alive) continue;
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      const int old = f.v[static_cast<std::size_t>(k)];
      auto it = remap.find(old);
      if (it == remap.end()) {
        it = remap.emplace(old, static_cast<int>(mesh.vertices.size())).first;
        mesh.vertices.push_back(pts[static_cast<std::size_t>(old)]);
      }
      tri[static_cast<std::size_t>(k)] = it->second;
    }
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

/// Inner polyhedral approximation of a 3-D body: the hull of its support
/// points over a geodesic direction grid.
inline TriangleMesh export_mesh(const ConvexBody& body, int resolution) {
  require(body.ambient_dim() == 3, "export_mesh: body must live in R^3");
  std::vector<Vec3> pts;
  for (const auto& u : geodesic_directions(resolution)) {
    const Vec p = support_point(body, Vec(u));
    pts.emplace_back(p(0), p(1), p(2));
  }
  return convex_hull_3d(pts);
}

/// True when every undirected edge is shared by exactly two triangles with
/// opposite orientations.
inline bool is_watertight(const TriangleMesh& m) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) directed[{t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]}]++;
  for (const auto& [e, c] : directed) {
    if (c != 1) return false;
    const auto it = directed.find({e.second, e.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return !m.triangles.empty();
}

/// Distinct supporting planes among the mesh triangles.
inline int facet_plane_count(const TriangleMesh& m, double tol = 1e-9) {
  std::vector<std::pair<Vec3, double>> planes;
  for (const auto& t : m.triangles) {
    const Vec3& a = m.vertices[static_cast<std::size_t>(t[0])];
    Vec3 n = (m.vertices[static_cast<std::size_t>(t[1])] - a).cross(m.vertices[static_cast<std::size_t>(t[2])] - a);
    n.normalize();
    const double off = n.dot(a);
    bool seen = false;
    for (const auto& [pn, po] : planes) seen = seen || ((pn - n).norm() <= tol && std::abs(po - off) <= tol);
    if (!seen) planes.emplace_back(n, off);
  }
  return static_cast<int>(planes.size());
}

inline std::string to_obj(const TriangleMesh& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& v : m.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : m.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  return out.str();
}

} // namespace facetkit

#pragma once

// Compact convex bodies as an algebraic tree:
//
//   Ball | VPolytope | Embed | Sum | Spectrahedron | AffineImage
//
// Every body is immutable and shares its children, so copies are cheap and
// bodies may be read from any number of threads. All geometry goes through
// the support function h(u) = max <u, x> and its argmax set, the exposed face.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "facetkit/linalg.hpp"
#include "facetkit/oracle.hpp"
#include "facetkit/random.hpp"

namespace facetkit {

class ConvexBody;

struct Ball {
  Vec center;
  double radius = 1.0;
};

struct VPolytope {
  std::vector<Vec> vertices;
};

/// Inner body padded with trailing zero coordinates.
struct Embed {
  std::shared_ptr<const ConvexBody> inner;
  int dim = 0;
};

struct Sum {
  std::shared_ptr<const ConvexBody> left;
  std::shared_ptr<const ConvexBody> right;
};

/// { X real symmetric n x n : X >= 0, tr X = 1 } under the isometric
/// flattening of flatten_sym().
struct Spectrahedron {
  int n = 1;
};

/// x = map * y + offset for y in inner; `map` has orthonormal columns. Only
/// produced as faces of spectrahedra.
struct AffineImage {
  std::shared_ptr<const ConvexBody> inner;
  Mat map;
  Vec offset;
};

enum class BodyKind { ball, vpolytope, embed, sum, spectrahedron, affine_image };

class ConvexBody {
 public:
  using Node = std::variant<Ball, VPolytope, Embed, Sum, Spectrahedron, AffineImage>;

  static ConvexBody ball(Vec center, double radius) {
    require(center.size() >= 1, "ball: ambient dimension must be positive");
    require(std::isfinite(radius) && radius >= 0.0, "ball: radius must be finite and nonnegative");
    require(center.allFinite(), "ball: center must be finite");
    const int dim = static_cast<int>(center.size());
    return ConvexBody(Ball{std::move(center), radius}, dim);
  }

  static ConvexBody unit_ball(int dim) {
    require(dim >= 1, "ball: ambient dimension must be positive");
    return ball(Vec::Zero(dim), 1.0);
  }

  static ConvexBody vpolytope(std::vector<Vec> vertices) {
    require(!vertices.empty(), "vpolytope: vertex list is empty");
    const auto n = vertices.front().size();
    require(n >= 1, "vpolytope: ambient dimension must be positive");
    for (const auto& v : vertices) {
      require(v.size() == n, "vpolytope: vertices have mixed dimensions");
      require(v.allFinite(), "vpolytope: vertex coordinates must be finite");
    }
    return ConvexBody(VPolytope{dedupe_points(vertices)}, static_cast<int>(n));
  }

  static ConvexBody point(Vec p) { return vpolytope({std::move(p)}); }

  static ConvexBody embed(ConvexBody inner, int dim) {
    require(dim >= inner.ambient_dim(), "embed: target dimension is below the inner dimension");
    return ConvexBody(Embed{std::make_shared<const ConvexBody>(std::move(inner)), dim}, dim);
  }

  static ConvexBody sum(ConvexBody left, ConvexBody right) {
    require(left.ambient_dim() == right.ambient_dim(), "sum: ambient dimensions differ");
    const int dim = left.ambient_dim();
    return ConvexBody(Sum{std::make_shared<const ConvexBody>(std::move(left)),
                          std::make_shared<const ConvexBody>(std::move(right))},
                      dim);
  }

  static ConvexBody spectrahedron(int n) {
    require(n >= 1, "spectrahedron: n must be positive");
    return ConvexBody(Spectrahedron{n}, static_cast<int>(sym_flat_dim(n)));
  }

  static ConvexBody affine_image(ConvexBody inner, Mat map, Vec offset) {
    require(map.cols() == inner.ambient_dim(), "affine_image: map columns must match inner dimension");
    require(map.rows() == offset.size() && map.rows() >= 1, "affine_image: map rows must match offset");
    const Mat gram = map.transpose() * map;
    require((gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-9,
            "affine_image: map must have orthonormal columns");
    const int dim = static_cast<int>(map.rows());
    return ConvexBody(AffineImage{std::make_shared<const ConvexBody>(std::move(inner)), std::move(map),
                                  std::move(offset)},
                      dim);
  }

  int ambient_dim() const { return dim_; }
  const Node& node() const { return *node_; }
  BodyKind kind() const { return static_cast<BodyKind>(node_->index()); }

  template <class T>
  const T* as() const {
    return std::get_if<T>(node_.get());
  }

 private:
  ConvexBody(Node node, int dim) : node_(std::make_shared<const Node>(std::move(node))), dim_(dim) {}

  std::shared_ptr<const Node> node_;
  int dim_;
};

inline std::string kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::ball: return "ball";
    case BodyKind::vpolytope: return "vpolytope";
    case BodyKind::embed: return "embed";
    case BodyKind::sum: return "sum";
    case BodyKind::spectrahedron: return "spectrahedron";
    case BodyKind::affine_image: return "affine_image";
  }
  return "?";
}

namespace detail {

inline void check_dim(const ConvexBody& body, const Vec& v, const char* what) {
  if (v.size() != body.ambient_dim())
    throw std::invalid_argument(std::string(what) + ": vector has dimension " + std::to_string(v.size()) +
                                ", body has ambient dimension " + std::to_string(body.ambient_dim()));
}

inline Vec checked_direction(const ConvexBody& body, const Vec& u, const char* what) {
  check_dim(body, u, what);
  const double n = u.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument(std::string(what) + ": zero direction");
  return u / n;
}

inline Vec pad(const Vec& v, int dim) {
  Vec out = Vec::Zero(dim);
  out.head(v.size()) = v;
  return out;
}

// Restricts a unit direction; returns an empty vector when the restriction
// vanishes (the whole body is then the argmax set).
inline Vec restrict_direction(const Vec& w) {
  const double n = w.norm();
  if (n <= tol::zero_dir) return Vec();
  return w / n;
}

inline double support(const ConvexBody& body, const Vec& u);

struct SupportVisitor {
  const Vec& u;
  double operator()(const Ball& b) const { return u.dot(b.center) + b.radius * u.norm(); }
  double operator()(const VPolytope& p) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : p.vertices) m = std::max(m, u.dot(v));
    return m;
  }
  double operator()(const Embed& e) const { return support(*e.inner, u.head(e.inner->ambient_dim())); }
  double operator()(const Sum& s) const { return support(*s.left, u) + support(*s.right, u); }
  double operator()(const Spectrahedron& s) const {
    return jacobi_eigen(unflatten_sym(u, s.n)).values(0);
  }
  double operator()(const AffineImage& a) const {
    return u.dot(a.offset) + support(*a.inner, a.map.transpose() * u);
  }
};

inline double support(const ConvexBody& body, const Vec& u) {
  return std::visit(SupportVisitor{u}, body.node());
}

inline ConvexBody face(const ConvexBody& body, const Vec& u);

/// Top-eigenspace face of Spectrahedron(n) for the direction matrix U:
/// { V Y V^T : Y in Spectrahedron(k) } where V spans the top eigenspace.
inline ConvexBody spectrahedron_face(int n, const Vec& u) {
  const auto eig = jacobi_eigen(unflatten_sym(u, n));
  const double top = eig.values(0);
  const double band = tol::face * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  int k = 0;
  while (k < n && eig.values(k) >= top - band) ++k;
  if (k == n) return ConvexBody::spectrahedron(n);
  const Mat basis = eig.vectors.leftCols(k);
  const auto small = sym_flat_dim(k);
  Mat map(sym_flat_dim(n), small);
  for (Eigen::Index j = 0; j < small; ++j)
    map.col(j) = flatten_sym(basis * unflatten_sym(unit_vector(small, j), k) * basis.transpose());
  return ConvexBody::affine_image(ConvexBody::spectrahedron(k), map, Vec::Zero(sym_flat_dim(n)));
}

struct FaceVisitor {
  const ConvexBody& self;
  const Vec& u;  // unit

  ConvexBody operator()(const Ball& b) const {
    if (b.radius == 0.0) return self;
    return ConvexBody::point(b.center + b.radius * u);
  }
  ConvexBody operator()(const VPolytope& p) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : p.vertices) m = std::max(m, u.dot(v));
    const double band = tol::face * std::max(1.0, max_abs_coord(p.vertices));
    std::vector<Vec> kept;
    for (const auto& v : p.vertices)
      if (u.dot(v) >= m - band) kept.push_back(v);
    if (kept.size() == p.vertices.size()) return self;
    return ConvexBody::vpolytope(std::move(kept));
  }
  ConvexBody operator()(const Embed& e) const {
    const Vec w = restrict_direction(u.head(e.inner->ambient_dim()));
    if (w.size() == 0) return self;
    return ConvexBody::embed(face(*e.inner, w), e.dim);
  }
  ConvexBody operator()(const Sum& s) const {
    return ConvexBody::sum(face(*s.left, u), face(*s.right, u));
  }
  ConvexBody operator()(const Spectrahedron& s) const { return spectrahedron_face(s.n, u); }
  ConvexBody operator()(const AffineImage& a) const {
    const Vec w = restrict_direction(a.map.transpose() * u);
    if (w.size() == 0) return self;
    ConvexBody inner = face(*a.inner, w);
    if (const auto* nested = inner.as<AffineImage>())
      return ConvexBody::affine_image(*nested->inner, a.map * nested->map, a.map * nested->offset + a.offset);
    return ConvexBody::affine_image(std::move(inner), a.map, a.offset);
  }
};

inline ConvexBody face(const ConvexBody& body, const Vec& u) {
  return std::visit(FaceVisitor{body, u}, body.node());
}

} // namespace detail

/// max over the body of <u, x>.
inline double support_value(const ConvexBody& body, const Vec& u) {
  detail::checked_direction(body, u, "support_value");
  return detail::support(body, u);
}

/// The argmax set of <u, .> over the body, as a body of the same algebra.
inline ConvexBody exposed_face(const ConvexBody& body, const Vec& u) {
  return detail::face(body, detail::checked_direction(body, u, "exposed_face"));
}

/// Orthonormal basis of the direction space of the body's affine hull.
inline Mat direction_span(const ConvexBody& body) {
  const int n = body.ambient_dim();
  return std::visit(
      [&](const auto& node) -> Mat {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return node.radius > 0.0 ? Mat(Mat::Identity(n, n)) : Mat(n, 0);
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          return affine_directions(node.vertices);
        } else if constexpr (std::is_same_v<T, Embed>) {
          const Mat in = direction_span(*node.inner);
          Mat out = Mat::Zero(n, in.cols());
          out.topRows(in.rows()) = in;
          return out;
        } else if constexpr (std::is_same_v<T, Sum>) {
          const Mat l = direction_span(*node.left);
          const Mat r = direction_span(*node.right);
          Mat both(n, l.cols() + r.cols());
          both << l, r;
          return orthonormal_span(both);
        } else if constexpr (std::is_same_v<T, Spectrahedron>) {
          Mat trace_normal = flatten_sym(Mat::Identity(node.n, node.n));
          return orthogonal_complement(trace_normal, n);
        } else {
          return orthonormal_span(node.map * direction_span(*node.inner));
        }
      },
      body.node());
}

/// Dimension of the affine hull.
inline int body_dim(const ConvexBody& body) {
  if (const auto* s = body.as<Spectrahedron>()) return static_cast<int>(sym_flat_dim(s->n)) - 1;
  return static_cast<int>(direction_span(body).cols());
}

/// A point in the relative interior.
inline Vec relative_point(const ConvexBody& body) {
  const int n = body.ambient_dim();
  return std::visit(
      [&](const auto& node) -> Vec {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return node.center;
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          Vec c = Vec::Zero(n);
          for (const auto& v : node.vertices) c += v;
          return c / static_cast<double>(node.vertices.size());
        } else if constexpr (std::is_same_v<T, Embed>) {
          return detail::pad(relative_point(*node.inner), n);
        } else if constexpr (std::is_same_v<T, Sum>) {
          return relative_point(*node.left) + relative_point(*node.right);
        } else if constexpr (std::is_same_v<T, Spectrahedron>) {
          return flatten_sym(Mat::Identity(node.n, node.n) / node.n);
        } else {
          return node.map * relative_point(*node.inner) + node.offset;
        }
      },
      body.node());
}

/// A point of the exposed face in direction u.
inline Vec support_point(const ConvexBody& body, const Vec& u) {
  return relative_point(exposed_face(body, u));
}

/// Vertex list when the body is a polytope (V-polytope, point, or an
/// embedding / sum / isometric image of polytopes); nullopt otherwise.
inline std::optional<std::vector<Vec>> polytope_vertices(const ConvexBody& body) {
  const int n = body.ambient_dim();
  return std::visit(
      [&](const auto& node) -> std::optional<std::vector<Vec>> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) {
          if (node.radius > 0.0) return std::nullopt;
          return std::vector<Vec>{node.center};
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          return node.vertices;
        } else if constexpr (std::is_same_v<T, Embed>) {
          auto in = polytope_vertices(*node.inner);
          if (!in) return std::nullopt;
          for (auto& v : *in) v = detail::pad(v, n);
          return in;
        } else if constexpr (std::is_same_v<T, Sum>) {
          auto l = polytope_vertices(*node.left);
          auto r = polytope_vertices(*node.right);
          if (!l || !r) return std::nullopt;
          try {
            return oracle::minkowski_sum(*l, *r);
          } catch (const oracle::SizeGuardExceeded&) {
            return std::nullopt;
          }
        } else if constexpr (std::is_same_v<T, Spectrahedron>) {
          if (node.n != 1) return std::nullopt;
          return std::vector<Vec>{Vec::Ones(1)};
        } else {
          auto in = polytope_vertices(*node.inner);
          if (!in) return std::nullopt;
          for (auto& v : *in) v = node.map * v + node.offset;
          return in;
        }
      },
      body.node());
}

inline bool is_polytopal(const ConvexBody& body) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) return node.radius == 0.0;
        else if constexpr (std::is_same_v<T, VPolytope>) return true;
        else if constexpr (std::is_same_v<T, Embed>) return is_polytopal(*node.inner);
        else if constexpr (std::is_same_v<T, Sum>) return is_polytopal(*node.left) && is_polytopal(*node.right);
        else if constexpr (std::is_same_v<T, Spectrahedron>) return node.n == 1;
        else return is_polytopal(*node.inner);
      },
      body.node());
}

/// Number of quasi-random probe directions used by contains() on
/// non-polytopal bodies.
inline constexpr int kMembershipProbes = 4096;

/// Membership test: <u, x> <= h(u) + tol for every probe direction u.
///
/// Polytopal bodies are probed with their exact facet normals (plus the
/// affine-hull normals), which makes the test exact. Other bodies are probed
/// with +-coordinate axes, +-normals of the affine hull, the direction from a
/// relative-interior point to x, and kMembershipProbes fixed pseudo-random
/// directions; for those the test is only a necessary condition.
inline bool contains(const ConvexBody& body, const Vec& x, double tol) {
  detail::check_dim(body, x, "contains");
  const int n = body.ambient_dim();
  if (is_polytopal(body)) {
    if (auto verts = polytope_vertices(body)) {
      try {
        const auto lat = oracle::face_lattice(*verts, oracle::kCloudLimits);
        const Vec rel = x - lat.hull_origin;
        if ((rel - lat.hull_directions * (lat.hull_directions.transpose() * rel)).norm() > tol) return false;
        for (const auto& f : lat.facets)
          if (f.normal.dot(x) > f.offset + tol) return false;
        return true;
      } catch (const oracle::SizeGuardExceeded&) {
      }
    }
  }

  auto violates = [&](const Vec& u) { return u.dot(x) > detail::support(body, u) + tol; };
  for (int i = 0; i < n; ++i) {
    const Vec e = unit_vector(n, i);
    if (violates(e) || violates(-e)) return false;
  }
  const Mat normals = orthogonal_complement(direction_span(body), n);
  for (Eigen::Index j = 0; j < normals.cols(); ++j)
    if (violates(normals.col(j)) || violates(-normals.col(j))) return false;
  const Vec toward = x - relative_point(body);
  if (toward.norm() > 0.0 && violates(toward / toward.norm())) return false;
  CounterRng rng(0x50524F4245ULL);
  for (int k = 0; k < kMembershipProbes; ++k)
    if (violates(rng.sphere(n))) return false;
  return true;
}

/// Deterministic sample of points of the body: vertices and random convex
/// combinations for polytopes, boundary and interior points for balls,
/// random density matrices for spectrahedra.
inline std::vector<Vec> sample_points(const ConvexBody& body, int count, std::uint64_t seed) {
  require(count >= 1, "sample_points: count must be positive");
  const int n = body.ambient_dim();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        CounterRng rng(seed, static_cast<std::uint64_t>(body.kind()));
        if constexpr (std::is_same_v<T, Ball>) {
          for (int i = 0; i < count; ++i) {
            const double s = (i % 2 == 0) ? 1.0 : std::pow(rng.uniform(), 1.0 / n);
            out.push_back(node.center + node.radius * s * rng.sphere(n));
          }
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          for (int i = 0; i < count; ++i) {
            if (static_cast<std::size_t>(i) < node.vertices.size()) {
              out.push_back(node.vertices[static_cast<std::size_t>(i)]);
              continue;
            }
            Vec acc = Vec::Zero(n);
            double total = 0.0;
            for (const auto& v : node.vertices) {
              const double w = -std::log(1.0 - rng.uniform());
              acc += w * v;
              total += w;
            }
            out.push_back(acc / total);
          }
        } else if constexpr (std::is_same_v<T, Embed>) {
          for (const auto& p : sample_points(*node.inner, count, seed)) out.push_back(detail::pad(p, n));
        } else if constexpr (std::is_same_v<T, Sum>) {
          const auto l = sample_points(*node.left, count, seed);
          const auto r = sample_points(*node.right, count, splitmix64(seed));
          for (int i = 0; i < count; ++i)
            out.push_back(l[static_cast<std::size_t>(i)] + r[static_cast<std::size_t>(count - 1 - i)]);
        } else if constexpr (std::is_same_v<T, Spectrahedron>) {
          for (int i = 0; i < count; ++i) {
            const int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(node.n)));
            Mat g(node.n, rank);
            for (Eigen::Index a = 0; a < g.rows(); ++a)
              for (Eigen::Index b = 0; b < g.cols(); ++b) g(a, b) = rng.gaussian();
            Mat x = g * g.transpose();
            out.push_back(flatten_sym(x / x.trace()));
          }
        } else {
          for (const auto& p : sample_points(*node.inner, count, seed)) out.push_back(node.map * p + node.offset);
        }
      },
      body.node());
  return out;
}

/// Tree equality with numeric fields compared within `tol`. Polytope vertex
/// lists are compared as sets.
inline bool structurally_equal(const ConvexBody& a, const ConvexBody& b, double tol) {
  if (a.kind() != b.kind() || a.ambient_dim() != b.ambient_dim()) return false;
  auto close = [&](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && (x.size() == 0 || (x - y).cwiseAbs().maxCoeff() <= tol);
  };
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = *b.as<T>();
        if constexpr (std::is_same_v<T, Ball>) {
          return close(na.center, nb.center) && std::abs(na.radius - nb.radius) <= tol;
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          if (na.vertices.size() != nb.vertices.size()) return false;
          for (const auto& v : na.vertices) {
            bool found = false;
            for (const auto& w : nb.vertices) found = found || close(v, w);
            if (!found) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Embed>) {
          return na.dim == nb.dim && structurally_equal(*na.inner, *nb.inner, tol);
        } else if constexpr (std::is_same_v<T, Sum>) {
          return structurally_equal(*na.left, *nb.left, tol) && structurally_equal(*na.right, *nb.right, tol);
        } else if constexpr (std::is_same_v<T, Spectrahedron>) {
          return na.n == nb.n;
        } else {
          return close(na.map, nb.map) && close(na.offset, nb.offset) &&
                 structurally_equal(*na.inner, *nb.inner, tol);
        }
      },
      a.node());
}

} // namespace facetkit

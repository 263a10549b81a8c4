#pragma once

// Facial-dimension patterns of bodies.
//
// face_pattern() works structurally: it knows the face dimensions of balls,
// polytopes (via the oracle lattice) and spectrahedra, and how embeddings,
// isometric images and sums with a ball transform them. Every proper
// dimension it reports comes with a witness chain of directions whose
// iterated exposed faces land on a face of that dimension.

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "facetkit/bodies.hpp"
#include "facetkit/construct.hpp"
#include "facetkit/oracle.hpp"
#include "facetkit/random.hpp"

namespace facetkit {

class UnsupportedComposition : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FacePattern {
  std::set<int> dims;

  bool operator==(const FacePattern&) const = default;

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int d : dims) {
      s += (first ? "" : ",") + std::to_string(d);
      first = false;
    }
    return s + "}";
  }

  /// The pattern a body built for `d` must have: {0} u d.
  static FacePattern expected(const Pattern& d) {
    FacePattern p{{0}};
    p.dims.insert(d.dims().begin(), d.dims().end());
    return p;
  }
};

struct WitnessChain {
  std::vector<Vec> directions;
  int claimed_dim = 0;
};

struct PatternReport {
  FacePattern pattern;
  std::vector<WitnessChain> chains;  // one per proper dimension, ascending
};

namespace detail {

struct PatternParts {
  std::set<int> dims;
  std::map<int, std::vector<Vec>> chains;  // proper dims only
  int dim = 0;
};

inline PatternParts pattern_parts(const ConvexBody& body);

inline PatternParts polytope_parts(const std::vector<Vec>& vertices) {
  const auto lat = oracle::face_lattice(vertices, oracle::kCloudLimits);
  PatternParts out;
  out.dim = lat.dim;
  for (const auto& f : lat.faces) {
    out.dims.insert(f.dim);
    if (f.dim < lat.dim && !out.chains.count(f.dim)) out.chains[f.dim] = {f.normal};
  }
  return out;
}

// Unit vector orthogonal to `span`, preferring the last coordinate axis.
inline Vec orthogonal_axis(const Mat& span, int n) {
  const Vec last = unit_vector(n, n - 1);
  if (span.cols() == 0 || (span.transpose() * last).norm() <= tol::rank) return last;
  return orthogonal_complement(span, n).col(0);
}

// C = Ball + X. Proper faces of C are {b} + F with F a face of X, so the
// pattern is {0} u pattern(X) u {dim C}. When X is not full-dimensional the
// direction e orthogonal to X exposes {b} + X, and chains of X follow it.
inline PatternParts ball_sum_parts(const ConvexBody& other, int n) {
  PatternParts x = pattern_parts(other);
  PatternParts out;
  out.dim = n;
  out.dims = x.dims;
  out.dims.insert(0);
  out.dims.insert(n);
  if (x.dim == n) {
    out.chains = x.chains;
    return out;
  }
  const Vec e = orthogonal_axis(direction_span(other), n);
  out.chains[x.dim] = {e};
  for (const auto& [d, chain] : x.chains) {
    std::vector<Vec> c{e};
    c.insert(c.end(), chain.begin(), chain.end());
    out.chains[d] = std::move(c);
  }
  if (!out.chains.count(0)) out.chains[0] = {unit_vector(n, 0)};
  return out;
}

inline bool is_round_ball(const ConvexBody& b) {
  const auto* ball = b.as<Ball>();
  return ball && ball->radius > 0.0;
}

inline PatternParts pattern_parts(const ConvexBody& body) {
  const int n = body.ambient_dim();
  return std::visit(
      [&](const auto& node) -> PatternParts {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) {
          if (node.radius == 0.0) return PatternParts{{0}, {}, 0};
          return PatternParts{{0, n}, {{0, {unit_vector(n, 0)}}}, n};
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          return polytope_parts(node.vertices);
        } else if constexpr (std::is_same_v<T, Embed>) {
          PatternParts in = pattern_parts(*node.inner);
          for (auto& [d, chain] : in.chains)
            for (auto& u : chain) u = pad(u, n);
          return in;
        } else if constexpr (std::is_same_v<T, Spectrahedron>) {
          PatternParts out;
          out.dim = static_cast<int>(sym_flat_dim(node.n)) - 1;
          for (int k = 1; k <= node.n; ++k) {
            const int d = k * (k + 1) / 2 - 1;
            out.dims.insert(d);
            if (k < node.n) {
              Mat diag = Mat::Zero(node.n, node.n);
              diag.topLeftCorner(k, k).setIdentity();
              out.chains[d] = {flatten_sym(diag)};
            }
          }
          return out;
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          PatternParts in = pattern_parts(*node.inner);
          for (auto& [d, chain] : in.chains)
            for (auto& u : chain) u = node.map * u;
          return in;
        } else {
          const ConvexBody& l = *node.left;
          const ConvexBody& r = *node.right;
          if (body_dim(l) == 0) return pattern_parts(r);
          if (body_dim(r) == 0) return pattern_parts(l);
          if (is_round_ball(l)) return ball_sum_parts(r, n);
          if (is_round_ball(r)) return ball_sum_parts(l, n);
          if (is_polytopal(l) && is_polytopal(r)) {
            auto verts = polytope_vertices(body);
            if (!verts) throw UnsupportedComposition("face_pattern: polytope sum exceeds the oracle size guard");
            return polytope_parts(*verts);
          }
          throw UnsupportedComposition("face_pattern: unsupported sum of " + kind_name(l.kind()) + " and " +
                                       kind_name(r.kind()));
        }
      },
      body.node());
}

} // namespace detail

/// Folds exposed_face along the chain and checks the terminal face: its
/// affine dimension must equal claimed_dim and sampled points of it must
/// lie in the original body.
inline bool verify_chain(const ConvexBody& body, const WitnessChain& chain) {
  for (const auto& u : chain.directions)
    if (u.size() != body.ambient_dim())
      throw std::invalid_argument("verify_chain: direction dimension does not match the body");
  ConvexBody face = body;
  for (const auto& u : chain.directions) face = exposed_face(face, u);
  if (body_dim(face) != chain.claimed_dim) return false;
  for (const auto& p : sample_points(face, 8, 0)) {
    const double tol = 1e-9 * std::max(1.0, p.cwiseAbs().maxCoeff());
    if (!contains(body, p, tol)) return false;
  }
  return true;
}

/// Exact facial-dimension set with one witness chain per proper dimension.
/// Throws UnsupportedComposition for sums outside the structural rules.
inline PatternReport face_pattern(const ConvexBody& body) {
  auto parts = detail::pattern_parts(body);
  PatternReport out;
  out.pattern.dims = parts.dims;
  for (auto& [d, chain] : parts.chains) out.chains.push_back({std::move(chain), d});
  return out;
}

/// Histogram of body_dim(exposed_face(body, u)) over n_samples directions
/// uniform on the sphere. Direction i depends only on (seed, i).
inline std::map<int, long> sample_probe(const ConvexBody& body, long n_samples, std::uint64_t seed) {
  require(n_samples >= 1, "sample_probe: n_samples must be positive");
  std::map<int, long> hist;
  const int n = body.ambient_dim();
  for (long i = 0; i < n_samples; ++i) {
    auto rng = sample_stream(seed, 0x5350524FULL, static_cast<std::uint64_t>(i));
    ++hist[body_dim(exposed_face(body, rng.sphere(n)))];
  }
  return hist;
}

} // namespace facetkit

#include <gtest/gtest.h>

#include "facetkit/construct.hpp"
#include "facetkit/probe.hpp"

using namespace facetkit;
using shapes::v;

namespace {

// Face dimensions of Spectrahedron(n) by eigen-multiplicity: the direction
// diag(1,..,1,0,..,0) with k ones exposes the density matrices supported on
// the first k coordinates; the rank-one matrices w w^T / |w|^2 with
// w = e_i + e_j (i <= j < k) lie on that face, and their affine rank is its
// dimension.
std::set<int> spectrahedron_dims_by_multiplicity(int n) {
  std::set<int> out;
  for (int k = 1; k <= n; ++k) {
    Vec lambda = Vec::Zero(n);
    lambda.head(k).setOnes();
    const Vec u = flatten_sym(Mat(lambda.asDiagonal()));
    std::vector<Vec> pts;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        const Vec w = unit_vector(n, i) + unit_vector(n, j);
        const Vec x = flatten_sym(w * w.transpose() / w.squaredNorm());
        EXPECT_NEAR(u.dot(x), 1.0, 1e-12);
        pts.push_back(x);
      }
    out.insert(affine_rank(pts));
  }
  return out;
}

} // namespace

TEST(FacePattern, Expected) {
  EXPECT_EQ(FacePattern::expected(Pattern({1, 3})).dims, (std::set<int>{0, 1, 3}));
  EXPECT_EQ(FacePattern::expected(Pattern()).dims, (std::set<int>{0}));
  EXPECT_EQ((FacePattern{{0, 2, 5}}.str()), "{0,2,5}");
}

TEST(FacePattern, ConstructedBodiesWithChains) {
  for (const auto& d : all_patterns(5)) {
    const auto body = build_pattern(d);
    const auto rep = face_pattern(body);
    EXPECT_EQ(rep.pattern, FacePattern::expected(d)) << d.str() << " got " << rep.pattern.str();
    std::set<int> proper(rep.pattern.dims.begin(), rep.pattern.dims.end());
    proper.erase(body_dim(body));
    std::set<int> witnessed;
    for (const auto& c : rep.chains) {
      EXPECT_TRUE(verify_chain(body, c)) << d.str() << " dim " << c.claimed_dim;
      witnessed.insert(c.claimed_dim);
    }
    EXPECT_EQ(witnessed, proper) << d.str();
  }
}

TEST(FacePattern, LargerPatterns) {
  for (const auto& d : {Pattern({1, 3, 6}), Pattern({2, 4, 7}), Pattern({1, 2, 3, 5, 8})}) {
    const auto body = build_pattern(d);
    const auto rep = face_pattern(body);
    EXPECT_EQ(rep.pattern, FacePattern::expected(d));
    for (const auto& c : rep.chains) EXPECT_TRUE(verify_chain(body, c)) << d.str();
  }
}

TEST(FacePattern, SpectrahedronMatchesMultiplicityEnumeration) {
  for (int n = 1; n <= 4; ++n) {
    const auto s = ConvexBody::spectrahedron(n);
    const auto rep = face_pattern(s);
    auto expected = spectrahedron_dims_by_multiplicity(n);
    expected.insert(0);
    EXPECT_EQ(rep.pattern.dims, expected) << n;
    for (const auto& c : rep.chains) EXPECT_TRUE(verify_chain(s, c));
  }
  EXPECT_EQ(face_pattern(ConvexBody::spectrahedron(3)).pattern.dims, (std::set<int>{0, 2, 5}));
}

TEST(FacePattern, SumsWithPointsAndPolytopes) {
  const auto shifted = ConvexBody::sum(ConvexBody::point(v({2, 2})), ConvexBody::unit_ball(2));
  EXPECT_EQ(face_pattern(shifted).pattern.dims, (std::set<int>{0, 2}));
  const auto hexagon = ConvexBody::sum(shapes::triangle(),
                                       ConvexBody::vpolytope({v({0, 0}), v({-1, 0}), v({0, -1})}));
  EXPECT_EQ(face_pattern(hexagon).pattern.dims, (std::set<int>{0, 1, 2}));
  const auto prism = ConvexBody::sum(ConvexBody::embed(shapes::triangle(), 3),
                                     ConvexBody::vpolytope({v({0, 0, 0}), v({0, 0, 1})}));
  const auto rep = face_pattern(prism);
  EXPECT_EQ(rep.pattern.dims, (std::set<int>{0, 1, 2, 3}));
  for (const auto& c : rep.chains) EXPECT_TRUE(verify_chain(prism, c));
}

TEST(FacePattern, UnsupportedComposition) {
  const auto s = ConvexBody::sum(ConvexBody::spectrahedron(2),
                                 ConvexBody::vpolytope({v({0, 0, 0}), v({1, 0, 0})}));
  EXPECT_THROW(face_pattern(s), UnsupportedComposition);
}

TEST(VerifyChain, RejectsWrongClaims) {
  const auto body = build_pattern(Pattern({1, 3}));
  EXPECT_TRUE(verify_chain(body, {{v({0, 0, 1})}, 1}));
  EXPECT_FALSE(verify_chain(body, {{v({0, 0, 1})}, 2}));
  EXPECT_TRUE(verify_chain(body, {{v({0, 0, 1}), v({1, 0, 0})}, 0}));
  EXPECT_TRUE(verify_chain(body, {{}, 3}));
  EXPECT_THROW(verify_chain(body, {{v({0, 1})}, 0}), std::invalid_argument);
}

TEST(SampleProbe, SmoothBodiesOnlyShowPoints) {
  const auto hist = sample_probe(ConvexBody::unit_ball(3), 2000, 0);
  ASSERT_EQ(hist.size(), 1U);
  EXPECT_EQ(hist.at(0), 2000);
  const auto spec = sample_probe(ConvexBody::spectrahedron(3), 2000, 1);
  EXPECT_EQ(spec.size(), 1U);
  EXPECT_EQ(spec.begin()->first, 0);
}

TEST(SampleProbe, PolytopeSeesOnlyVertices) {
  const auto hist = sample_probe(shapes::tetrahedron(), 1000, 3);
  EXPECT_EQ(hist.size(), 1U);
  EXPECT_EQ(hist.begin()->first, 0);
}

TEST(SampleProbe, DirectionsDependOnSeedAndIndexOnly) {
  const auto body = catalog("stadium2d");
  EXPECT_EQ(sample_probe(body, 500, 9), sample_probe(body, 500, 9));
  EXPECT_THROW(sample_probe(body, 0, 9), std::invalid_argument);
}

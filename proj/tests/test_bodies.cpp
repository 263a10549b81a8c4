#include <gtest/gtest.h>

#include "facetkit/bodies.hpp"
#include "facetkit/construct.hpp"
#include "facetkit/json_io.hpp"

using namespace facetkit;
using shapes::v;

namespace {

std::vector<ConvexBody> assorted_bodies() {
  return {
      ConvexBody::unit_ball(3),
      ConvexBody::ball(v({1, -2}), 0.5),
      shapes::tetrahedron(),
      shapes::unit_square(),
      catalog("stadium2d"),
      catalog("square-plus-disk"),
      build_pattern(Pattern({1, 3})),
      build_pattern(Pattern({2, 4})),
      build_pattern(Pattern({1, 2, 3})),
      ConvexBody::spectrahedron(3),
      ConvexBody::sum(shapes::tetrahedron(), ConvexBody::point(v({1, 1, 1}))),
  };
}

// Maximum of <u, X> over random rank-one density matrices, a lower bound for
// the spectrahedron support function that converges from below.
double sampled_spectrahedron_support(const Mat& u, int samples) {
  CounterRng rng(77, 1);
  double best = -1e300;
  for (int i = 0; i < samples; ++i) {
    const Vec x = rng.sphere(u.rows());
    best = std::max(best, x.dot(u * x));
  }
  return best;
}

} // namespace

TEST(Support, Examples) {
  EXPECT_DOUBLE_EQ(support_value(ConvexBody::unit_ball(3), v({0, 0, 1})), 1.0);
  const auto c = ConvexBody::sum(ConvexBody::unit_ball(3), ConvexBody::embed(shapes::triangle(), 3));
  EXPECT_DOUBLE_EQ(support_value(c, v({0, 0, 1})), 1.0);
  EXPECT_DOUBLE_EQ(support_value(c, v({1, 0, 0})), 2.0);
  EXPECT_NEAR(support_value(ConvexBody::unit_ball(2), v({3, 4})), 5.0, 1e-14);
}

TEST(Support, SpectrahedronMatchesSampledDensityMatrices) {
  const auto s = ConvexBody::spectrahedron(3);
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 1;
  EXPECT_NEAR(support_value(s, flatten_sym(d)), 1.0, 1e-12);
  CounterRng rng(3, 3);
  for (int t = 0; t < 5; ++t) {
    Mat u(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) u(i, j) = u(j, i) = rng.gaussian();
    const double h = support_value(s, flatten_sym(u));
    const double sampled = sampled_spectrahedron_support(u, 100000);
    EXPECT_GE(h, sampled - 1e-12);
    EXPECT_NEAR(h, sampled, 2e-3 * (1 + u.norm()));
  }
}

TEST(Support, AdditiveUnderSums) {
  const auto a = shapes::tetrahedron();
  const auto b = ConvexBody::ball(v({0, 1, 0}), 2.0);
  const auto sum = ConvexBody::sum(a, b);
  const auto verts = *polytope_vertices(a);
  CounterRng rng(5, 5);
  for (int i = 0; i < 200; ++i) {
    const Vec u = rng.gaussian_vector(3);
    double ha = -1e300;
    for (const auto& p : verts) ha = std::max(ha, u.dot(p));
    const double hb = u(1) + 2.0 * u.norm();
    EXPECT_NEAR(support_value(sum, u), ha + hb, 1e-12 * (1 + u.norm()));
  }
}

TEST(ExposedFace, BallGivesAPoint) {
  const auto f = exposed_face(ConvexBody::unit_ball(3), v({0, 0, 5}));
  ASSERT_EQ(f.kind(), BodyKind::vpolytope);
  EXPECT_EQ(body_dim(f), 0);
  EXPECT_LE((relative_point(f) - v({0, 0, 1})).norm(), 1e-15);
}

TEST(ExposedFace, LastAxisOfBallPlusTriangle) {
  const auto tri = ConvexBody::embed(shapes::triangle(), 3);
  const auto c = ConvexBody::sum(ConvexBody::unit_ball(3), tri);
  const auto f = exposed_face(c, v({0, 0, 1}));
  const auto expected = ConvexBody::sum(ConvexBody::point(v({0, 0, 1})), tri);
  EXPECT_TRUE(structurally_equal(f, expected, 1e-9));
  EXPECT_EQ(body_dim(f), 2);
}

TEST(ExposedFace, SquareEdgeMatchesGridArgmax) {
  const auto sq = shapes::unit_square();
  const auto f = exposed_face(sq, v({1, 0}));
  std::vector<Vec> grid_argmax;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j)
      if (i == 100) grid_argmax.push_back(v({i / 100.0, j / 100.0}));
  EXPECT_EQ(body_dim(f), 1);
  for (const auto& p : grid_argmax) EXPECT_TRUE(contains(f, p, 1e-12));
  EXPECT_FALSE(contains(f, v({0.99, 0.5}), 1e-9));
  EXPECT_TRUE(structurally_equal(f, ConvexBody::vpolytope({v({1, 0}), v({1, 1})}), 0.0));
}

TEST(ExposedFace, ConsistentWithSupport) {
  CounterRng rng(11, 2);
  for (const auto& body : assorted_bodies()) {
    for (int t = 0; t < 20; ++t) {
      const Vec u = rng.sphere(body.ambient_dim());
      const double h = support_value(body, u);
      const auto face = exposed_face(body, u);
      EXPECT_NEAR(support_value(face, u), h, 1e-9 * (1 + std::abs(h)));
      EXPECT_LE(body_dim(face), body_dim(body));
      for (const auto& p : sample_points(face, 6, 1)) {
        EXPECT_NEAR(u.dot(p), h, 1e-9 * (1 + std::abs(h)));
        EXPECT_TRUE(contains(body, p, 1e-9 * std::max(1.0, p.cwiseAbs().maxCoeff())));
      }
    }
  }
}

TEST(ExposedFace, FaceOfFaceStaysInTheFirstFace) {
  CounterRng rng(12, 2);
  for (const auto& body : assorted_bodies()) {
    const int n = body.ambient_dim();
    for (int t = 0; t < 5; ++t) {
      const Vec u = rng.sphere(n);
      const Vec w = rng.sphere(n);
      const double h = support_value(body, u);
      const auto f1 = exposed_face(body, u);
      const auto f2 = exposed_face(f1, w);
      EXPECT_LE(body_dim(f2), body_dim(f1));
      for (const auto& p : sample_points(f2, 4, 2)) EXPECT_NEAR(u.dot(p), h, 1e-9 * (1 + std::abs(h)));
    }
  }
}

TEST(ExposedFace, SpectrahedronMultiplicityGivesDims) {
  CounterRng rng(21, 21);
  for (int n = 2; n <= 4; ++n) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
    const Mat q = jacobi_eigen(g + g.transpose()).vectors;
    for (int k = 1; k <= n; ++k) {
      Vec lambda = Vec::LinSpaced(n, -1.0, -2.0);
      lambda.head(k).setConstant(3.0);
      const Mat u = q * lambda.asDiagonal() * q.transpose();
      const auto f = exposed_face(ConvexBody::spectrahedron(n), flatten_sym(u));
      EXPECT_EQ(body_dim(f), k * (k + 1) / 2 - 1) << "n=" << n << " k=" << k;
      EXPECT_NEAR(support_value(f, flatten_sym(u)), 3.0, 1e-9);
    }
  }
}

TEST(BodyDim, Examples) {
  EXPECT_EQ(body_dim(ConvexBody::unit_ball(3)), 3);
  EXPECT_EQ(body_dim(ConvexBody::spectrahedron(3)), 5);
  EXPECT_EQ(body_dim(ConvexBody::spectrahedron(3)), static_cast<int>(direction_span(ConvexBody::spectrahedron(3)).cols()));
  const auto a = ConvexBody::vpolytope({v({0, 0}), v({1, 0})});
  const auto b = ConvexBody::vpolytope({v({0, 0}), v({0, 1})});
  EXPECT_EQ(body_dim(ConvexBody::sum(a, b)), 2);
  EXPECT_EQ(body_dim(ConvexBody::sum(a, a)), 1);
  EXPECT_EQ(body_dim(ConvexBody::embed(shapes::triangle(), 5)), 2);
}

TEST(Contains, Examples) {
  EXPECT_TRUE(contains(ConvexBody::unit_ball(2), v({0, 0}), 1e-9));
  EXPECT_FALSE(contains(ConvexBody::unit_ball(2), v({1.1, 0}), 1e-9));
  EXPECT_TRUE(contains(catalog("stadium2d"), v({3, 0}), 1e-9));
  EXPECT_FALSE(contains(catalog("stadium2d"), v({3.01, 0}), 1e-9));
  EXPECT_TRUE(contains(shapes::tetrahedron(), v({0.25, 0.25, 0.25}), 1e-12));
  EXPECT_FALSE(contains(shapes::tetrahedron(), v({0.4, 0.4, 0.4}), 1e-9));
  EXPECT_FALSE(contains(ConvexBody::embed(shapes::triangle(), 3), v({0.1, 0.1, 1e-6}), 1e-9));
  Mat x = Mat::Zero(3, 3);
  x(0, 0) = 0.5;
  x(1, 1) = 0.5;
  EXPECT_TRUE(contains(ConvexBody::spectrahedron(3), flatten_sym(x), 1e-9));
  x(2, 2) = -0.2;
  x(0, 0) = 0.7;
  EXPECT_FALSE(contains(ConvexBody::spectrahedron(3), flatten_sym(x), 1e-9));
}

TEST(Errors, ZeroAndMismatchedDirections) {
  const auto b = ConvexBody::unit_ball(3);
  EXPECT_THROW(exposed_face(b, Vec::Zero(3)), std::invalid_argument);
  EXPECT_THROW(support_value(b, Vec::Ones(2)), std::invalid_argument);
  EXPECT_THROW(ConvexBody::vpolytope({}), std::invalid_argument);
  EXPECT_THROW(ConvexBody::vpolytope({v({0}), v({0, 1})}), std::invalid_argument);
  EXPECT_THROW(ConvexBody::sum(ConvexBody::unit_ball(2), ConvexBody::unit_ball(3)), std::invalid_argument);
  EXPECT_THROW(ConvexBody::embed(ConvexBody::unit_ball(3), 2), std::invalid_argument);
  EXPECT_THROW(ConvexBody::ball(v({0, 0}), -1.0), std::invalid_argument);
}

TEST(AffineImage, IsometricCopyOfASquare) {
  Mat m = Mat::Zero(3, 2);
  m(0, 0) = 1;
  m(2, 1) = 1;
  const auto img = ConvexBody::affine_image(shapes::unit_square(), m, v({0, 5, 0}));
  EXPECT_EQ(body_dim(img), 2);
  EXPECT_DOUBLE_EQ(support_value(img, v({0, 1, 0})), 5.0);
  EXPECT_DOUBLE_EQ(support_value(img, v({0, 0, 1})), 1.0);
  EXPECT_EQ(body_dim(exposed_face(img, v({0, 0, 1}))), 1);
  EXPECT_EQ(body_dim(exposed_face(img, v({0, 1, 0}))), 2);
  Mat bad = Mat::Ones(3, 2);
  EXPECT_THROW(ConvexBody::affine_image(shapes::unit_square(), bad, Vec::Zero(3)), std::invalid_argument);
}

TEST(Json, RoundTrip) {
  for (const auto& body : assorted_bodies()) {
    const auto j = to_json(body);
    const auto back = body_from_json(json::parse(dump(j)));
    EXPECT_TRUE(structurally_equal(body, back, 0.0)) << dump(j);
  }
  const auto face = exposed_face(ConvexBody::spectrahedron(3), flatten_sym(Mat::Identity(3, 3) - Mat::Ones(3, 3)));
  EXPECT_TRUE(structurally_equal(face, body_from_json(json::parse(dump(to_json(face)))), 0.0));
}

TEST(Json, RejectsMalformedInput) {
  EXPECT_THROW(body_from_json(json::parse(R"({"type":"cube"})")), std::invalid_argument);
  EXPECT_THROW(body_from_json(json::parse(R"({"type":"ball","center":[0,0]})")), std::invalid_argument);
}

#include <gtest/gtest.h>

#include "facetkit/construct.hpp"
#include "facetkit/probe.hpp"

using namespace facetkit;
using shapes::v;

TEST(Pattern, ParseAndValidate) {
  EXPECT_EQ(Pattern::parse("1,3,6").dims(), (std::vector<int>{1, 3, 6}));
  EXPECT_EQ(Pattern::parse(" 2 , 4 ").dims(), (std::vector<int>{2, 4}));
  EXPECT_TRUE(Pattern::parse("").empty());
  EXPECT_THROW(Pattern::parse("3,2"), std::invalid_argument);
  EXPECT_THROW(Pattern::parse("1,1"), std::invalid_argument);
  EXPECT_THROW(Pattern::parse("0,2"), std::invalid_argument);
  EXPECT_THROW(Pattern::parse("1,x"), std::invalid_argument);
  EXPECT_THROW(Pattern::parse("1,,2"), std::invalid_argument);
  EXPECT_THROW(Pattern::parse("2.5"), std::invalid_argument);
  EXPECT_EQ(Pattern({1, 3, 6}).truncated(), Pattern({1, 3}));
  EXPECT_EQ(Pattern({1, 3, 6}).str(), "(1,3,6)");
}

TEST(Pattern, AllPatternsUpToFive) {
  const auto all = all_patterns(5);
  EXPECT_EQ(all.size(), 32U);
  std::set<std::vector<int>> distinct;
  for (const auto& p : all) distinct.insert(p.dims());
  EXPECT_EQ(distinct.size(), 32U);
}

TEST(Build, AmbientDimensionIsTopEntry) {
  for (const auto& d : all_patterns(5)) {
    if (d.empty()) continue;
    EXPECT_EQ(build_pattern(d).ambient_dim(), d.top()) << d.str();
    EXPECT_EQ(body_dim(build_pattern(d)), d.top()) << d.str();
  }
}

TEST(Build, BaseShapes) {
  EXPECT_EQ(build_pattern(Pattern()).kind(), BodyKind::vpolytope);
  EXPECT_EQ(body_dim(build_pattern(Pattern())), 0);
  EXPECT_TRUE(structurally_equal(build_pattern(Pattern({1})), shapes::segment(), 0.0));
  EXPECT_TRUE(structurally_equal(build_pattern(Pattern({2})), ConvexBody::unit_ball(2), 0.0));
  EXPECT_TRUE(structurally_equal(build_pattern(Pattern({1, 2})), shapes::triangle(), 0.0));
  EXPECT_TRUE(structurally_equal(build_pattern(Pattern({4})), ConvexBody::unit_ball(4), 0.0));
}

TEST(Build, RecursiveStructure) {
  const auto c = build_pattern(Pattern({1, 3, 6}));
  ASSERT_EQ(c.kind(), BodyKind::sum);
  const auto& s = *c.as<Sum>();
  EXPECT_TRUE(structurally_equal(*s.left, ConvexBody::unit_ball(6), 0.0));
  ASSERT_EQ(s.right->kind(), BodyKind::embed);
  EXPECT_TRUE(structurally_equal(*s.right->as<Embed>()->inner, build_pattern(Pattern({1, 3})), 0.0));
}

TEST(Build, LastAxisExposesTheTranslate) {
  for (const auto& d : all_patterns(5)) {
    const auto c = build_pattern(d);
    if (c.kind() != BodyKind::sum) continue;
    const int n = c.ambient_dim();
    const Vec e = unit_vector(n, n - 1);
    EXPECT_DOUBLE_EQ(support_value(c, e), 1.0) << d.str();
    const auto& inner = *c.as<Sum>()->right;
    const auto expected = ConvexBody::sum(ConvexBody::point(e), inner);
    EXPECT_TRUE(structurally_equal(exposed_face(c, e), expected, tol::face)) << d.str();
  }
}

TEST(Catalog, NamesResolve) {
  for (const auto& name : catalog_names()) EXPECT_NO_THROW(catalog(name)) << name;
  EXPECT_THROW(catalog("dodecahedron"), std::invalid_argument);
  EXPECT_EQ(body_dim(catalog("hull-circle-two-points")), 3);
}

TEST(Catalog, Patterns) {
  EXPECT_EQ(face_pattern(catalog("disk")).pattern.dims, (std::set<int>{0, 2}));
  EXPECT_EQ(face_pattern(catalog("triangle")).pattern.dims, (std::set<int>{0, 1, 2}));
  EXPECT_EQ(face_pattern(catalog("ball3")).pattern.dims, (std::set<int>{0, 3}));
  EXPECT_EQ(face_pattern(catalog("tetrahedron")).pattern.dims, (std::set<int>{0, 1, 2, 3}));
  EXPECT_EQ(face_pattern(catalog("stadium2d")).pattern.dims, (std::set<int>{0, 1, 2}));
  EXPECT_EQ(face_pattern(catalog("square-plus-disk")).pattern.dims, (std::set<int>{0, 1, 2}));
  EXPECT_EQ(face_pattern(catalog("hull-circle-two-points")).pattern.dims, (std::set<int>{0, 1, 2, 3}));
  EXPECT_EQ(face_pattern(catalog("point")).pattern.dims, (std::set<int>{0}));
}

#include <gtest/gtest.h>

#include <cmath>

#include "facetkit/linalg.hpp"
#include "facetkit/random.hpp"

using namespace facetkit;

namespace {

Mat random_symmetric(int n, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.gaussian();
  return a;
}

} // namespace

TEST(Jacobi, DiagonalInputIsSortedDescending) {
  Mat a = Mat::Zero(3, 3);
  a.diagonal() << 0.5, 2.0, -1.0;
  const auto e = jacobi_eigen(a);
  EXPECT_DOUBLE_EQ(e.values(0), 2.0);
  EXPECT_DOUBLE_EQ(e.values(1), 0.5);
  EXPECT_DOUBLE_EQ(e.values(2), -1.0);
}

TEST(Jacobi, ReconstructsRandomMatrices) {
  for (int n = 1; n <= 7; ++n) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Mat a = random_symmetric(n, s * 31 + static_cast<std::uint64_t>(n));
      const auto e = jacobi_eigen(a);
      const Mat back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
      EXPECT_LE((back - a).norm(), 1e-9 * std::max(1.0, a.norm()));
      EXPECT_LE((e.vectors.transpose() * e.vectors - Mat::Identity(n, n)).norm(), 1e-10);
      for (int i = 1; i < n; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
    }
  }
}

TEST(Jacobi, AgreesWithEigenSelfAdjointSolver) {
  const Mat a = random_symmetric(6, 99);
  const auto e = jacobi_eigen(a);
  Eigen::SelfAdjointEigenSolver<Mat> ref(a);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(e.values(i), ref.eigenvalues()(5 - i), 1e-10);
}

TEST(Jacobi, RepeatedEigenvalues) {
  Mat q = jacobi_eigen(random_symmetric(4, 3)).vectors;
  Vec d(4);
  d << 1, 1, 1, 0;
  const auto e = jacobi_eigen(q * d.asDiagonal() * q.transpose());
  EXPECT_NEAR(e.values(0), 1.0, 1e-12);
  EXPECT_NEAR(e.values(2), 1.0, 1e-12);
  EXPECT_NEAR(e.values(3), 0.0, 1e-12);
}

TEST(SymFlatten, IsAnIsometryForTheTraceInnerProduct) {
  for (int n = 1; n <= 5; ++n) {
    const Mat a = random_symmetric(n, 10 + static_cast<std::uint64_t>(n));
    const Mat b = random_symmetric(n, 20 + static_cast<std::uint64_t>(n));
    const Vec fa = flatten_sym(a);
    ASSERT_EQ(fa.size(), sym_flat_dim(n));
    EXPECT_NEAR(fa.dot(flatten_sym(b)), (a * b).trace(), 1e-12 * (1 + a.norm() * b.norm()));
    EXPECT_LE((unflatten_sym(fa, n) - a).norm(), 1e-14 * (1 + a.norm()));
  }
}

TEST(AffineRank, CountsHullDimension) {
  std::vector<Vec> pts = {Vec::Zero(3), unit_vector(3, 0), unit_vector(3, 1), unit_vector(3, 0) + unit_vector(3, 1)};
  EXPECT_EQ(affine_rank(pts), 2);
  pts.push_back(unit_vector(3, 2));
  EXPECT_EQ(affine_rank(pts), 3);
  EXPECT_EQ(affine_rank(std::vector<Vec>{Vec::Ones(4)}), 0);
}

TEST(Dedupe, MergesNearCopies) {
  Vec a = Vec::Ones(2);
  Vec b = a;
  b(0) += 1e-13;
  EXPECT_EQ(dedupe_points(std::vector<Vec>{a, b, -a}).size(), 2U);
}

TEST(Rng, CounterAddressingIsReproducible) {
  CounterRng a(5, 1), b(5, 1), c(5, 2);
  EXPECT_EQ(a.next_bits(), b.next_bits());
  EXPECT_NE(CounterRng(5, 1).next_bits(), c.next_bits());
  auto s1 = sample_stream(9, 3, 17), s2 = sample_stream(9, 3, 17);
  EXPECT_EQ(s1.sphere(5), s2.sphere(5));
  EXPECT_NEAR(sample_stream(9, 3, 18).sphere(5).norm(), 1.0, 1e-15);
}

TEST(Rng, GaussianMoments) {
  CounterRng r(1, 1);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = r.gaussian();
    s += g;
    s2 += g * g;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace facetkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double face = 1e-9;   // relative argmax membership
inline constexpr double rank = 1e-8;   // singular-value cutoff for affine rank
inline constexpr double point = 1e-10; // vertex dedupe
inline constexpr double eig = 1e-10;   // Jacobi off-diagonal residual
inline constexpr double zero_dir = 1e-12;
} // namespace tol

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline double max_abs_coord(std::span<const Vec> pts) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, p.cwiseAbs().maxCoeff());
  return m;
}

/// Orthonormal basis (as columns) of the column span of `m`, using the
/// relative singular-value cutoff tol::rank.
inline Mat orthonormal_span(const Mat& m) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol::rank * scale) ++r;
  return svd.matrixU().leftCols(r);
}

/// Orthonormal basis of the orthogonal complement of span(basis) in R^n.
inline Mat orthogonal_complement(const Mat& basis, Eigen::Index n) {
  if (basis.cols() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol::rank * std::max(1.0, s(0))) ++r;
  return svd.matrixU().rightCols(n - r);
}

/// Direction space of the affine hull of a point set.
inline Mat affine_directions(std::span<const Vec> pts) {
  if (pts.empty()) return Mat(0, 0);
  const auto n = pts.front().size();
  if (pts.size() == 1) return Mat(n, 0);
  Mat diffs(n, static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t i = 1; i < pts.size(); ++i)
    diffs.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
  return orthonormal_span(diffs);
}

inline int affine_rank(std::span<const Vec> pts) {
  return static_cast<int>(affine_directions(pts).cols());
}

/// Removes points within tol::point (scaled) of an earlier point.
inline std::vector<Vec> dedupe_points(std::span<const Vec> pts) {
  const double scale = std::max(1.0, max_abs_coord(pts));
  std::vector<Vec> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out)
      if ((p - q).norm() <= tol::point * scale) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

struct SymmetricEigen {
  Vec values;   // descending
  Mat vectors;  // columns, matching `values`
  double residual = 0.0;
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for real symmetric matrices. Sweeps run in
/// fixed row-major (p, q) order until the off-diagonal Frobenius norm drops
/// below tol::eig relative to the matrix norm.
inline SymmetricEigen jacobi_eigen(Mat a, int max_sweeps = 100) {
  require(a.rows() == a.cols(), "jacobi_eigen: matrix must be square");
  const Eigen::Index n = a.rows();
  Mat v = Mat::Identity(n, n);
  const double norm = std::max(a.norm(), 1e-300);

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > tol::eig * norm; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.sweeps = sweep;
  out.residual = off_norm() / norm;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto i, auto j) { return a(i, i) > a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Symmetric n x n matrices flattened isometrically into R^{n(n+1)/2}:
// upper triangle in row-major order, off-diagonal entries scaled by sqrt(2),
// so that <flatten(A), flatten(B)> = tr(AB).
inline Eigen::Index sym_flat_dim(Eigen::Index n) { return n * (n + 1) / 2; }

inline Vec flatten_sym(const Mat& m) {
  const Eigen::Index n = m.rows();
  Vec out(sym_flat_dim(n));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      out(k++) = (i == j) ? m(i, i) : std::sqrt(2.0) * m(i, j);
  return out;
}

inline Mat unflatten_sym(const Vec& v, Eigen::Index n) {
  require(v.size() == sym_flat_dim(n), "unflatten_sym: size mismatch");
  Mat m(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double x = (i == j) ? v(k) : v(k) / std::sqrt(2.0);
      m(i, j) = x;
      m(j, i) = x;
      ++k;
    }
  return m;
}

inline Vec unit_vector(Eigen::Index n, Eigen::Index i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

} // namespace facetkit

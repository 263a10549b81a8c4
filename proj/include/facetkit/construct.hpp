#pragma once

#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "facetkit/bodies.hpp"

namespace facetkit {

/// Strictly increasing sequence of positive face dimensions. The empty
/// pattern describes a point.
class Pattern {
 public:
  Pattern() = default;

  explicit Pattern(std::vector<int> dims) : dims_(std::move(dims)) {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      require(dims_[i] >= 1, "pattern: entries must be positive");
      require(i == 0 || dims_[i] > dims_[i - 1], "pattern: entries must be strictly increasing");
    }
  }

  /// Parses "1,3,6" (whitespace allowed; empty string is the empty pattern).
  static Pattern parse(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      if (first == std::string::npos) {
        require(text.find_first_not_of(" \t,") == std::string::npos, "pattern: empty entry in \"" + text + "\"");
        continue;
      }
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(item, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("pattern: \"" + item + "\" is not an integer");
      }
      require(item.find_first_not_of(" \t", used) == std::string::npos,
              "pattern: \"" + item + "\" is not an integer");
      dims.push_back(v);
    }
    return Pattern(std::move(dims));
  }

  const std::vector<int>& dims() const { return dims_; }
  bool empty() const { return dims_.empty(); }
  std::size_t size() const { return dims_.size(); }
  int top() const { return dims_.empty() ? 0 : dims_.back(); }

  /// The pattern with its largest entry removed.
  Pattern truncated() const {
    require(!dims_.empty(), "pattern: cannot truncate the empty pattern");
    return Pattern(std::vector<int>(dims_.begin(), dims_.end() - 1));
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < dims_.size(); ++i) s += (i ? "," : "") + std::to_string(dims_[i]);
    return s + ")";
  }

  bool operator==(const Pattern&) const = default;

 private:
  std::vector<int> dims_;
};

/// Every strictly increasing sequence drawn from {1, ..., max_entry},
/// including the empty one.
inline std::vector<Pattern> all_patterns(int max_entry) {
  std::vector<Pattern> out;
  for (unsigned mask = 0; mask < (1u << max_entry); ++mask) {
    std::vector<int> d;
    for (int i = 0; i < max_entry; ++i)
      if (mask & (1u << i)) d.push_back(i + 1);
    out.emplace_back(std::move(d));
  }
  return out;
}

namespace shapes {

inline Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

inline ConvexBody segment() { return ConvexBody::vpolytope({v({0}), v({1})}); }
inline ConvexBody disk() { return ConvexBody::unit_ball(2); }
inline ConvexBody triangle() { return ConvexBody::vpolytope({v({0, 0}), v({1, 0}), v({0, 1})}); }

inline ConvexBody tetrahedron() {
  return ConvexBody::vpolytope({v({0, 0, 0}), v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1})});
}

inline ConvexBody unit_square() {
  return ConvexBody::vpolytope({v({0, 0}), v({1, 0}), v({1, 1}), v({0, 1})});
}

} // namespace shapes

/// Body of ambient dimension d_k whose faces have exactly the dimensions
/// {0} u d. Patterns with top entry <= 2 use the planar base shapes; a
/// single entry n >= 3 is the unit n-ball; otherwise the body is
///   Ball(n) + Embed(build_pattern(d minus its top), n),
/// where the embedded body occupies the leading coordinates, so the last
/// coordinate axis exposes a translate of it.
inline ConvexBody build_pattern(const Pattern& d) {
  const auto& dims = d.dims();
  if (dims.empty()) return ConvexBody::point(Vec::Zero(1));
  if (dims == std::vector<int>{1}) return shapes::segment();
  if (dims == std::vector<int>{2}) return shapes::disk();
  if (dims == std::vector<int>{1, 2}) return shapes::triangle();
  const int n = d.top();
  if (dims.size() == 1) return ConvexBody::unit_ball(n);
  return ConvexBody::sum(ConvexBody::unit_ball(n), ConvexBody::embed(build_pattern(d.truncated()), n));
}

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "point", "segment", "disk", "triangle", "ball3", "tetrahedron", "hull-circle-two-points", "stadium2d",
      "square-plus-disk"};
  return names;
}

/// Named fixtures. "hull-circle-two-points" is a polytopal stand-in (64-gon
/// in z = 0 plus the apexes (0,0,+-1)) for the hull of a circle and two
/// points; it is meant for mesh export, its own pattern is (1,2,3).
inline ConvexBody catalog(const std::string& name) {
  using shapes::v;
  if (name == "point") return ConvexBody::point(Vec::Zero(1));
  if (name == "segment") return shapes::segment();
  if (name == "disk") return shapes::disk();
  if (name == "triangle") return shapes::triangle();
  if (name == "ball3") return ConvexBody::unit_ball(3);
  if (name == "tetrahedron") return shapes::tetrahedron();
  if (name == "hull-circle-two-points") {
    std::vector<Vec> pts;
    for (int i = 0; i < 64; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 64.0;
      pts.push_back(v({std::cos(t), std::sin(t), 0.0}));
    }
    pts.push_back(v({0, 0, 1}));
    pts.push_back(v({0, 0, -1}));
    return ConvexBody::vpolytope(std::move(pts));
  }
  if (name == "stadium2d")
    return ConvexBody::sum(ConvexBody::unit_ball(2), ConvexBody::vpolytope({v({0, 0}), v({2, 0})}));
  if (name == "square-plus-disk") return ConvexBody::sum(ConvexBody::unit_ball(2), shapes::unit_square());
  throw std::invalid_argument("catalog: unknown fixture \"" + name + "\"");
}

} // namespace facetkit

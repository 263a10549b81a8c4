#pragma once

// JSON documents for bodies:
//   {"type":"ball","dim":3,"center":[0,0,0],"radius":1}
//   {"type":"vpolytope","vertices":[[...],...]}
//   {"type":"embed","dim":5,"inner":{...}}
//   {"type":"sum","left":{...},"right":{...}}
//   {"type":"spectrahedron","n":3}
//   {"type":"affine_image","map":[[row],...],"offset":[...],"inner":{...}}
// The last form only appears for faces of spectrahedra.

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "facetkit/bodies.hpp"

namespace facetkit {

using json = nlohmann::json;

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Vec vec_from_json(const json& a) {
  require(a.is_array(), "json: expected a numeric array");
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(a[i].is_number(), "json: expected a number");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

inline json to_json(const ConvexBody& body) {
  return std::visit(
      [&](const auto& node) -> json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {{"type", "ball"}, {"dim", body.ambient_dim()}, {"center", vec_to_json(node.center)},
                  {"radius", node.radius}};
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          json verts = json::array();
          for (const auto& v : node.vertices) verts.push_back(vec_to_json(v));
          return {{"type", "vpolytope"}, {"vertices", verts}};
        } else if constexpr (std::is_same_v<T, Embed>) {
          return {{"type", "embed"}, {"dim", node.dim}, {"inner", to_json(*node.inner)}};
        } else if constexpr (std::is_same_v<T, Sum>) {
          return {{"type", "sum"}, {"left", to_json(*node.left)}, {"right", to_json(*node.right)}};
        } else if constexpr (std::is_same_v<T, Spectrahedron>) {
          return {{"type", "spectrahedron"}, {"n", node.n}};
        } else {
          json rows = json::array();
          for (Eigen::Index i = 0; i < node.map.rows(); ++i) rows.push_back(vec_to_json(node.map.row(i).transpose()));
          return {{"type", "affine_image"}, {"map", rows}, {"offset", vec_to_json(node.offset)},
                  {"inner", to_json(*node.inner)}};
        }
      },
      body.node());
}

inline ConvexBody body_from_json(const json& j) {
  require(j.is_object() && j.contains("type") && j["type"].is_string(), "json: body needs a string \"type\"");
  const auto type = j["type"].get<std::string>();
  auto field = [&](const char* key) -> const json& {
    require(j.contains(key), "json: " + type + " body is missing \"" + key + "\"");
    return j[key];
  };
  if (type == "ball") {
    Vec center = vec_from_json(field("center"));
    if (j.contains("dim"))
      require(j["dim"].get<int>() == center.size(), "json: ball dim does not match center length");
    return ConvexBody::ball(std::move(center), field("radius").get<double>());
  }
  if (type == "vpolytope") {
    std::vector<Vec> verts;
    for (const auto& v : field("vertices")) verts.push_back(vec_from_json(v));
    return ConvexBody::vpolytope(std::move(verts));
  }
  if (type == "embed") return ConvexBody::embed(body_from_json(field("inner")), field("dim").get<int>());
  if (type == "sum") return ConvexBody::sum(body_from_json(field("left")), body_from_json(field("right")));
  if (type == "spectrahedron") return ConvexBody::spectrahedron(field("n").get<int>());
  if (type == "affine_image") {
    const auto& rows = field("map");
    require(rows.is_array() && !rows.empty(), "json: affine_image map must be a nonempty matrix");
    const Vec first = vec_from_json(rows[0]);
    Mat map(static_cast<Eigen::Index>(rows.size()), first.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vec r = vec_from_json(rows[i]);
      require(r.size() == first.size(), "json: affine_image map rows differ in length");
      map.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    return ConvexBody::affine_image(body_from_json(field("inner")), std::move(map), vec_from_json(field("offset")));
  }
  throw std::invalid_argument("json: unknown body type \"" + type + "\"");
}

inline std::string dump(const json& j) { return j.dump(2); }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

} // namespace facetkit

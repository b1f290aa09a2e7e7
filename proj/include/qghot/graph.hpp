#pragma once

// Compact metric graphs: discrete connectivity plus positive edge lengths.
//
// Every graph in the library is produced by build_graph() from a
// GraphDescription, so the validation rules live in one place. The order of
// vertices and edges in the description is the canonical order used by all
// downstream computations (basis canonicalization, sign conventions, reports).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include "qghot/error.hpp"

namespace qghot {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

struct EdgeRecord {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;
};

struct GraphDescription {
  std::string name;
  std::vector<std::string> vertices;
  std::vector<EdgeRecord> edges;
};

enum class Side : std::uint8_t { Start, End };

/// One end of an edge: Start is offset 0 (origin vertex), End is offset L (terminal vertex).
struct EdgeEnd {
  EdgeIndex edge = 0;
  Side side = Side::Start;

  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
};

struct Edge {
  std::string id;
  VertexIndex origin = 0;
  VertexIndex terminal = 0;

  bool is_loop() const noexcept { return origin == terminal; }
};

class DiscreteGraph {
 public:
  DiscreteGraph() = default;
  DiscreteGraph(std::vector<std::string> vertices, std::vector<Edge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)), ends_(vertices_.size()) {
    for (EdgeIndex e = 0; e < edges_.size(); ++e) {
      ends_[edges_[e].origin].push_back({e, Side::Start});
      ends_[edges_[e].terminal].push_back({e, Side::End});
    }
  }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::string& vertex_name(VertexIndex v) const { return vertices_.at(v); }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }

  /// Edge ends incident to v, in edge order; a loop contributes both of its ends.
  const std::vector<EdgeEnd>& ends_at(VertexIndex v) const { return ends_.at(v); }
  std::size_t degree(VertexIndex v) const { return ends_.at(v).size(); }

  VertexIndex vertex_of(EdgeEnd end) const {
    const Edge& e = edges_.at(end.edge);
    return end.side == Side::Start ? e.origin : e.terminal;
  }

  /// The vertex at the far end of an edge, seen from one of its ends.
  VertexIndex opposite(EdgeEnd end) const {
    const Edge& e = edges_.at(end.edge);
    return end.side == Side::Start ? e.terminal : e.origin;
  }

  std::optional<VertexIndex> find_vertex(const std::string& name) const {
    auto it = std::find(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end()) return std::nullopt;
    return static_cast<VertexIndex>(it - vertices_.begin());
  }

  std::optional<EdgeIndex> find_edge(const std::string& id) const {
    for (EdgeIndex e = 0; e < edges_.size(); ++e) {
      if (edges_[e].id == id) return e;
    }
    return std::nullopt;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeEnd>> ends_;
};

class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::string name, DiscreteGraph graph, std::vector<double> lengths)
      : name_(std::move(name)), graph_(std::move(graph)), lengths_(std::move(lengths)) {
    total_length_ = std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
  }

  const std::string& name() const noexcept { return name_; }
  const DiscreteGraph& graph() const noexcept { return graph_; }
  const std::vector<double>& lengths() const noexcept { return lengths_; }

  std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  const Edge& edge(EdgeIndex e) const { return graph_.edge(e); }
  double length(EdgeIndex e) const { return lengths_.at(e); }
  std::size_t degree(VertexIndex v) const { return graph_.degree(v); }
  double total_length() const noexcept { return total_length_; }

  double max_edge_length() const {
    return lengths_.empty() ? 0.0 : *std::max_element(lengths_.begin(), lengths_.end());
  }
  double min_edge_length() const {
    return lengths_.empty() ? 0.0 : *std::min_element(lengths_.begin(), lengths_.end());
  }

  /// Point-coincidence tolerance, scale invariant.
  double point_tolerance() const noexcept { return 1e-9 * total_length_; }

 private:
  std::string name_;
  DiscreteGraph graph_;
  std::vector<double> lengths_;
  double total_length_ = 0.0;
};

// ---------------------------------------------------------------------------
// Construction and validation

namespace detail {

/// Connected components of a vertex set under the given edges (union-find).
inline std::vector<std::size_t> component_labels(std::size_t vertex_count,
                                                 const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::size_t> parent(vertex_count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (auto [a, b] : edges) {
    auto ra = find(a);
    auto rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  // Relabel roots densely in order of first appearance.
  std::vector<std::size_t> label(vertex_count);
  std::unordered_map<std::size_t, std::size_t> dense;
  for (std::size_t v = 0; v < vertex_count; ++v) {
    auto r = find(v);
    auto [it, inserted] = dense.emplace(r, dense.size());
    label[v] = it->second;
  }
  return label;
}

}  // namespace detail

inline MetricGraph build_graph(const GraphDescription& description) {
  if (description.vertices.empty()) {
    fail(ErrorCode::DisconnectedGraph, "graph '" + description.name + "' has no vertices");
  }
  if (description.edges.empty()) {
    fail(ErrorCode::NonpositiveLength, "graph '" + description.name + "' has no edges (total length 0)");
  }
  std::unordered_map<std::string, VertexIndex> vertex_index;
  for (VertexIndex v = 0; v < description.vertices.size(); ++v) {
    if (!vertex_index.emplace(description.vertices[v], v).second) {
      fail(ErrorCode::DuplicateId, "vertex '" + description.vertices[v] + "' listed twice");
    }
  }
  std::unordered_map<std::string, EdgeIndex> edge_index;
  std::vector<Edge> edges;
  std::vector<double> lengths;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& rec : description.edges) {
    if (!edge_index.emplace(rec.id, edges.size()).second) {
      fail(ErrorCode::DuplicateId, "edge '" + rec.id + "' listed twice");
    }
    auto from = vertex_index.find(rec.from);
    auto to = vertex_index.find(rec.to);
    if (from == vertex_index.end()) {
      fail(ErrorCode::DanglingEndpoint, "edge '" + rec.id + "' references unknown vertex '" + rec.from + "'");
    }
    if (to == vertex_index.end()) {
      fail(ErrorCode::DanglingEndpoint, "edge '" + rec.id + "' references unknown vertex '" + rec.to + "'");
    }
    if (!(rec.length > 0.0) || !std::isfinite(rec.length)) {
      std::ostringstream msg;
      msg << "edge '" << rec.id << "' has length " << rec.length;
      fail(ErrorCode::NonpositiveLength, msg.str());
    }
    edges.push_back({rec.id, from->second, to->second});
    lengths.push_back(rec.length);
    pairs.emplace_back(from->second, to->second);
  }
  auto labels = detail::component_labels(description.vertices.size(), pairs);
  if (*std::max_element(labels.begin(), labels.end()) != 0) {
    fail(ErrorCode::DisconnectedGraph, "graph '" + description.name + "' is not connected");
  }
  return MetricGraph(description.name, DiscreteGraph(description.vertices, std::move(edges)),
                     std::move(lengths));
}

inline GraphDescription describe(const MetricGraph& g) {
  GraphDescription d;
  d.name = g.name();
  d.vertices = g.graph().vertices();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    d.edges.push_back({edge.id, g.graph().vertex_name(edge.origin), g.graph().vertex_name(edge.terminal),
                       g.length(e)});
  }
  return d;
}

/// Returns the same topology with new edge lengths (same order as the edges).
inline MetricGraph with_lengths(const MetricGraph& g, const std::vector<double>& lengths) {
  auto d = describe(g);
  if (lengths.size() != d.edges.size()) fail(ErrorCode::BadParameter, "length vector size mismatch");
  for (std::size_t i = 0; i < lengths.size(); ++i) d.edges[i].length = lengths[i];
  return build_graph(d);
}

/// Splits a (possibly disconnected) description into connected descriptions,
/// ordered by the first vertex of each component.
inline std::vector<GraphDescription> split_components(const GraphDescription& d) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) index.emplace(d.vertices[v], v);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : d.edges) pairs.emplace_back(index.at(e.from), index.at(e.to));
  auto labels = detail::component_labels(d.vertices.size(), pairs);
  std::size_t count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<GraphDescription> parts(count);
  for (std::size_t c = 0; c < count; ++c) {
    parts[c].name = count == 1 ? d.name : d.name + "#" + std::to_string(c);
  }
  for (std::size_t v = 0; v < d.vertices.size(); ++v) parts[labels[v]].vertices.push_back(d.vertices[v]);
  for (const auto& e : d.edges) parts[labels[index.at(e.from)]].edges.push_back(e);
  return parts;
}

// ---------------------------------------------------------------------------
// Points on the graph

/// A location on the graph as (edge, arclength offset from the origin vertex).
struct GraphPoint {
  EdgeIndex edge = 0;
  double offset = 0.0;
};

inline void validate_point(const MetricGraph& g, const GraphPoint& p) {
  if (p.edge >= g.edge_count()) fail(ErrorCode::InvalidPoint, "edge index out of range");
  double tol = g.point_tolerance();
  if (!(p.offset >= -tol && p.offset <= g.length(p.edge) + tol)) {
    std::ostringstream msg;
    msg << "offset " << p.offset << " outside [0, " << g.length(p.edge) << "] on edge '" << g.edge(p.edge).id
        << "'";
    fail(ErrorCode::InvalidPoint, msg.str());
  }
}

/// Vertex at p, if p lies within the point tolerance of an endpoint of its edge.
inline std::optional<VertexIndex> vertex_at(const MetricGraph& g, const GraphPoint& p) {
  double tol = g.point_tolerance();
  if (p.offset <= tol) return g.edge(p.edge).origin;
  if (p.offset >= g.length(p.edge) - tol) return g.edge(p.edge).terminal;
  return std::nullopt;
}

/// Canonical representative of a vertex: its first incident edge end.
inline GraphPoint vertex_point(const MetricGraph& g, VertexIndex v) {
  const auto& ends = g.graph().ends_at(v);
  if (ends.empty()) fail(ErrorCode::InvalidPoint, "vertex has no incident edge");
  const EdgeEnd& first = ends.front();
  return {first.edge, first.side == Side::Start ? 0.0 : g.length(first.edge)};
}

inline GraphPoint canonicalize(const MetricGraph& g, const GraphPoint& p) {
  if (auto v = vertex_at(g, p)) return vertex_point(g, *v);
  return p;
}

inline bool same_point(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q) {
  auto vp = vertex_at(g, p);
  auto vq = vertex_at(g, q);
  if (vp || vq) return vp == vq;
  return p.edge == q.edge && std::abs(p.offset - q.offset) <= g.point_tolerance();
}

/// Total order on canonical points: vertices first by index, then edge interiors.
inline bool point_less(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q) {
  auto vp = vertex_at(g, p);
  auto vq = vertex_at(g, q);
  if (vp && vq) return *vp < *vq;
  if (vp) return true;
  if (vq) return false;
  if (p.edge != q.edge) return p.edge < q.edge;
  return p.offset < q.offset - g.point_tolerance();
}

inline std::string describe_point(const MetricGraph& g, const GraphPoint& p) {
  if (auto v = vertex_at(g, p)) return g.graph().vertex_name(*v);
  std::ostringstream os;
  os.precision(12);
  os << g.edge(p.edge).id << "@" << p.offset;
  return os.str();
}

// ---------------------------------------------------------------------------
// Graph description files (JSON)

inline GraphDescription parse_description(const nlohmann::json& j) {
  auto bad = [](const std::string& what) { fail(ErrorCode::BadParameter, "graph description: " + what); };
  if (!j.is_object()) bad("top level must be an object");
  GraphDescription d;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("'name' must be a string");
    d.name = j["name"].get<std::string>();
  }
  if (!j.contains("vertices") || !j["vertices"].is_array()) bad("'vertices' must be a list of strings");
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) bad("vertex ids must be strings");
    d.vertices.push_back(v.get<std::string>());
  }
  if (!j.contains("edges") || !j["edges"].is_array()) bad("'edges' must be a list of records");
  for (const auto& e : j["edges"]) {
    if (!e.is_object()) bad("edge records must be objects");
    for (const char* key : {"id", "from", "to"}) {
      if (!e.contains(key) || !e[key].is_string()) bad(std::string("edge field '") + key + "' must be a string");
    }
    if (!e.contains("length") || !e["length"].is_number()) bad("edge field 'length' must be a number");
    d.edges.push_back({e["id"].get<std::string>(), e["from"].get<std::string>(), e["to"].get<std::string>(),
                       e["length"].get<double>()});
  }
  return d;
}

inline nlohmann::json to_json(const GraphDescription& d) {
  nlohmann::json j;
  j["name"] = d.name;
  j["vertices"] = d.vertices;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : d.edges) {
    j["edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"length", e.length}});
  }
  return j;
}

inline MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadParameter, "cannot open graph file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::BadParameter, "graph file '" + path + "' is not valid JSON: " + e.what());
  }
  return build_graph(parse_description(j));
}

}  // namespace qghot

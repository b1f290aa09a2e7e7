#pragma once

// Local modifications of metric graphs: splitting edges, attaching pendants,
// gluing and disconnecting at points, changing edge lengths.

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qghot/graph.hpp"

namespace qghot {

namespace detail {

inline std::string fresh_name(const std::vector<std::string>& taken, const std::string& base) {
  std::set<std::string> used(taken.begin(), taken.end());
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "'" + std::to_string(i);
    if (!used.count(candidate)) return candidate;
  }
}

inline std::vector<std::string> edge_ids(const GraphDescription& d) {
  std::vector<std::string> ids;
  for (const auto& e : d.edges) ids.push_back(e.id);
  return ids;
}

}  // namespace detail

/// Result of splitting: the new graph and, per requested point, the name of
/// the vertex now sitting there.
struct SplitResult {
  GraphDescription description;
  std::vector<std::string> vertex_names;
};

/// Splits edges at every interior point in `points` (points at vertices are
/// passed through). Pieces of edge e are named e.1, e.2, ... in order from
/// the origin and take e's place in the edge order.
inline SplitResult split_at_points(const MetricGraph& g, const std::vector<GraphPoint>& points) {
  const double tol = g.point_tolerance();
  std::map<EdgeIndex, std::vector<double>> cuts;
  for (const auto& p : points) {
    validate_point(g, p);
    if (!vertex_at(g, p)) cuts[p.edge].push_back(p.offset);
  }
  for (auto& [e, offs] : cuts) {
    std::sort(offs.begin(), offs.end());
    std::vector<double> unique;
    for (double o : offs) {
      if (unique.empty() || o - unique.back() > tol) unique.push_back(o);
    }
    offs = unique;
  }

  GraphDescription src = describe(g);
  SplitResult out;
  out.description.name = src.name;
  out.description.vertices = src.vertices;
  std::map<std::pair<EdgeIndex, std::size_t>, std::string> cut_vertex;
  for (EdgeIndex e = 0; e < src.edges.size(); ++e) {
    const EdgeRecord& rec = src.edges[e];
    auto it = cuts.find(e);
    if (it == cuts.end()) {
      out.description.edges.push_back(rec);
      continue;
    }
    const auto& offs = it->second;
    std::string prev = rec.from;
    double prev_off = 0.0;
    for (std::size_t i = 0; i <= offs.size(); ++i) {
      std::string next;
      double next_off;
      if (i < offs.size()) {
        next = detail::fresh_name(out.description.vertices, rec.id + "~" + std::to_string(i + 1));
        out.description.vertices.push_back(next);
        cut_vertex[{e, i}] = next;
        next_off = offs[i];
      } else {
        next = rec.to;
        next_off = rec.length;
      }
      out.description.edges.push_back({rec.id + "." + std::to_string(i + 1), prev, next, next_off - prev_off});
      prev = next;
      prev_off = next_off;
    }
  }
  for (const auto& p : points) {
    if (auto v = vertex_at(g, p)) {
      out.vertex_names.push_back(g.graph().vertex_name(*v));
      continue;
    }
    const auto& offs = cuts.at(p.edge);
    std::size_t best = 0;
    for (std::size_t i = 1; i < offs.size(); ++i) {
      if (std::abs(offs[i] - p.offset) < std::abs(offs[best] - p.offset)) best = i;
    }
    out.vertex_names.push_back(cut_vertex.at({p.edge, best}));
  }
  return out;
}

/// Splits one edge at an interior point; returns the graph and the new vertex.
inline std::pair<MetricGraph, VertexIndex> split_edge(const MetricGraph& g, const GraphPoint& at) {
  auto r = split_at_points(g, {at});
  MetricGraph out = build_graph(r.description);
  return {out, *out.graph().find_vertex(r.vertex_names.front())};
}

inline MetricGraph attach_pendant(const MetricGraph& g, const GraphPoint& at, double length,
                                  const std::string& leaf_name = "leaf", const std::string& edge_name = "pendant") {
  auto r = split_at_points(g, {at});
  GraphDescription d = r.description;
  std::string leaf = detail::fresh_name(d.vertices, leaf_name);
  std::string id = detail::fresh_name(detail::edge_ids(d), edge_name);
  d.vertices.push_back(leaf);
  d.edges.push_back({id, r.vertex_names.front(), leaf, length});
  return build_graph(d);
}

/// Identifies v2 with v1 (v2 disappears; its edges now end at v1).
inline MetricGraph glue(const MetricGraph& g, VertexIndex v1, VertexIndex v2) {
  if (v1 >= g.vertex_count() || v2 >= g.vertex_count()) fail(ErrorCode::InvalidPoint, "vertex index out of range");
  if (v1 == v2) return g;
  GraphDescription d = describe(g);
  const std::string keep = d.vertices[v1];
  const std::string drop = d.vertices[v2];
  for (auto& e : d.edges) {
    if (e.from == drop) e.from = keep;
    if (e.to == drop) e.to = keep;
  }
  d.vertices.erase(d.vertices.begin() + static_cast<std::ptrdiff_t>(v2));
  return build_graph(d);
}

/// Replaces the vertex at each point by one new degree-one vertex per
/// incident edge end (interior points are split first). Returns the
/// connected components in order of their first vertex.
inline std::vector<MetricGraph> disconnect(const MetricGraph& g, const std::vector<GraphPoint>& points) {
  auto r = split_at_points(g, points);
  GraphDescription d = r.description;
  std::set<std::string> targets(r.vertex_names.begin(), r.vertex_names.end());
  std::vector<std::string> vertices;
  std::map<std::string, int> uses;
  for (const auto& v : d.vertices) {
    if (!targets.count(v)) vertices.push_back(v);
  }
  std::vector<std::string> all_names = d.vertices;
  auto detach = [&](std::string& endpoint) {
    if (!targets.count(endpoint)) return;
    std::string name = detail::fresh_name(all_names, endpoint + "#" + std::to_string(uses[endpoint]++));
    all_names.push_back(name);
    vertices.push_back(name);
    endpoint = name;
  };
  for (auto& e : d.edges) {
    detach(e.from);
    detach(e.to);
  }
  d.vertices = vertices;
  std::vector<MetricGraph> parts;
  for (const auto& part : split_components(d)) parts.push_back(build_graph(part));
  return parts;
}

inline std::vector<MetricGraph> disconnect(const MetricGraph& g, const GraphPoint& at) {
  return disconnect(g, std::vector<GraphPoint>{at});
}

inline MetricGraph set_edge_length(const MetricGraph& g, EdgeIndex e, double new_length) {
  if (e >= g.edge_count()) fail(ErrorCode::InvalidPoint, "edge index out of range");
  auto lengths = g.lengths();
  lengths[e] = new_length;
  return with_lengths(g, lengths);
}

struct AttachPendant {
  GraphPoint at;
  double length = 0.0;
};
struct SplitEdge {
  GraphPoint at;
};
struct Glue {
  VertexIndex v1 = 0;
  VertexIndex v2 = 0;
};
struct Disconnect {
  GraphPoint at;
};
struct ShrinkEdge {
  EdgeIndex edge = 0;
  double new_length = 0.0;
};

using SurgeryAction = std::variant<AttachPendant, SplitEdge, Glue, Disconnect, ShrinkEdge>;

/// Applies one action; every action except Disconnect yields exactly one graph.
inline std::vector<MetricGraph> surgery(const MetricGraph& g, const SurgeryAction& action) {
  struct Visitor {
    const MetricGraph& g;
    std::vector<MetricGraph> operator()(const AttachPendant& a) const { return {attach_pendant(g, a.at, a.length)}; }
    std::vector<MetricGraph> operator()(const SplitEdge& a) const { return {split_edge(g, a.at).first}; }
    std::vector<MetricGraph> operator()(const Glue& a) const { return {glue(g, a.v1, a.v2)}; }
    std::vector<MetricGraph> operator()(const Disconnect& a) const { return disconnect(g, a.at); }
    std::vector<MetricGraph> operator()(const ShrinkEdge& a) const {
      return {set_edge_length(g, a.edge, a.new_length)};
    }
  };
  return std::visit(Visitor{g}, action);
}

}  // namespace qghot

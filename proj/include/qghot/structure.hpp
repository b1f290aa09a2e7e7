#pragma once

// Combinatorial decompositions: Betti number, boundary, bridges, the doubly
// connected part, and suppression of degree-two vertices.

#include <functional>
#include <string>
#include <vector>

#include "qghot/graph.hpp"

namespace qghot {

/// Vertex/edge membership inside a parent graph. An edge flag means the whole
/// closed edge minus whatever endpoints are absent from the vertex set.
struct Subgraph {
  std::vector<bool> vertices;
  std::vector<bool> edges;

  bool empty() const {
    for (bool b : vertices) if (b) return false;
    for (bool b : edges) if (b) return false;
    return true;
  }

  std::size_t vertex_count() const { return static_cast<std::size_t>(std::count(vertices.begin(), vertices.end(), true)); }
  std::size_t edge_count() const { return static_cast<std::size_t>(std::count(edges.begin(), edges.end(), true)); }

  bool contains(const MetricGraph& g, const GraphPoint& p) const {
    if (auto v = vertex_at(g, p)) return vertices.at(*v);
    return edges.at(p.edge);
  }
};

inline std::size_t betti(const MetricGraph& g) {
  return g.edge_count() + 1 - g.vertex_count();
}

inline Subgraph boundary(const MetricGraph& g) {
  Subgraph s{std::vector<bool>(g.vertex_count(), false), std::vector<bool>(g.edge_count(), false)};
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) s.vertices[v] = g.degree(v) == 1;
  return s;
}

inline std::vector<VertexIndex> boundary_vertices(const MetricGraph& g) {
  std::vector<VertexIndex> out;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 1) out.push_back(v);
  }
  return out;
}

/// Bridge flags per edge (Tarjan low-link, tracking the tree edge by id so
/// parallel edges are handled).
inline std::vector<bool> bridge_flags(const DiscreteGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> is_bridge(g.edge_count(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  std::function<void(VertexIndex, std::optional<EdgeIndex>)> dfs = [&](VertexIndex v,
                                                                        std::optional<EdgeIndex> via) {
    disc[v] = low[v] = timer++;
    for (const EdgeEnd& end : g.ends_at(v)) {
      if (via && end.edge == *via) continue;
      VertexIndex w = g.opposite(end);
      if (disc[w] < 0) {
        dfs(w, end.edge);
        low[v] = std::min(low[v], low[w]);
        if (low[w] > disc[v]) is_bridge[end.edge] = true;
      } else {
        low[v] = std::min(low[v], disc[w]);
      }
    }
  };
  for (VertexIndex v = 0; v < n; ++v) {
    if (disc[v] < 0) dfs(v, std::nullopt);
  }
  return is_bridge;
}

inline std::vector<EdgeIndex> bridges(const MetricGraph& g) {
  auto flags = bridge_flags(g.graph());
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < flags.size(); ++e) {
    if (flags[e]) out.push_back(e);
  }
  return out;
}

struct DoublyConnectedPart {
  Subgraph closure;   // D: all points lying on some cycle
  Subgraph interior;  // int D: D without the vertices where a bridge attaches
};

inline DoublyConnectedPart doubly_connected_part(const MetricGraph& g) {
  auto flags = bridge_flags(g.graph());
  DoublyConnectedPart d;
  d.closure = {std::vector<bool>(g.vertex_count(), false), std::vector<bool>(g.edge_count(), false)};
  std::vector<bool> touches_bridge(g.vertex_count(), false);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (flags[e]) {
      touches_bridge[edge.origin] = true;
      touches_bridge[edge.terminal] = true;
      continue;
    }
    d.closure.edges[e] = true;
    d.closure.vertices[edge.origin] = true;
    d.closure.vertices[edge.terminal] = true;
  }
  d.interior = d.closure;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (touches_bridge[v]) d.interior.vertices[v] = false;
  }
  return d;
}

inline bool is_tree(const MetricGraph& g) { return betti(g) == 0; }

/// Merges every degree-two vertex whose two ends belong to distinct edges.
/// A graph that is a single cycle keeps one vertex carrying a loop.
inline MetricGraph suppress_degree_two(const MetricGraph& g) {
  GraphDescription d = describe(g);
  for (;;) {
    std::vector<std::vector<std::pair<std::size_t, Side>>> ends(d.vertices.size());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t v = 0; v < d.vertices.size(); ++v) index.emplace(d.vertices[v], v);
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
      ends[index.at(d.edges[e].from)].emplace_back(e, Side::Start);
      ends[index.at(d.edges[e].to)].emplace_back(e, Side::End);
    }
    std::optional<std::size_t> target;
    for (std::size_t v = 0; v < d.vertices.size() && !target; ++v) {
      if (ends[v].size() == 2 && ends[v][0].first != ends[v][1].first) target = v;
    }
    if (!target) break;
    auto [e1, s1] = ends[*target][0];
    auto [e2, s2] = ends[*target][1];
    // Orient the merged edge: far end of e1 -> v -> far end of e2.
    const EdgeRecord a = d.edges[e1];
    const EdgeRecord b = d.edges[e2];
    EdgeRecord merged;
    merged.id = a.id;
    merged.from = s1 == Side::End ? a.from : a.to;
    merged.to = s2 == Side::Start ? b.to : b.from;
    merged.length = a.length + b.length;
    d.edges[e1] = merged;
    d.edges.erase(d.edges.begin() + static_cast<std::ptrdiff_t>(e2));
    d.vertices.erase(d.vertices.begin() + static_cast<std::ptrdiff_t>(*target));
  }
  return build_graph(d);
}

}  // namespace qghot

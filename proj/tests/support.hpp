#pragma once

// Shared helpers for the test binaries: small graph builders that do not go
// through the catalog, random graph generators, and brute-force oracles.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "qghot/graph.hpp"

namespace qtest {

using qghot::GraphDescription;
using qghot::MetricGraph;

inline MetricGraph make(const std::string& name, std::vector<std::string> vertices,
                        std::vector<std::tuple<std::string, std::string, double>> edges) {
  GraphDescription d;
  d.name = name;
  d.vertices = std::move(vertices);
  int i = 0;
  for (auto& [a, b, l] : edges) d.edges.push_back({"e" + std::to_string(i++), a, b, l});
  return qghot::build_graph(d);
}

inline MetricGraph unit_path() { return make("path", {"a", "b"}, {{"a", "b", 1.0}}); }
inline MetricGraph unit_loop() { return make("loop", {"v"}, {{"v", "v", 1.0}}); }
inline MetricGraph lasso(double loop = 1.0, double tail = 1.0) {
  return make("lasso", {"v", "leaf"}, {{"v", "v", loop}, {"v", "leaf", tail}});
}

/// Random connected graph: random spanning tree plus `extra` random edges
/// (loops and parallel edges allowed), lengths uniform in [lo, hi].
inline MetricGraph random_graph(unsigned seed, int vertices, int extra, double lo = 0.3, double hi = 1.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(lo, hi);
  GraphDescription d;
  d.name = "random" + std::to_string(seed);
  for (int v = 0; v < vertices; ++v) d.vertices.push_back("v" + std::to_string(v));
  int id = 0;
  for (int v = 1; v < vertices; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    d.edges.push_back({"e" + std::to_string(id++), d.vertices[pick(rng)], d.vertices[v], len(rng)});
  }
  std::uniform_int_distribution<int> any(0, vertices - 1);
  for (int i = 0; i < extra; ++i) {
    d.edges.push_back({"e" + std::to_string(id++), d.vertices[any(rng)], d.vertices[any(rng)], len(rng)});
  }
  return qghot::build_graph(d);
}

inline MetricGraph random_tree(unsigned seed, int edges, double lo = 0.3, double hi = 1.5) {
  return random_graph(seed, edges + 1, 0, lo, hi);
}

inline MetricGraph random_star(unsigned seed, int arms, double lo = 0.2, double hi = 1.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(lo, hi);
  GraphDescription d;
  d.name = "star" + std::to_string(seed);
  d.vertices.push_back("c");
  for (int j = 0; j < arms; ++j) {
    d.vertices.push_back("l" + std::to_string(j));
    d.edges.push_back({"e" + std::to_string(j), "c", d.vertices.back(), len(rng)});
  }
  return qghot::build_graph(d);
}

/// Dense grid discretization: every edge cut into pieces of length <= step.
struct Grid {
  struct Node {
    qghot::EdgeIndex edge;
    double offset;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
};

inline Grid make_grid(const MetricGraph& g, double step) {
  Grid grid;
  std::vector<std::size_t> vertex_node(g.vertex_count());
  for (qghot::VertexIndex v = 0; v < g.vertex_count(); ++v) {
    auto p = qghot::vertex_point(g, v);
    vertex_node[v] = grid.nodes.size();
    grid.nodes.push_back({p.edge, p.offset});
  }
  grid.adj.resize(grid.nodes.size());
  auto link = [&](std::size_t a, std::size_t b, double w) {
    grid.adj[a].push_back({b, w});
    grid.adj[b].push_back({a, w});
  };
  for (qghot::EdgeIndex e = 0; e < g.edge_count(); ++e) {
    double L = g.length(e);
    int n = std::max(1, static_cast<int>(std::ceil(L / step)));
    std::size_t prev = vertex_node[g.edge(e).origin];
    for (int i = 1; i < n; ++i) {
      grid.nodes.push_back({e, L * i / n});
      grid.adj.emplace_back();
      std::size_t cur = grid.nodes.size() - 1;
      link(prev, cur, L / n);
      prev = cur;
    }
    link(prev, vertex_node[g.edge(e).terminal], L / n);
  }
  return grid;
}

inline std::vector<double> dijkstra(const Grid& grid, std::size_t source) {
  std::vector<double> dist(grid.nodes.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [w, c] : grid.adj[u]) {
      if (d + c < dist[w]) {
        dist[w] = d + c;
        pq.push({dist[w], w});
      }
    }
  }
  return dist;
}

inline double grid_diameter(const MetricGraph& g, double step) {
  Grid grid = make_grid(g, step);
  double best = 0.0;
  for (std::size_t s = 0; s < grid.nodes.size(); ++s) {
    auto d = dijkstra(grid, s);
    best = std::max(best, *std::max_element(d.begin(), d.end()));
  }
  return best;
}

/// Connectivity after deleting one edge (endpoints kept).
inline bool connected_without(const MetricGraph& g, qghot::EdgeIndex skip) {
  std::vector<std::size_t> parent(g.vertex_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (qghot::EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (e == skip) continue;
    parent[find(g.edge(e).origin)] = find(g.edge(e).terminal);
  }
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (find(v) != find(0)) return false;
  }
  return true;
}

/// An edge lies on a cycle iff it is a loop or its endpoints stay connected without it.
inline bool on_cycle(const MetricGraph& g, qghot::EdgeIndex e) {
  return g.edge(e).is_loop() || connected_without(g, e);
}

}  // namespace qtest

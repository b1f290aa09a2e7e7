#pragma once

// The symmetric tree of the "close hot spots" construction: a unit path
// v1 - v0 - v3 crossed at v0 by two arms of length eps, each ending in a
// split vertex carrying m short leaves of the balanced length
// arctan(tan(pi (1/2 - eps)) / m) / pi. On this tree pi^2 = mu_2 and the
// eigenfunction sin(pi t) on one arm (continued along its leaves) has its
// extrema only at the leaves.

#include <cmath>
#include <string>

#include "qghot/graph.hpp"
#include "qghot/spectral/trace.hpp"

namespace qghot {

inline double krpamm_leaf_length(double eps, long m) {
  return std::atan(std::tan(M_PI * (0.5 - eps)) / static_cast<double>(m)) / M_PI;
}

/// Distance between the two leaf clusters, i.e. the extremum spread of the
/// constructed eigenfunction (the diameter is 1).
inline double krpamm_ratio(double eps, long m) { return 2.0 * eps + 2.0 * krpamm_leaf_length(eps, m); }

/// Edge order: e1 (v0-v1), e2 (v0-s2), e3 (v0-v3), e4 (v0-s4), then the m
/// leaves at s4, then the m leaves at s2. `lengthen` adds delta to every leaf.
inline MetricGraph krpamm_tree(double eps, long m, double lengthen = 0.0) {
  if (!(eps > 0.0 && eps < 0.5)) fail(ErrorCode::BadParameter, "krpamm_tree needs eps in (0, 1/2)");
  if (m < 1) fail(ErrorCode::BadParameter, "krpamm_tree needs m >= 1");
  if (lengthen < 0.0) fail(ErrorCode::BadParameter, "krpamm_tree lengthening must be >= 0");
  const double leaf = krpamm_leaf_length(eps, m) + lengthen;
  GraphDescription d;
  d.name = "krpamm_tree";
  d.vertices = {"v0", "v1", "s2", "v3", "s4"};
  d.edges = {{"e1", "v0", "v1", 0.5}, {"e2", "v0", "s2", eps}, {"e3", "v0", "v3", 0.5}, {"e4", "v0", "s4", eps}};
  int id = 5;
  for (const char* side : {"s4", "s2"}) {
    for (long j = 1; j <= m; ++j) {
      std::string leaf_name = std::string(side == std::string("s4") ? "p" : "q") + std::to_string(j);
      d.vertices.push_back(leaf_name);
      d.edges.push_back({"e" + std::to_string(id++), side, leaf_name, leaf});
    }
  }
  return build_graph(d);
}

/// The closed-form eigenfunction for mu = pi^2 on krpamm_tree(eps, m),
/// L^2-normalized: zero on e1 and e3, sin(pi t) on e4 continued by
/// F cos(pi x) + (A/m) sin(pi x) on the s4 leaves, and the negative on the s2 side.
inline EigenFunction krpamm_eigenfunction(const MetricGraph& tree, double eps, long m) {
  const double k = M_PI;
  const double A = std::cos(M_PI * eps);
  const double F = std::sin(M_PI * eps);
  EigenFunction f;
  f.k = k;
  f.traces = {{0.0, 0.0, k}, {0.0, -1.0, k}, {0.0, 0.0, k}, {0.0, 1.0, k}};
  for (long j = 0; j < m; ++j) f.traces.push_back({F, A / static_cast<double>(m), k});
  for (long j = 0; j < m; ++j) f.traces.push_back({-F, -A / static_cast<double>(m), k});
  f = scaled(f, 1.0 / norm(tree, f));
  notify_eigenfunction(tree, f, k * k);
  return f;
}

}  // namespace qghot

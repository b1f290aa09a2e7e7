#pragma once

// Length assignments realizing a prescribed hot-spot placement on a given
// topology. The designated edges get length 1 and every other edge delta;
// delta is halved until mu_2 is simple and the extrema sit where the mode
// says:
//   i    some sign has its maximum only on the boundary   (needs a leaf)
//   ii   maximum and minimum only on the boundary        (needs two leaves)
//   iii  some sign has its maximum only in D             (beta >= 1, not a cycle)
//   iv   maximum and minimum only in D                   (beta >= 2)

#include <string>
#include <utility>
#include <vector>

#include "qghot/catalog/limits.hpp"
#include "qghot/hotspots/verify.hpp"
#include "qghot/structure.hpp"

namespace qghot {

enum class PlacementMode { I, II, III, IV };

inline PlacementMode parse_placement_mode(const std::string& s) {
  if (s == "i") return PlacementMode::I;
  if (s == "ii") return PlacementMode::II;
  if (s == "iii") return PlacementMode::III;
  if (s == "iv") return PlacementMode::IV;
  fail(ErrorCode::BadParameter, "unknown placement mode '" + s + "' (expected i, ii, iii, iv)");
}

inline const char* to_string(PlacementMode m) {
  switch (m) {
    case PlacementMode::I: return "i";
    case PlacementMode::II: return "ii";
    case PlacementMode::III: return "iii";
    case PlacementMode::IV: return "iv";
  }
  return "?";
}

struct PlacementOptions {
  double delta_start = 0.1;
  double delta_floor = 1e-5;
  double tol = default_tol_eig();
};

struct PlacementResult {
  MetricGraph graph;
  std::vector<std::string> unit_edges;
  double delta = 0.0;
  VerifierOutcome outcome;
};

namespace detail {

inline bool connected_without(const MetricGraph& g, EdgeIndex a, EdgeIndex b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (e != a && e != b) pairs.emplace_back(g.edge(e).origin, g.edge(e).terminal);
  }
  auto labels = component_labels(g.vertex_count(), pairs);
  return *std::max_element(labels.begin(), labels.end()) == 0;
}

/// Two edges whose removal keeps the graph connected: contracting the rest
/// leaves two loops at one vertex.
inline std::pair<EdgeIndex, EdgeIndex> two_cycle_edges(const MetricGraph& g) {
  for (EdgeIndex a = 0; a < g.edge_count(); ++a)
    for (EdgeIndex b = a + 1; b < g.edge_count(); ++b)
      if (connected_without(g, a, b)) return {a, b};
  fail(ErrorCode::PreconditionUnmet, "no two independent cycles");
}

inline std::vector<EdgeIndex> designated_edges(const MetricGraph& g, PlacementMode mode) {
  const auto leaves = boundary_vertices(g);
  const std::size_t beta = betti(g);
  auto pendant = [&](VertexIndex v) { return g.graph().ends_at(v).front().edge; };
  switch (mode) {
    case PlacementMode::I:
      if (leaves.empty()) fail(ErrorCode::PreconditionUnmet, "mode i needs a boundary vertex");
      return {pendant(leaves[0])};
    case PlacementMode::II: {
      if (leaves.size() < 2) fail(ErrorCode::PreconditionUnmet, "mode ii needs two boundary vertices");
      EdgeIndex a = pendant(leaves[0]), b = pendant(leaves[1]);
      if (a == b) return {a};
      return {a, b};
    }
    case PlacementMode::III: {
      if (beta < 1) fail(ErrorCode::PreconditionUnmet, "mode iii needs a cycle (beta = 0)");
      if (leaves.empty()) {
        if (beta == 1) fail(ErrorCode::PreconditionUnmet, "mode iii excludes the cycle graph");
        auto [a, b] = two_cycle_edges(g);
        return {a, b};
      }
      auto flags = bridge_flags(g.graph());
      for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        if (!flags[e]) return {e, pendant(leaves[0])};
      }
      fail(ErrorCode::PreconditionUnmet, "no edge on a cycle");
    }
    case PlacementMode::IV: {
      if (beta < 2) fail(ErrorCode::PreconditionUnmet, "mode iv needs beta >= 2");
      auto [a, b] = two_cycle_edges(g);
      return {a, b};
    }
  }
  return {};
}

/// Whether the global extrema of f satisfy the mode's claim.
inline bool placement_holds(const MetricGraph& g, const EigenFunction& f, PlacementMode mode, double tol,
                            std::vector<std::string>& witnesses) {
  const auto bd = boundary(g);
  const auto dcp = doubly_connected_part(g);
  const bool on_boundary_side = mode == PlacementMode::I || mode == PlacementMode::II;
  const Subgraph& region = on_boundary_side ? bd : dcp.closure;
  bool max_ok = true, min_ok = true;
  witnesses.clear();
  for (const auto& p : extrema_single(g, f, tol).global) {
    bool inside = region.contains(g, p.location);
    witnesses.push_back(std::string(to_string(p.kind)) + " " + describe_point(g, p.location));
    (p.kind == ExtremumKind::Max ? max_ok : min_ok) &= inside;
  }
  if (mode == PlacementMode::II || mode == PlacementMode::IV) return max_ok && min_ok;
  return max_ok || min_ok;
}

}  // namespace detail

inline PlacementResult topology_placement(const MetricGraph& topology, PlacementMode mode, const PlacementOptions& opts = {}) {
  std::vector<std::string> ids;
  for (EdgeIndex e : detail::designated_edges(topology, mode)) ids.push_back(topology.edge(e).id);
  const auto fam = make_limit_family(topology.name() + "-" + to_string(mode), topology, ids);
  std::vector<std::string> witnesses;
  for (double delta = opts.delta_start; delta >= opts.delta_floor; delta *= 0.5) {
    auto g = family_member(fam, delta);
    auto pair = second_pair(g);
    if (pair.multiplicity != 1) continue;
    if (!detail::placement_holds(g, pair.basis.front(), mode, opts.tol, witnesses)) continue;
    PlacementResult out{g, ids, delta, {}};
    out.outcome.check = std::string("placement_") + to_string(mode);
    out.outcome.pass = true;
    out.outcome.witnesses = witnesses;
    out.outcome.tolerances = {{"delta", delta}, {"tau_eig", opts.tol}};
    out.outcome.detail = "mu_2 = " + std::to_string(pair.mu) + " simple";
    return out;
  }
  fail(ErrorCode::NoWitnessFound, std::string("mode ") + to_string(mode) + " not realized down to delta " +
                                      std::to_string(opts.delta_floor));
}

/// Same with every edge of a purely combinatorial graph.
inline PlacementResult topology_placement(const DiscreteGraph& topology, PlacementMode mode, const PlacementOptions& opts = {}) {
  auto g = build_graph(describe(MetricGraph("topology", topology, std::vector<double>(topology.edge_count(), 1.0))));
  return topology_placement(g, mode, opts);
}

}  // namespace qghot

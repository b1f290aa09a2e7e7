#pragma once

// Families of graphs whose short edges shrink to zero, the contracted limit
// graph, and the transplant J of limit functions: surviving edges are
// rescaled linearly, shrinking edges carry the constant value of the vertex
// they collapse into. limit_compare tabulates eigenvalue and sup-norm
// distances between psi_k on the family member and J psi_k.

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qghot/catalog/examples.hpp"
#include "qghot/catalog/perturb.hpp"
#include "qghot/spectral/eigen.hpp"

namespace qghot {

struct LimitFamily {
  std::string name;
  MetricGraph topology;               // lengths ignored
  std::vector<double> limit_lengths;  // per edge; 0 marks a shrinking edge
};

/// Topology edges with `unit_edges` kept at length 1 and all others shrinking.
inline LimitFamily make_limit_family(const std::string& name, const MetricGraph& topology,
                                     const std::vector<std::string>& unit_edges) {
  LimitFamily fam{name, topology, std::vector<double>(topology.edge_count(), 0.0)};
  for (const auto& id : unit_edges) {
    auto e = topology.graph().find_edge(id);
    if (!e) fail(ErrorCode::BadParameter, "no edge '" + id + "' in " + topology.name());
    fam.limit_lengths[*e] = 1.0;
  }
  return fam;
}

/// The four pumpkin-on-a-stick families of the topology/placement argument:
/// 'i' keeps one stick (limit [0, 1]), 'ii' both sticks (limit [0, 2]),
/// 'iii' a stick and a pumpkin edge (a lasso), 'iv' two pumpkin edges (a
/// figure-8 of unit loops).
inline LimitFamily pumpkin_on_stick_family(const std::string& mode) {
  auto topology = pumpkin_on_stick({1, 1, 1, 1, 1});
  if (mode == "i") return make_limit_family("stick", topology, {"s1"});
  if (mode == "ii") return make_limit_family("two-pendant", topology, {"s1", "s2"});
  if (mode == "iii") return make_limit_family("lasso", topology, {"s1", "p1"});
  if (mode == "iv") return make_limit_family("two-cycle", topology, {"p1", "p2"});
  fail(ErrorCode::BadParameter, "unknown family mode '" + mode + "' (expected i, ii, iii, iv)");
}

/// Two 2-cycles (a unit edge parallel to a short one) joined by a short
/// bridge. The limit is the figure-8 of unit loops, as for mode 'iv' above,
/// but here the member's mu_2 eigenfunction is not the limit one: on the
/// pumpkin the two unit edges are parallel and sin / -sin extended by zero
/// is an exact eigenfunction for every delta.
inline LimitFamily twin_cycle_family() {
  auto topology = build_graph({"twin_cycles",
                               {"u0", "w0", "u1", "w1"},
                               {{"e0", "u0", "w0", 1.0},
                                {"a0", "u0", "w0", 1.0},
                                {"bridge", "w0", "u1", 1.0},
                                {"e1", "u1", "w1", 1.0},
                                {"a1", "u1", "w1", 1.0}}});
  return make_limit_family("twin-cycle", topology, {"e0", "e1"});
}

/// Family member with every shrinking edge of length delta.
inline MetricGraph family_member(const LimitFamily& fam, double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::BadParameter, "delta must be positive");
  std::vector<double> lengths = fam.limit_lengths;
  for (double& l : lengths) {
    if (l == 0.0) l = delta;
  }
  auto g = with_lengths(fam.topology, lengths);
  std::ostringstream name;
  name << fam.name << "(delta=" << delta << ")";
  auto d = describe(g);
  d.name = name.str();
  return build_graph(d);
}

struct Contraction {
  MetricGraph limit;
  std::vector<VertexIndex> vertex_class;  // topology vertex -> limit vertex
  std::vector<EdgeIndex> edge_map;        // topology edge -> limit edge, or npos when shrinking
};

inline constexpr EdgeIndex no_edge = std::numeric_limits<EdgeIndex>::max();

inline Contraction contract(const LimitFamily& fam) {
  const auto& g = fam.topology;
  std::vector<VertexIndex> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), VertexIndex{0});
  auto find = [&](VertexIndex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  bool any = false;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (fam.limit_lengths[e] > 0.0) {
      any = true;
      continue;
    }
    VertexIndex a = find(g.edge(e).origin), b = find(g.edge(e).terminal);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  if (!any) fail(ErrorCode::BadParameter, "family has no surviving edge");
  Contraction out;
  GraphDescription d{fam.name + "-limit", {}, {}};
  std::vector<VertexIndex> class_index(g.vertex_count(), no_edge);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    VertexIndex r = find(v);
    if (class_index[r] == no_edge) {
      class_index[r] = d.vertices.size();
      d.vertices.push_back(g.graph().vertex_name(r));
    }
    out.vertex_class.push_back(class_index[r]);
  }
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (fam.limit_lengths[e] == 0.0) {
      out.edge_map.push_back(no_edge);
      continue;
    }
    out.edge_map.push_back(d.edges.size());
    d.edges.push_back({g.edge(e).id, d.vertices[out.vertex_class[g.edge(e).origin]],
                       d.vertices[out.vertex_class[g.edge(e).terminal]], fam.limit_lengths[e]});
  }
  out.limit = build_graph(d);
  return out;
}

/// J applied to f, as traces on `target` (the topology with positive
/// lengths). Surviving edges get sqrt(Lt / L) f(Lt x / L), which keeps the L^2
/// norm over surviving edges; shrinking edges get f at their collapse vertex.
inline std::vector<EdgeTrace> transplant(const LimitFamily& fam, const Contraction& c, const EigenFunction& f,
                                         const MetricGraph& target) {
  if (target.edge_count() != fam.topology.edge_count()) fail(ErrorCode::BadParameter, "target topology mismatch");
  std::vector<EdgeTrace> out;
  for (EdgeIndex e = 0; e < target.edge_count(); ++e) {
    const double L = target.length(e);
    if (c.edge_map[e] == no_edge) {
      out.push_back({value_at_vertex(c.limit, f, c.vertex_class[target.edge(e).origin]), 0.0, 0.0});
      continue;
    }
    const double Lt = fam.limit_lengths[e];
    const EdgeTrace& t = f.traces[c.edge_map[e]];
    const double s = std::sqrt(Lt / L);
    out.push_back({s * t.A, s * t.B, t.k * Lt / L});
  }
  return out;
}

/// sup over [0, L] of |a - b|, by bisection with the bound
/// |d| <= max(|d(lo)|, |d(hi)|) + sup|d''| h^2 / 8 on each cell.
inline double sup_trace_difference(const EdgeTrace& a, const EdgeTrace& b, double L, double tol = 1e-10) {
  auto d = [&](double x) { return std::abs(a.value(x) - b.value(x)); };
  const double curv = a.amplitude() * a.k * a.k + b.amplitude() * b.k * b.k;
  double best = std::max(d(0.0), d(L));
  struct Cell {
    double lo, hi, flo, fhi;
  };
  std::vector<Cell> stack{{0.0, L, d(0.0), d(L)}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    const double h = c.hi - c.lo;
    if (std::max(c.flo, c.fhi) + curv * h * h / 8.0 <= best + tol) continue;
    const double mid = 0.5 * (c.lo + c.hi);
    const double fm = d(mid);
    best = std::max(best, fm);
    stack.push_back({c.lo, mid, c.flo, fm});
    stack.push_back({mid, c.hi, fm, c.fhi});
  }
  return best;
}

struct LimitRow {
  double delta = 0.0;
  double eig_err = 0.0;
  double supnorm_err = 0.0;
  double mu = 0.0;
  double mu_limit = 0.0;
};

/// psi_index on each member against J psi_index on the limit (1-based index,
/// mu_1 = 0). The member's eigenfunction sign is chosen to have a positive
/// inner product with the transplant.
inline std::vector<LimitRow> limit_compare(const LimitFamily& fam, const std::vector<double>& deltas, std::size_t index = 2) {
  if (index < 2) fail(ErrorCode::BadParameter, "index must be >= 2");
  const auto c = contract(fam);
  const auto limit_pair = detail::pair_with_index(c.limit, index);
  if (limit_pair.multiplicity != 1) {
    fail(ErrorCode::LimitEigenvalueMultiple, "mu_" + std::to_string(index) + " of the limit graph has multiplicity " +
                                                 std::to_string(limit_pair.multiplicity));
  }
  std::vector<LimitRow> rows;
  for (double delta : deltas) {
    auto g = family_member(fam, delta);
    auto pair = detail::pair_with_index(g, index);
    if (pair.multiplicity != 1) {
      fail(ErrorCode::MultiplicityChange, "mu_" + std::to_string(index) + " is multiple at delta " + std::to_string(delta));
    }
    auto J = transplant(fam, c, limit_pair.basis.front(), g);
    EigenFunction psi = pair.basis.front();
    double overlap = 0.0;
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) overlap += integrate_product(psi.traces[e], J[e], g.length(e));
    if (overlap < 0.0) psi = scaled(psi, -1.0);
    double err = 0.0;
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) err = std::max(err, sup_trace_difference(psi.traces[e], J[e], g.length(e)));
    rows.push_back({delta, std::abs(pair.mu - limit_pair.mu), err, pair.mu, limit_pair.mu});
  }
  return rows;
}

inline std::string limit_table_csv(const std::vector<LimitRow>& rows) {
  std::ostringstream s;
  s << "delta,eig_err,supnorm_err\n" << std::setprecision(12);
  for (const auto& r : rows) s << r.delta << ',' << r.eig_err << ',' << r.supnorm_err << '\n';
  return s.str();
}

}  // namespace qghot

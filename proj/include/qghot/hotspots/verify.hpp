#pragma once

// Checks that run the structural statements about hot spots against computed
// sets: location in the boundary or the interior of the doubly connected
// part, connectivity after cutting at the positive local maxima, the
// distance ratio of extrema, and the star diameter property.

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qghot/hotspots/sets.hpp"
#include "qghot/metric.hpp"
#include "qghot/structure.hpp"
#include "qghot/surgery.hpp"

namespace qghot {

struct VerifierOutcome {
  std::string check;
  bool pass = true;
  std::vector<std::string> witnesses;  // offending points, or the points examined
  std::vector<std::pair<std::string, double>> tolerances;
  std::string detail;
};

namespace detail {

inline std::string describe_piece(const MetricGraph& g, const HotspotPiece& p) {
  if (p.is_point()) return describe_point(g, p.point());
  std::ostringstream s;
  s << g.edge(p.segment.edge).id << "[" << p.segment.lo << ", " << p.segment.hi << "]";
  return s.str();
}

}  // namespace detail

/// Every piece of the set lies in the boundary or in int D (within tau_pt).
inline VerifierOutcome verify_location(const MetricGraph& g, const HotspotSet& set) {
  VerifierOutcome out;
  out.check = "location";
  out.tolerances.push_back({"tau_pt", g.point_tolerance()});
  const auto dcp = doubly_connected_part(g);
  const auto bd = boundary(g);
  auto allowed_point = [&](const GraphPoint& p) { return bd.contains(g, p) || dcp.interior.contains(g, p); };
  for (const auto& piece : set.pieces) {
    bool ok;
    if (piece.is_point()) {
      ok = allowed_point(piece.point());
    } else {
      ok = dcp.interior.edges[piece.segment.edge] && allowed_point({piece.segment.edge, piece.segment.lo}) &&
           allowed_point({piece.segment.edge, piece.segment.hi});
    }
    if (!ok) {
      out.pass = false;
      out.witnesses.push_back(detail::describe_piece(g, piece));
    }
  }
  out.detail = out.pass ? "all pieces in boundary or interior of the doubly connected part"
                        : std::to_string(out.witnesses.size()) + " piece(s) outside";
  return out;
}

inline VerifierOutcome verify_location(const MetricGraph& g, const HotspotReport& report) {
  auto a = verify_location(g, report.local);
  auto b = verify_location(g, report.global);
  a.pass = a.pass && b.pass;
  for (auto& w : b.witnesses) a.witnesses.push_back(std::move(w));
  return a;
}

/// On a tree every piece of M_loc (hence of M) is a leaf. Fails with
/// InapplicableCheck on graphs with cycles.
inline VerifierOutcome verify_tree_boundary(const MetricGraph& g, const HotspotReport& report) {
  if (!is_tree(g)) fail(ErrorCode::InapplicableCheck, "tree-boundary check needs a tree (beta = " + std::to_string(betti(g)) + ")");
  VerifierOutcome out;
  out.check = "tree_boundary";
  out.tolerances.push_back({"tau_pt", g.point_tolerance()});
  for (const auto* set : {&report.local, &report.global}) {
    for (const auto& piece : set->pieces) {
      auto v = piece.is_point() ? vertex_at(g, piece.point()) : std::nullopt;
      if (!v || g.degree(*v) != 1) {
        out.pass = false;
        out.witnesses.push_back(detail::describe_piece(g, piece));
      }
    }
  }
  out.detail = out.pass ? "all local extrema at leaves" : std::to_string(out.witnesses.size()) + " piece(s) off the leaves";
  return out;
}

/// Cutting the graph at every positive local maximum of f leaves it connected.
inline VerifierOutcome verify_no_disconnect(const MetricGraph& g, const EigenFunction& f, double tol = default_tol_eig()) {
  VerifierOutcome out;
  out.check = "no_disconnect";
  out.tolerances.push_back({"tau_eig", tol});
  std::vector<GraphPoint> maxima;
  for (const auto& p : extrema_single(g, f, tol).local) {
    if (p.kind == ExtremumKind::Max && p.value > 0.0) {
      maxima.push_back(p.location);
      out.witnesses.push_back(describe_point(g, p.location));
    }
  }
  auto parts = disconnect(g, maxima);
  out.pass = parts.size() == 1;
  out.detail = std::to_string(maxima.size()) + " maxima cut, " + std::to_string(parts.size()) + " component(s)";
  return out;
}

/// max distance between points of the set divided by diam(g).
inline double extrema_distance_ratio(const MetricGraph& g, const HotspotSet& set) {
  if (set.pieces.empty()) fail(ErrorCode::PreconditionUnmet, "empty hot-spot set");
  GraphMetric metric(g);
  double best = 0.0;
  for (std::size_t i = 0; i < set.pieces.size(); ++i) {
    for (std::size_t j = i; j < set.pieces.size(); ++j) {
      best = std::max(best, metric.max_distance(set.pieces[i].segment, set.pieces[j].segment));
    }
  }
  return best / metric.diameter();
}

inline double extrema_distance_ratio(const MetricGraph& g, const EigenFunction& f, double tol = default_tol_eig()) {
  return extrema_distance_ratio(g, extrema_set(g, f, tol));
}

/// The centre of a star: the vertex shared by all edges (a tree check is
/// implied). Fails with NotAStar otherwise.
inline VertexIndex star_centre(const MetricGraph& g) {
  if (!is_tree(g)) fail(ErrorCode::NotAStar, "graph has a cycle");
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == g.edge_count()) return v;
  }
  fail(ErrorCode::NotAStar, "no vertex meets every edge");
}

/// Replaces every petal of a flower by a pendant edge of half its length.
inline MetricGraph half_petal_star(const MetricGraph& flower) {
  if (flower.vertex_count() != 1) fail(ErrorCode::NotAStar, "not a flower");
  GraphDescription d{flower.name() + "-half", {flower.graph().vertex_name(0)}, {}};
  for (EdgeIndex e = 0; e < flower.edge_count(); ++e) {
    d.vertices.push_back(flower.edge(e).id + "-tip");
    d.edges.push_back({flower.edge(e).id, d.vertices.front(), d.vertices.back(), 0.5 * flower.length(e)});
  }
  return build_graph(d);
}

struct StarCheckOptions {
  std::size_t samples = 64;  // extra eigenspace directions when mu_2 is multiple
  double tol = default_tol_eig();
};

/// For a star (or a flower, through its half-petal star) and every examined
/// mu_2 eigenfunction: every (argmax, argmin) pair realizes the diameter. On
/// a star with psi(centre) != 0 also checks L(e_j) = arctan(A_j / F) / k and
/// max psi_j = sqrt(A_j^2 + F^2) on the edges away from the zero.
inline VerifierOutcome star_diameter_check(const MetricGraph& g, const StarCheckOptions& opts = {}) {
  VerifierOutcome out;
  out.check = "star_diameter";
  out.tolerances = {{"tau_pt", g.point_tolerance()}, {"tau_eig", opts.tol}};
  const bool flower = g.vertex_count() == 1;
  std::optional<VertexIndex> centre;
  if (flower) {
    auto star = half_petal_star(g);
    auto sub = star_diameter_check(star, opts);
    double mu_star = second_pair(star).mu, mu_flower = second_pair(g).mu;
    if (std::abs(mu_star - mu_flower) > 1e-9 * mu_flower) {
      sub.pass = false;
      sub.witnesses.push_back("half-petal star mu_2 " + std::to_string(mu_star) + " != flower mu_2 " + std::to_string(mu_flower));
    }
    out.pass = sub.pass;
    out.witnesses = sub.witnesses;
  } else {
    centre = star_centre(g);
  }
  GraphMetric metric(g);
  const double diam = metric.diameter();
  const auto pair = second_pair(g);
  std::vector<EigenFunction> functions = pair.basis;
  if (pair.basis.size() > 1) {
    for (const auto& c : detail::sphere_directions(pair.basis.size(), opts.samples)) {
      EigenFunction f = detail::from_basis(pair, c);
      functions.push_back(scaled(f, 1.0 / norm(g, f)));
    }
  }
  std::size_t relations = 0;
  for (const auto& f : functions) {
    auto ext = extrema_single(g, f, opts.tol);
    for (const auto& x : ext.global) {
      if (x.kind != ExtremumKind::Max) continue;
      for (const auto& y : ext.global) {
        if (y.kind != ExtremumKind::Min) continue;
        double d = metric.distance(x.location, y.location);
        if (std::abs(d - diam) > g.point_tolerance()) {
          out.pass = false;
          out.witnesses.push_back(describe_point(g, x.location) + " / " + describe_point(g, y.location) + ": " +
                                  std::to_string(d) + " != " + std::to_string(diam));
        }
      }
    }
    if (!centre) continue;
    double F = value_at_vertex(g, f, *centre);
    if (std::abs(F) <= opts.tol * max_amplitude(f)) continue;
    EigenFunction h = F > 0.0 ? f : scaled(f, -1.0);
    F = std::abs(F);
    const double k = pair.k;
    for (const auto& end : g.graph().ends_at(*centre)) {
      VertexIndex leaf = g.graph().opposite(end);
      double leaf_value = value_at_vertex(g, h, leaf);
      if (leaf_value < 0.0) continue;  // the edge carrying the zero
      double Aj = outgoing_derivative(g, h, end) / k;
      double L = g.length(end.edge);
      double predicted_length = std::atan(Aj / F) / k;
      double predicted_max = std::hypot(Aj, F);
      ++relations;
      if (std::abs(predicted_length - L) > 1e-8 * L || std::abs(predicted_max - leaf_value) > 1e-8 * predicted_max) {
        out.pass = false;
        out.witnesses.push_back("edge " + g.edge(end.edge).id + ": length " + std::to_string(L) + " vs " +
                                std::to_string(predicted_length) + ", max " + std::to_string(leaf_value) + " vs " +
                                std::to_string(predicted_max));
      }
    }
  }
  out.detail = std::to_string(functions.size()) + " eigenfunction(s), " + std::to_string(relations) +
               " slope/length relation(s) checked";
  return out;
}

}  // namespace qghot

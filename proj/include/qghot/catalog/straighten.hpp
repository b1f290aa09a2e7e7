#pragma once

// Moves interior global extrema of a simple mu_2 eigenfunction to new leaves.
// At an interior extremum v every incident trace is psi(v) cos(k x); the
// incident edges are shortened by x0 and a pendant of length eta is attached
// at v, carrying F cos(k x) - (S / k) sin(k x), where F is the new value at v
// and S the sum of the outgoing derivatives of the shortened edges. eta is
// the first critical point of the pendant trace: tan(k eta) = -S / (k F),
// which for a cosine start is tan(k eta) = deg(v) tan(k x0).

#include <cmath>
#include <string>
#include <vector>

#include "qghot/hotspots/extrema.hpp"
#include "qghot/spectral/eigen.hpp"
#include "qghot/structure.hpp"
#include "qghot/surgery.hpp"

namespace qghot {

struct StraightenStep {
  std::string vertex;  // vertex carrying the new pendant
  std::string leaf;
  double value = 0.0;  // psi at the vertex after shortening
  double slope_sum = 0.0;
  double eta = 0.0;
};

struct StraightenResult {
  MetricGraph graph;
  EigenFunction function;  // psi carried over to the new graph
  std::vector<StraightenStep> steps;
  double mu = 0.0;          // mu_2 of the input
  double mu_after = 0.0;    // mu_2 recomputed on the output
  double gap_after = 0.0;   // mu_3 - mu_2 on the output
};

/// The trace x -> t(x + s).
inline EdgeTrace shifted(const EdgeTrace& t, double s) {
  if (t.k == 0.0) return t;
  const double c = std::cos(t.k * s), sn = std::sin(t.k * s);
  return {t.A * c + t.B * sn, t.B * c - t.A * sn, t.k};
}

namespace detail {

struct Treated {
  MetricGraph graph;
  EigenFunction function;
  StraightenStep step;
};

/// One straightening step at point p (a vertex of degree >= 2 or an edge
/// interior point).
inline Treated straighten_at(const MetricGraph& g, const EigenFunction& f, const GraphPoint& p, double x0, double tol) {
  const double k = f.k;
  const auto at_vertex = vertex_at(g, p);
  GraphDescription src = describe(g);
  GraphDescription d{src.name, src.vertices, {}};
  std::vector<EdgeTrace> traces;
  std::string centre;
  if (at_vertex) {
    centre = src.vertices[*at_vertex];
  } else {
    centre = fresh_name(src.vertices, g.edge(p.edge).id + "~top");
    d.vertices.push_back(centre);
  }
  if (std::abs(evaluate(g, f, p)) <= tol * max_amplitude(f)) {
    fail(ErrorCode::ExtremumAtVertexValueZero, "extremum at " + describe_point(g, p) + " has value zero");
  }
  auto too_large = [&](const std::string& id) {
    fail(ErrorCode::ShorteningTooLarge, "x0 = " + std::to_string(x0) + " does not fit on edge " + id);
  };
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    EdgeRecord rec = src.edges[e];
    EdgeTrace t = f.traces[e];
    if (!at_vertex && e == p.edge) {
      const double o = p.offset;
      if (!(x0 < o && x0 < rec.length - o)) too_large(rec.id);
      d.edges.push_back({rec.id + ".1", rec.from, centre, o - x0});
      traces.push_back(t);
      d.edges.push_back({rec.id + ".2", centre, rec.to, rec.length - o - x0});
      traces.push_back(shifted(t, o + x0));
      continue;
    }
    double cut = 0.0;
    if (at_vertex && g.edge(e).origin == *at_vertex) {
      cut += x0;
      t = shifted(t, x0);
    }
    if (at_vertex && g.edge(e).terminal == *at_vertex) cut += x0;
    if (!(rec.length - cut > 0.0)) too_large(rec.id);
    rec.length -= cut;
    d.edges.push_back(rec);
    traces.push_back(t);
  }
  MetricGraph shortened = build_graph(d);
  EigenFunction h{k, traces};
  const VertexIndex c = *shortened.graph().find_vertex(centre);
  const double F = value_at_vertex(shortened, h, c);
  double S = 0.0;
  for (const auto& end : shortened.graph().ends_at(c)) S += outgoing_derivative(shortened, h, end);
  double eta = std::atan(-S / (k * F)) / k;
  if (!(eta > 0.0)) fail(ErrorCode::NotMaxima, "shortened traces do not point back towards the extremum");
  const std::string leaf = fresh_name(d.vertices, "leaf");
  d.vertices.push_back(leaf);
  d.edges.push_back({fresh_name(edge_ids(d), "pendant"), centre, leaf, eta});
  h.traces.push_back({F, -S / k, k});
  return {build_graph(d), h, {centre, leaf, F, S, eta}};
}

}  // namespace detail

/// Straightens every global extremum of the mu_2 eigenfunction that is not a
/// boundary vertex, shortening by x0. Treated points are taken one at a time
/// on the updated function: after a step the new leaf is the unique extremum
/// on its side, so at most one maximum and one minimum are treated.
inline StraightenResult straighten_maxima(const MetricGraph& g, double x0, double tol = default_tol_eig()) {
  if (!(x0 > 0.0)) fail(ErrorCode::BadParameter, "x0 must be positive");
  auto pair = second_pair(g);
  if (pair.multiplicity != 1) fail(ErrorCode::NotSimple, "mu_2 has multiplicity " + std::to_string(pair.multiplicity));
  StraightenResult out{g, pair.basis.front(), {}, pair.mu, pair.mu, 0.0};
  for (int round = 0; round < 4; ++round) {
    auto ext = extrema_single(out.graph, out.function, tol);
    std::optional<GraphPoint> target;
    for (const auto& p : ext.global) {
      auto v = vertex_at(out.graph, p.location);
      if (!v || out.graph.degree(*v) != 1) {
        target = p.location;
        break;
      }
    }
    if (!target) break;
    auto step = detail::straighten_at(out.graph, out.function, *target, x0, tol);
    out.graph = std::move(step.graph);
    out.function = std::move(step.function);
    out.steps.push_back(step.step);
  }
  if (out.steps.empty()) {
    out.gap_after = secular_eigenpairs(g, 3).at(2).mu - pair.mu;
    return out;
  }
  out.function = scaled(out.function, 1.0 / norm(out.graph, out.function));
  notify_eigenfunction(out.graph, out.function, pair.mu);
  auto after = secular_eigenpairs(out.graph, 3);
  out.mu_after = after.at(1).mu;
  out.gap_after = after.at(1).multiplicity == 1 ? after.at(2).mu - after.at(1).mu : 0.0;
  if (std::abs(out.mu_after - pair.mu) > 1e-9 * pair.mu || after.at(1).multiplicity != 1) {
    fail(ErrorCode::MultiplicityChange, "straightened graph has mu_2 = " + std::to_string(out.mu_after) + " (multiplicity " +
                                            std::to_string(after.at(1).multiplicity) + "), x0 too large");
  }
  auto ext = extrema_single(out.graph, after.at(1).basis.front(), tol);
  for (const auto& p : ext.global) {
    auto v = vertex_at(out.graph, p.location);
    if (!v || out.graph.degree(*v) != 1) {
      fail(ErrorCode::NoWitnessFound, "global extremum left at " + describe_point(out.graph, p.location));
    }
  }
  return out;
}

}  // namespace qghot

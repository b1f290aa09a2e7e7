#pragma once

// Expected-facts tables for the catalog examples. Each reproduction solves
// the example, computes its hot spots and compares against the closed-form
// facts known for that id; every example also runs the generic location and
// no-disconnect checks.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qghot/catalog/examples.hpp"
#include "qghot/catalog/krpamm.hpp"
#include "qghot/hotspots/verify.hpp"
#include "qghot/metric.hpp"
#include "qghot/report/report.hpp"

namespace qghot {

struct Fact {
  std::string name;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct Reproduction {
  std::string id;
  MetricGraph graph;
  EigenPair pair;
  HotspotReport hotspots;
  std::vector<Fact> facts;

  bool pass() const {
    return std::all_of(facts.begin(), facts.end(), [](const Fact& f) { return f.pass; });
  }
};

namespace detail {

inline Fact close_fact(const std::string& name, double expected, double observed, double rel) {
  return {name, fmt(expected), fmt(observed), std::abs(observed - expected) <= rel * std::max(1.0, std::abs(expected))};
}

inline Fact count_fact(const std::string& name, std::size_t expected, std::size_t observed) {
  return {name, std::to_string(expected), std::to_string(observed), expected == observed};
}

inline Fact flag_fact(const std::string& name, bool observed, const std::string& detail_text = {}) {
  return {name, "true", observed ? "true" : "false" + (detail_text.empty() ? "" : " (" + detail_text + ")"), observed};
}

inline bool all_equal(const MetricGraph& g) {
  for (EdgeIndex e = 1; e < g.edge_count(); ++e) {
    if (std::abs(g.length(e) - g.length(0)) > 1e-12 * g.length(0)) return false;
  }
  return true;
}

inline bool covers_every_edge(const MetricGraph& g, const HotspotSet& set) {
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    bool covered = false;
    for (const auto& p : set.pieces) {
      covered = covered || (p.segment.edge == e && p.segment.lo <= g.point_tolerance() &&
                            p.segment.hi >= g.length(e) - g.point_tolerance());
    }
    if (!covered) return false;
  }
  return true;
}

inline bool at_leaf(const MetricGraph& g, const HotspotPiece& p) {
  if (!p.is_point()) return false;
  auto v = vertex_at(g, p.point());
  return v && g.degree(*v) == 1;
}

inline bool at_loop_midpoint(const MetricGraph& g, const HotspotPiece& p, double tol) {
  return p.is_point() && g.edge(p.segment.edge).is_loop() && std::abs(p.segment.lo - 0.5 * g.length(p.segment.edge)) <= tol;
}

inline std::string pieces_text(const MetricGraph& g, const HotspotSet& set) {
  std::string out;
  for (const auto& p : set.pieces) out += (out.empty() ? "" : " ") + describe_piece(g, p);
  return out.empty() ? "(none)" : out;
}

inline void mu_fact(Reproduction& r, double expected, std::size_t multiplicity) {
  r.facts.push_back(close_fact("mu_2", expected, r.pair.mu, 1e-9));
  r.facts.push_back(count_fact("multiplicity", multiplicity, r.pair.multiplicity));
}

inline void star_fact(Reproduction& r) {
  auto check = star_diameter_check(r.graph);
  r.facts.push_back({"star_diameter", "pass", check.pass ? "pass" : "fail: " + check.detail, check.pass});
}

}  // namespace detail

inline Reproduction reproduce(const std::string& id, const Params& params, const HotspotOptions& hopts = {}) {
  using namespace detail;
  Reproduction r{id, build_example(id, params), {}, {}, {}};
  const MetricGraph& g = r.graph;
  r.pair = second_pair(g);
  r.hotspots = hotspot_sets(g, r.pair, hopts);
  const auto& M = r.hotspots.global;
  const auto& Mloc = r.hotspots.local;
  const double L = g.total_length();

  if (id == "path") {
    mu_fact(r, std::pow(M_PI / L, 2), 1);
    bool ends = M.pieces.size() == 2 && std::all_of(M.pieces.begin(), M.pieces.end(), [&](auto& p) { return at_leaf(g, p); });
    r.facts.push_back({"M", "both endpoints", pieces_text(g, M), ends});
  } else if (id == "cycle") {
    mu_fact(r, std::pow(2.0 * M_PI / L, 2), 2);
    r.facts.push_back(flag_fact("M covers every edge", covers_every_edge(g, M)));
  } else if (id == "pumpkin" || id == "complete") {
    if (all_equal(g)) {
      const double l = g.length(0);
      if (id == "pumpkin") {
        mu_fact(r, std::pow(M_PI / l, 2), g.edge_count());
      } else {
        // Equilateral: cos(k l) = -1 / (V - 1), the second eigenvalue of the transition matrix.
        const double V = static_cast<double>(g.vertex_count());
        mu_fact(r, std::pow(std::acos(-1.0 / (V - 1.0)) / l, 2), g.vertex_count() - 1);
      }
      r.facts.push_back(flag_fact("M covers every edge", covers_every_edge(g, M)));
    } else {
      r.facts.push_back({"closed form", "none for unequal lengths", "-", true});
    }
  } else if (id == "star") {
    if (all_equal(g)) mu_fact(r, std::pow(M_PI / (2.0 * g.length(0)), 2), g.edge_count() - 1);
    star_fact(r);
    r.facts.push_back(flag_fact("M_loc at leaves", std::all_of(Mloc.pieces.begin(), Mloc.pieces.end(),
                                                               [&](auto& p) { return at_leaf(g, p); })));
  } else if (id == "flower" || id == "figure8") {
    bool mid = !Mloc.pieces.empty() && std::all_of(Mloc.pieces.begin(), Mloc.pieces.end(),
                                                   [&](auto& p) { return at_loop_midpoint(g, p, 1e-8); });
    r.facts.push_back({"M_loc", "petal midpoints", pieces_text(g, Mloc), mid});
    star_fact(r);
  } else if (id == "lasso") {
    bool leaf = false, midpoint = false;
    for (const auto& p : M.pieces) {
      leaf = leaf || at_leaf(g, p);
      midpoint = midpoint || at_loop_midpoint(g, p, 1e-9);
    }
    r.facts.push_back(count_fact("multiplicity", 1, r.pair.multiplicity));
    r.facts.push_back({"M", "{leaf, loop midpoint}", pieces_text(g, M), M.pieces.size() == 2 && leaf && midpoint});
  } else if (id == "perturbed_figure8") {
    r.facts.push_back(close_fact("mu_2", 1.0, r.pair.mu, 1e-8));
    r.facts.push_back(count_fact("multiplicity", 1, r.pair.multiplicity));
    const auto bd = boundary(g);
    bool off = true;
    for (const auto& p : M.pieces) {
      off = off && !bd.contains(g, p.point()) && !bd.contains(g, {p.segment.edge, p.segment.hi});
    }
    r.facts.push_back({"M meets boundary", "false", off ? "false" : "true: " + pieces_text(g, M), off});
  } else if (id == "loop_dumbbell") {
    bool mid = !M.pieces.empty() &&
               std::all_of(M.pieces.begin(), M.pieces.end(), [&](auto& p) { return at_loop_midpoint(g, p, 1e-9); });
    r.facts.push_back(count_fact("multiplicity", 1, r.pair.multiplicity));
    r.facts.push_back({"M", "loop midpoints", pieces_text(g, M), mid && M.pieces.size() == 2});
  } else if (id == "krpamm_tree" && params.number("delta", 0.0) == 0.0) {
    const double eps = params.number("eps", 0.05);
    const long m = params.integer("m", 5);
    r.facts.push_back(close_fact("diameter", 1.0, diameter(g), 1e-12));
    r.facts.push_back(close_fact("mu_2", M_PI * M_PI, r.pair.mu, 1e-9));
    r.facts.push_back(count_fact("multiplicity", 3, r.pair.multiplicity));
    const double ratio = extrema_distance_ratio(g, krpamm_eigenfunction(g, eps, m));
    r.facts.push_back(close_fact("extrema distance ratio", krpamm_ratio(eps, m), ratio, 1e-6));
  } else if (id == "n_star_long_short") {
    const auto n = static_cast<std::size_t>(params.integer("n", 5));
    r.facts.push_back(count_fact("multiplicity", 1, r.pair.multiplicity));
    r.facts.push_back(count_fact("|M|", n, M.pieces.size()));
    r.facts.push_back(count_fact("|M_loc|", n, Mloc.pieces.size()));
  } else {
    r.facts.push_back({"closed form", "no claim for this example", "-", true});
  }

  auto loc = verify_location(g, r.hotspots);
  r.facts.push_back({"location", "pass", loc.pass ? "pass" : "fail: " + loc.detail, loc.pass});
  bool cut_ok = true;
  for (const auto& f : r.pair.basis) cut_ok = cut_ok && verify_no_disconnect(g, f).pass;
  r.facts.push_back({"no_disconnect", "pass", cut_ok ? "pass" : "fail", cut_ok});
  const std::size_t bound = 2 * g.edge_count() + g.vertex_count();
  r.facts.push_back({"component bound", "<= " + std::to_string(bound), std::to_string(Mloc.component_count),
                     Mloc.component_count <= bound});
  return r;
}

}  // namespace qghot

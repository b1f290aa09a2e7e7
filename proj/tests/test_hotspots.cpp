#include <catch_amalgamated.hpp>

#include <cmath>

#include "bounds_guard.hpp"
#include "qghot/catalog/examples.hpp"
#include "qghot/hotspots/verify.hpp"
#include "support.hpp"

using namespace qghot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi2 = M_PI * M_PI;

/// Independent maximum of f: dense sampling, then golden-section refinement
/// of the best cell on each edge.
double brute_max(const MetricGraph& g, const EigenFunction& f) {
  double best = -1e300;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const auto& t = f.traces[e];
    const double L = g.length(e);
    const int n = 2000;
    int arg = 0;
    double top = -1e300;
    for (int i = 0; i <= n; ++i) {
      double v = t.value(L * i / n);
      if (v > top) {
        top = v;
        arg = i;
      }
    }
    double a = L * std::max(arg - 1, 0) / n, b = L * std::min(arg + 1, n) / n;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
      double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
      if (t.value(x1) >= t.value(x2)) {
        b = x2;
      } else {
        a = x1;
      }
    }
    best = std::max({best, top, t.value(0.5 * (a + b))});
  }
  return best;
}

bool covers_edge(const HotspotSet& set, EdgeIndex e, double L) {
  for (const auto& p : set.pieces) {
    if (p.segment.edge == e && p.segment.lo <= 1e-12 && p.segment.hi >= L - 1e-12) return true;
  }
  return false;
}

std::vector<GraphPoint> points_of(const HotspotSet& set) {
  std::vector<GraphPoint> out;
  for (const auto& p : set.pieces) {
    REQUIRE(p.is_point());
    out.push_back(p.point());
  }
  return out;
}

}  // namespace

TEST_CASE("extrema of the path eigenfunction are the endpoints") {
  auto g = qtest::unit_path();
  auto p = second_pair(g);
  auto ext = extrema_single(g, p.basis[0]);
  REQUIRE(ext.global.size() == 2);
  REQUIRE(ext.local.size() == 2);
  CHECK(vertex_at(g, ext.global[0].location) == VertexIndex{0});
  CHECK(ext.global[0].kind == ExtremumKind::Max);
  CHECK(vertex_at(g, ext.global[1].location) == VertexIndex{1});
  CHECK(ext.global[1].kind == ExtremumKind::Min);
  CHECK_THAT(ext.max_value, WithinAbs(std::sqrt(2.0), 1e-9));
}

TEST_CASE("loop cosine has exactly two extrema") {
  auto g = qtest::unit_loop();
  EigenFunction f{2 * M_PI, {EdgeTrace{std::sqrt(2.0), 0.0, 2 * M_PI}}};
  auto ext = extrema_single(g, f);
  REQUIRE(ext.local.size() == 2);
  CHECK(ext.global.size() == 2);
  CHECK(vertex_at(g, ext.local[0].location));
  CHECK(ext.local[0].kind == ExtremumKind::Max);
  CHECK_THAT(ext.local[1].location.offset, WithinAbs(0.5, 1e-12));
  CHECK(ext.local[1].kind == ExtremumKind::Min);
}

TEST_CASE("lasso hot spots are the leaf and the loop midpoint") {
  auto g = lasso_graph(1.0, 1.0);
  auto pair = second_pair(g);
  REQUIRE(pair.multiplicity == 1);
  auto report = hotspot_sets(g, pair);
  CHECK(report.equality_claimed);
  auto pts = points_of(report.global);
  REQUIRE(pts.size() == 2);
  auto leaf = *g.graph().find_vertex("v1");
  bool has_leaf = false, has_mid = false;
  for (const auto& p : pts) {
    if (vertex_at(g, p) == leaf) has_leaf = true;
    if (p.edge == 0 && std::abs(p.offset - 0.5) < 1e-9) has_mid = true;
  }
  CHECK(has_leaf);
  CHECK(has_mid);
  CHECK(points_of(report.local).size() == 2);
  CHECK(verify_location(g, report).pass);
  CHECK(verify_no_disconnect(g, pair.basis[0]).pass);
}

TEST_CASE("combination coefficient") {
  CHECK_THAT(combination_alpha(M_PI, 0.5, 0.25), WithinAbs(1.0, 1e-15));
  CHECK_THAT(combination_alpha(M_PI, 0.5, 0.1), WithinAbs(0.324920, 5e-7));
  CHECK_THAT(combination_alpha(2.0, 0.7, 0.35), WithinAbs(1.0, 1e-14));
}

TEST_CASE("pumpkin combination moves the global maximum") {
  auto g = pumpkin_graph({1.0, 1.0, 1.0});
  auto pair = second_pair(g);
  // Edge cosine: flat maximum at v1 on every edge.
  auto cosine = constrained_eigenfunction(g, pair,
                                          {[&](const EigenFunction& h) { return outgoing_derivative(g, h, {0, Side::Start}); },
                                           [&](const EigenFunction& h) { return outgoing_derivative(g, h, {1, Side::Start}); }});
  // Two-edge sine: zero on the third edge.
  auto sine = constrained_eigenfunction(g, pair,
                                        {[&](const EigenFunction& h) { return value_at_vertex(g, h, 0); },
                                         [&](const EigenFunction& h) { return h.traces[2].B; }});
  if (sine.traces[0].B < 0.0) sine = scaled(sine, -1.0);
  for (int i = 1; i <= 20; ++i) {
    double y = 0.5 * i / 21.0;
    auto c = combine(g, cosine, sine, 0, 0.0, 0.5, y);
    auto ext = extrema_single(g, c.function);
    REQUIRE(ext.global.size() >= 1);
    bool found = false;
    for (const auto& p : ext.global) {
      if (p.kind == ExtremumKind::Max && p.location.edge == 0 && std::abs(p.location.offset - y) < 1e-9) found = true;
    }
    CHECK(found);
    CHECK_THAT(brute_max(g, c.function), WithinRel(ext.max_value, 1e-9));
  }
  CHECK_THROWS_AS(combine(g, cosine, sine, 0, 0.0, 0.75, 0.3), Error);
  CHECK_THROWS_AS(combine(g, sine, cosine, 0, 0.0, 0.5, 0.3), Error);
}

TEST_CASE("equilateral pumpkin hot spots cover every edge") {
  auto g = pumpkin_graph({1.0, 1.0, 1.0});
  auto pair = second_pair(g);
  auto report = hotspot_sets(g, pair, {.directions = 720});
  CHECK_FALSE(report.equality_claimed);
  for (EdgeIndex e = 0; e < 3; ++e) {
    CHECK(covers_edge(report.global, e, 1.0));
    CHECK(covers_edge(report.local, e, 1.0));
  }
  CHECK(report.global.component_count == 1);
  CHECK(verify_location(g, report).pass);
}

TEST_CASE("loop eigenspace gives the whole loop") {
  auto g = qtest::unit_loop();
  auto report = hotspot_sets(g, second_pair(g));
  CHECK(covers_edge(report.global, 0, 1.0));
}

TEST_CASE("flower hot spots sit at petal midpoints") {
  auto g = flower_graph({1.0, 1.2});
  auto pair = second_pair(g);
  auto report = hotspot_sets(g, pair);
  REQUIRE_FALSE(report.local.pieces.empty());
  for (const auto& p : report.local.pieces) {
    REQUIRE(p.is_point());
    CHECK_THAT(p.segment.lo, WithinAbs(0.5 * g.length(p.segment.edge), 1e-8));
  }
}

TEST_CASE("trees: hot spots at leaves") {
  int simple = 0;
  for (unsigned seed = 100; seed < 120; ++seed) {
    auto g = qtest::random_tree(seed, 3 + static_cast<int>(seed % 8));
    auto pair = second_pair(g);
    if (pair.multiplicity != 1) continue;
    ++simple;
    auto report = hotspot_sets(g, pair);
    for (const auto& p : report.local.pieces) {
      REQUIRE(p.is_point());
      auto v = vertex_at(g, p.point());
      REQUIRE(v);
      CHECK(g.degree(*v) == 1);
    }
    CHECK(verify_location(g, report).pass);
    CHECK(verify_no_disconnect(g, pair.basis[0]).pass);
    CHECK(report.local.component_count <= 2 * g.edge_count() + g.vertex_count());
  }
  CHECK(simple >= 15);
}

TEST_CASE("perturbed figure-8 keeps hot spots off the boundary") {
  auto g = perturbed_figure8(0.05);
  auto pair = second_pair(g);
  CHECK_THAT(pair.mu, WithinAbs(1.0, 1e-8));
  auto report = hotspot_sets(g, pair);
  CHECK(verify_location(g, report).pass);
  auto bd = boundary(g);
  for (const auto& p : report.global.pieces) {
    CHECK_FALSE(bd.contains(g, p.point()));
    CHECK_FALSE(bd.contains(g, {p.segment.edge, p.segment.hi}));
  }
}

TEST_CASE("location check rejects a bridge-interior point") {
  auto g = lasso_graph(1.0, 1.0);
  HotspotSet fake;
  fake.pieces.push_back({{1, 0.3, 0.3}, true, false, 0, {}});
  auto outcome = verify_location(g, fake);
  CHECK_FALSE(outcome.pass);
  REQUIRE(outcome.witnesses.size() == 1);
  fake.pieces[0].segment = {0, 0.2, 0.6};
  CHECK(verify_location(g, fake).pass);
  // Attachment vertex of a bridge is not in the interior of the doubly connected part.
  fake.pieces[0].segment = {1, 0.0, 0.0};
  CHECK_FALSE(verify_location(g, fake).pass);
}

TEST_CASE("no-disconnect on random graphs and the sharpness control") {
  for (unsigned seed = 30; seed < 40; ++seed) {
    auto g = qtest::random_graph(seed, 4, 2);
    auto pair = second_pair(g);
    for (const auto& f : pair.basis) CHECK(verify_no_disconnect(g, f).pass);
  }
  auto pumpkin = pumpkin_graph({1.0, 1.0, 1.0});
  auto pair = second_pair(pumpkin);
  for (const auto& f : pair.basis) CHECK(verify_no_disconnect(pumpkin, f).pass);
  // Cutting a loop at both its maximum and minimum splits it.
  auto loop = qtest::unit_loop();
  auto parts = disconnect(loop, std::vector<GraphPoint>{{0, 0.0}, {0, 0.5}});
  CHECK(parts.size() == 2);
}

TEST_CASE("reported maxima match an independent maximizer") {
  for (unsigned seed = 50; seed < 58; ++seed) {
    auto g = qtest::random_graph(seed, 5, 2);
    auto pair = second_pair(g);
    for (const auto& f : pair.basis) {
      auto ext = extrema_single(g, f);
      CHECK_THAT(brute_max(g, f), WithinAbs(ext.max_value, 1e-9 * ext.max_value));
      CHECK_THAT(-brute_max(g, scaled(f, -1.0)), WithinAbs(ext.min_value, 1e-9 * std::abs(ext.min_value)));
      for (const auto& p : ext.local) CHECK((p.kind == ExtremumKind::Max) == (p.value > 0.0));
      CHECK(ext.local.size() <= 2 * g.edge_count() + g.vertex_count());
    }
  }
}

TEST_CASE("closure joins same-edge maxima within reach") {
  auto g = pumpkin_graph({1.0, 1.0, 1.0});
  auto report = hotspot_sets(g, second_pair(g), {.directions = 400});
  CHECK(report.closure_segments > 0);
  for (const auto& p : report.local.pieces) CHECK(p.witnesses.size() >= 1);
}

TEST_CASE("distance ratios") {
  auto path = qtest::unit_path();
  auto rp = hotspot_sets(path, second_pair(path));
  CHECK_THAT(extrema_distance_ratio(path, rp.global), WithinAbs(1.0, 1e-12));
  for (unsigned seed = 1; seed <= 5; ++seed) {
    auto star = qtest::random_star(seed, 3 + static_cast<int>(seed % 3));
    auto pair = second_pair(star);
    if (pair.multiplicity != 1) continue;
    CHECK_THAT(extrema_distance_ratio(star, hotspot_sets(star, pair).global), WithinAbs(1.0, 1e-9));
  }
  for (long m : {5L, 10L, 20L, 40L}) {
    auto tree = krpamm_tree(0.05, m);
    auto f = krpamm_eigenfunction(tree, 0.05, m);
    double ratio = extrema_distance_ratio(tree, f);
    CHECK_THAT(ratio, WithinAbs(krpamm_ratio(0.05, m), 1e-9));
    CHECK_THAT(diameter(tree), WithinAbs(1.0, 1e-12));
  }
  CHECK_THAT(krpamm_ratio(0.05, 20), WithinAbs(0.2946, 1e-4));
}

TEST_CASE("star diameter property") {
  CHECK(star_diameter_check(star_graph({1.0, 1.0, 1.0, 1.0})).pass);
  auto uneven = star_diameter_check(star_graph({1.0, 0.7, 0.4}));
  CHECK(uneven.pass);
  CHECK(uneven.detail.find(" 0 slope") == std::string::npos);
  CHECK(star_diameter_check(flower_graph({1.0, 1.4})).pass);
  for (unsigned seed = 60; seed < 66; ++seed) CHECK(star_diameter_check(qtest::random_star(seed, 4)).pass);
  CHECK_THROWS_AS(star_diameter_check(cycle_graph({1.0, 1.0})), Error);
  CHECK_THROWS_AS(star_diameter_check(path_graph({1.0, 1.0, 1.0})), Error);
}

TEST_CASE("complete graph: symmetric eigenfunction") {
  auto g = complete_graph(4);
  auto pair = second_pair(g);
  REQUIRE(pair.multiplicity == 3);
  auto f = constrained_eigenfunction(g, pair,
                                     {[&](const EigenFunction& h) { return value_at_vertex(g, h, 1) - value_at_vertex(g, h, 2); },
                                      [&](const EigenFunction& h) { return value_at_vertex(g, h, 2) - value_at_vertex(g, h, 3); }});
  if (value_at_vertex(g, f, 0) < 0.0) f = scaled(f, -1.0);
  auto ext = extrema_single(g, f);
  REQUIRE(ext.local.size() == 4);
  REQUIRE(ext.global.size() == 4);
  CHECK(vertex_at(g, ext.global[0].location) == VertexIndex{0});
  int minima = 0;
  for (const auto& p : ext.global) {
    if (p.kind != ExtremumKind::Min) continue;
    ++minima;
    const Edge& e = g.edge(p.location.edge);
    CHECK(e.origin != 0);
    CHECK(e.terminal != 0);
    CHECK_THAT(p.location.offset, WithinAbs(0.5, 1e-9));
  }
  CHECK(minima == 3);
}

TEST_CASE("hot-spot a priori bounds were checked") { CHECK(qtest::BoundsGuard::checked > 0); }

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <set>

#include "bounds_guard.hpp"
#include "qghot/catalog/straighten.hpp"
#include "qghot/catalog/topology.hpp"
#include "support.hpp"

using namespace qghot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi2 = M_PI * M_PI;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadParameter;
}

bool all_global_on_boundary(const MetricGraph& g, const EigenFunction& f) {
  for (const auto& p : extrema_single(g, f).global) {
    auto v = vertex_at(g, p.location);
    if (!v || g.degree(*v) != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("example builders") {
  auto pumpkin = build_example("pumpkin", Params::parse("E=3"));
  CHECK(pumpkin.vertex_count() == 2);
  CHECK(pumpkin.edge_count() == 3);
  for (double l : pumpkin.lengths()) CHECK(l == 1.0);

  auto fig8 = build_example("perturbed_figure8", Params::parse("eps=0.05"));
  CHECK(fig8.length(*fig8.graph().find_edge("loop1")) == M_PI);
  CHECK(fig8.length(*fig8.graph().find_edge("loop2")) == M_PI);
  CHECK(fig8.length(*fig8.graph().find_edge("tail1")) == 0.05);
  CHECK(fig8.length(*fig8.graph().find_edge("tail2")) == 0.05);

  auto nstar = build_example("n_star_long_short", Params::parse("n=5,eps=0.1"));
  REQUIRE(nstar.edge_count() == 5);
  int unit = 0, short_edges = 0;
  for (double l : nstar.lengths()) {
    unit += l == 1.0;
    short_edges += l == 0.1;
  }
  CHECK(unit == 1);
  CHECK(short_edges == 4);

  for (const auto& id : example_ids()) {
    INFO(id);
    auto a = to_json(describe(build_example(id)));
    auto b = to_json(describe(build_example(id)));
    CHECK(a == b);
  }
  CHECK(code_of([] { build_example("hexagon"); }) == ErrorCode::UnknownExample);
  CHECK(code_of([] { build_example("pumpkin", Params::parse("E=1")); }) == ErrorCode::BadParameter);
  CHECK(code_of([] { build_example("lasso", Params::parse("radius=2")); }) == ErrorCode::BadParameter);
  CHECK(code_of([] { build_example("krpamm_tree", Params::parse("eps=0.5")); }) == ErrorCode::BadParameter);
}

TEST_CASE("close hot spots tree") {
  CHECK_THAT(krpamm_leaf_length(0.05, 20), WithinAbs(std::atan(std::tan(0.45 * M_PI) / 20.0) / M_PI, 1e-15));
  for (auto [eps, m] : std::vector<std::pair<double, long>>{{0.05, 5}, {0.05, 20}, {0.02, 40}, {0.3, 1}}) {
    auto tree = krpamm_tree(eps, m);
    CHECK_THAT(diameter(tree), WithinAbs(1.0, 1e-12));
    auto f = krpamm_eigenfunction(tree, eps, m);
    auto r = vertex_residuals(tree, f);
    CHECK(r.continuity < 1e-12);
    CHECK(r.kirchhoff < 1e-12);
  }
  auto tree = krpamm_tree(0.05, 20);
  bool found = false;
  for (const auto& p : secular_eigenpairs(tree, 6)) {
    if (std::abs(p.mu - pi2) < 1e-8 * pi2) {
      found = true;
      CHECK(p.multiplicity == 3);
      CHECK(p.first_index == 1);
    }
  }
  CHECK(found);
  // Lengthening the leaves makes mu_2 simple.
  auto longer = krpamm_tree(0.05, 20, 0.01);
  CHECK(second_pair(longer).multiplicity == 1);
}

TEST_CASE("straightening the lasso moves the loop extremum to a leaf") {
  auto g = lasso_graph(1.0, 1.0);
  const double k = std::sqrt(second_pair(g).mu);
  auto r = straighten_maxima(g, 0.05);
  REQUIRE(r.steps.size() == 1);
  // A split edge point has degree 2.
  CHECK_THAT(r.steps[0].eta, WithinAbs(std::atan(2.0 * std::tan(k * 0.05)) / k, 1e-13));
  CHECK_THAT(r.mu_after, WithinRel(r.mu, 1e-9));
  CHECK(r.gap_after > 0.0);
  auto res = vertex_residuals(r.graph, r.function);
  CHECK(res.continuity < 1e-12);
  CHECK(res.kirchhoff < 1e-11);
  auto pair = second_pair(r.graph);
  CHECK(pair.multiplicity == 1);
  CHECK_THAT(std::abs(inner(r.graph, r.function, pair.basis[0])), WithinAbs(1.0, 1e-9));
  auto ext = extrema_single(r.graph, pair.basis[0]);
  CHECK(ext.global.size() == 2);
  CHECK(all_global_on_boundary(r.graph, pair.basis[0]));
  CHECK(r.graph.edge_count() == g.edge_count() + 2);
  CHECK_THAT(r.graph.total_length(), WithinAbs(g.total_length() - 0.1 + r.steps[0].eta, 1e-12));
}

TEST_CASE("straightening: eta shrinks with x0") {
  auto g = lasso_graph(1.0, 1.0);
  double prev = 1e9;
  for (double x0 : {0.1, 0.05, 0.01}) {
    auto r = straighten_maxima(g, x0);
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].eta < prev);
    prev = r.steps[0].eta;
  }
  CHECK(prev < 0.025);
}

TEST_CASE("straightening a vertex extremum") {
  // A unit stick ending in a short equilateral 3-pumpkin: by symmetry the far
  // pumpkin vertex c is a critical vertex of degree 3 carrying the extremum.
  auto g = build_graph({"stick_pumpkin",
                        {"a", "b", "c"},
                        {{"s", "a", "b", 1.0}, {"p1", "b", "c", 0.1}, {"p2", "b", "c", 0.1}, {"p3", "b", "c", 0.1}}});
  auto pair = second_pair(g);
  REQUIRE(pair.multiplicity == 1);
  const double k = pair.k;
  auto r = straighten_maxima(g, 0.01);
  REQUIRE(r.steps.size() == 1);
  CHECK(r.steps[0].vertex == "c");
  CHECK_THAT(r.steps[0].eta, WithinAbs(std::atan(3.0 * std::tan(k * 0.01)) / k, 1e-13));
  CHECK_THAT(r.mu_after, WithinRel(pair.mu, 1e-9));
  CHECK(all_global_on_boundary(r.graph, second_pair(r.graph).basis[0]));
  auto res = vertex_residuals(r.graph, r.function);
  CHECK(res.continuity < 1e-12);
  CHECK(res.kirchhoff < 1e-11);
}

TEST_CASE("straightening: identity and validation") {
  auto path = qtest::unit_path();
  auto r = straighten_maxima(path, 0.05);
  CHECK(r.steps.empty());
  CHECK(to_json(describe(r.graph)) == to_json(describe(path)));
  CHECK(code_of([] { straighten_maxima(lasso_graph(1.0, 1.0), 0.6); }) == ErrorCode::ShorteningTooLarge);
  CHECK(code_of([] { straighten_maxima(star_graph({1, 1, 1}), 0.05); }) == ErrorCode::NotSimple);
  CHECK(code_of([] { straighten_maxima(lasso_graph(1.0, 1.0), 0.0); }) == ErrorCode::BadParameter);
}

TEST_CASE("boundary perturbation separates equal leaf values") {
  auto star = star_graph({1.0, 1.0, 1.0});
  auto out = boundary_distinct_perturb(star, 0.05, 7);
  auto pair = second_pair(out);
  REQUIRE(pair.multiplicity == 1);
  auto leaves = boundary_vertices(out);
  REQUIRE(leaves.size() == 3);
  const auto& f = pair.basis[0];
  const double sup = sup_norm(out, f);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(std::abs(value_at_vertex(out, f, leaves[i]) - value_at_vertex(out, f, leaves[j])) > 1e-9 * sup);
  CHECK_THAT(out.total_length(), WithinAbs(3.0, 1e-14));
  for (EdgeIndex e = 0; e < 3; ++e) CHECK(std::abs(out.length(e) - 1.0) < 0.05);
  // Deterministic in the seed.
  CHECK(to_json(describe(boundary_distinct_perturb(star, 0.05, 7))) == to_json(describe(out)));
}

TEST_CASE("boundary perturbation: trivial cases") {
  auto path = qtest::unit_path();
  CHECK(to_json(describe(boundary_distinct_perturb(path, 0.1, 1))) == to_json(describe(path)));
  auto star = star_graph({0.7, 1.0, 1.3});
  CHECK(to_json(describe(boundary_distinct_perturb(star, 0.1, 1))) == to_json(describe(star)));
  CHECK(code_of([] { boundary_distinct_perturb(qtest::unit_loop(), 0.1, 1); }) == ErrorCode::NoBoundary);
  CHECK(code_of([] { boundary_distinct_perturb(lasso_graph(), 0.1, 1); }) == ErrorCode::NoBoundary);
}

TEST_CASE("contracting the pumpkin-on-a-stick families") {
  struct Expect {
    const char* mode;
    std::size_t vertices, edges;
    double mu;
  };
  const double lasso_mu = second_pair(lasso_graph(1.0, 1.0)).mu;
  for (auto x : {Expect{"i", 2, 1, pi2}, Expect{"ii", 3, 2, pi2 / 4}, Expect{"iii", 2, 2, lasso_mu},
                 Expect{"iv", 1, 2, pi2}}) {
    INFO(x.mode);
    auto fam = pumpkin_on_stick_family(x.mode);
    auto c = contract(fam);
    CHECK(c.limit.vertex_count() == x.vertices);
    CHECK(c.limit.edge_count() == x.edges);
    auto pair = second_pair(c.limit);
    CHECK(pair.multiplicity == 1);
    CHECK_THAT(pair.mu, WithinRel(x.mu, 1e-9));
  }
  CHECK(code_of([] { pumpkin_on_stick_family("v"); }) == ErrorCode::BadParameter);
}

TEST_CASE("transplant keeps the norm on surviving edges") {
  auto fam = pumpkin_on_stick_family("iii");
  auto c = contract(fam);
  auto f = second_pair(c.limit).basis[0];
  auto target = with_lengths(fam.topology, {1.3, 0.7, 0.02, 0.03, 0.01});
  auto J = transplant(fam, c, f, target);
  double closed = 0.0, quad = 0.0;
  for (EdgeIndex e : {EdgeIndex{0}, EdgeIndex{1}}) {
    const double L = target.length(e);
    closed += integrate_product(J[e], J[e], L);
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      double v = J[e].value(L * (i + 0.5) / n);
      quad += v * v * L / n;
    }
  }
  CHECK_THAT(closed, WithinAbs(1.0, 1e-13));
  CHECK_THAT(quad, WithinAbs(1.0, 1e-7));
  // Endpoints of surviving edges match the limit; shrinking edges are constant.
  CHECK_THAT(J[0].value(1.3), WithinAbs(std::sqrt(1.0 / 1.3) * f.traces[0].value(1.0), 1e-13));
  for (EdgeIndex e : {EdgeIndex{2}, EdgeIndex{3}, EdgeIndex{4}}) {
    CHECK(J[e].k == 0.0);
    CHECK_THAT(J[e].A, WithinAbs(value_at_vertex(c.limit, f, c.vertex_class[target.edge(e).origin]), 1e-15));
  }
}

TEST_CASE("sup of a trace difference") {
  EdgeTrace a{1.0, 0.0, 3.0}, b{0.0, 0.5, 2.0};
  const double L = 2.0;
  double sampled = 0.0;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) sampled = std::max(sampled, std::abs(a.value(L * i / n) - b.value(L * i / n)));
  double sup = sup_trace_difference(a, b, L);
  CHECK(sup >= sampled - 1e-12);
  CHECK(sup <= sampled + (9.0 + 0.5 * 4.0) * (L / n) * (L / n) / 8.0 + 1e-10);
  CHECK_THAT(sup_trace_difference(a, EdgeTrace{0.25, 0.0, 0.0}, 1.0), WithinAbs(0.25 - std::cos(3.0), 1e-10));
}

TEST_CASE("limit comparison tables decrease") {
  const std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  for (const char* mode : {"i", "ii", "iii", "twin"}) {
    INFO(mode);
    auto fam = std::string(mode) == "twin" ? twin_cycle_family() : pumpkin_on_stick_family(mode);
    auto rows = limit_compare(fam, deltas);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].eig_err < rows[i - 1].eig_err);
      CHECK(rows[i].supnorm_err < rows[i - 1].supnorm_err);
    }
    CHECK(rows.back().supnorm_err < 5e-2);
  }
  // Parallel unit edges: the limit eigenfunction is exact on every member.
  for (const auto& r : limit_compare(pumpkin_on_stick_family("iv"), deltas)) {
    CHECK(r.eig_err < 1e-11);
    CHECK(r.supnorm_err < 1e-11);
  }
  auto csv = limit_table_csv(limit_compare(pumpkin_on_stick_family("i"), {1e-2}));
  CHECK(csv.rfind("delta,eig_err,supnorm_err\n", 0) == 0);
  auto pumpkin = make_limit_family("pumpkin", pumpkin_on_stick({1, 1, 1, 1, 1}), {"p1", "p2", "p3"});
  CHECK(code_of([&] { limit_compare(pumpkin, {1e-2}); }) == ErrorCode::LimitEigenvalueMultiple);
}

TEST_CASE("limit families: extrema follow the limit") {
  auto two_pendant = family_member(pumpkin_on_stick_family("ii"), 1e-3);
  auto f = second_pair(two_pendant).basis[0];
  CHECK(all_global_on_boundary(two_pendant, f));
  auto two_cycle = family_member(pumpkin_on_stick_family("iv"), 1e-3);
  auto h = second_pair(two_cycle).basis[0];
  auto ext = extrema_single(two_cycle, h);
  REQUIRE(ext.global.size() == 2);
  std::set<std::string> edges;
  for (const auto& p : ext.global) {
    CHECK_FALSE(vertex_at(two_cycle, p.location));
    edges.insert(two_cycle.edge(p.location.edge).id);
  }
  CHECK(edges == std::set<std::string>{"p1", "p2"});
}

TEST_CASE("topology placement") {
  auto topo = pumpkin_on_stick({1, 1, 1, 1, 1});
  auto ii = topology_placement(topo, PlacementMode::II);
  CHECK(ii.outcome.pass);
  auto f = second_pair(ii.graph).basis[0];
  auto ext = extrema_single(ii.graph, f);
  std::set<std::string> at;
  for (const auto& p : ext.global) {
    auto v = vertex_at(ii.graph, p.location);
    REQUIRE(v);
    at.insert(ii.graph.graph().vertex_name(*v));
  }
  CHECK(at == std::set<std::string>{"a", "d"});

  auto iv = topology_placement(topo, PlacementMode::IV);
  CHECK(iv.outcome.pass);
  auto h = second_pair(iv.graph).basis[0];
  std::set<std::string> loops;
  for (const auto& p : extrema_single(iv.graph, h).global) {
    CHECK_FALSE(vertex_at(iv.graph, p.location));
    loops.insert(iv.graph.edge(p.location.edge).id);
  }
  CHECK(loops.size() == 2);

  CHECK(topology_placement(topo, PlacementMode::I).outcome.pass);
  CHECK(topology_placement(topo, PlacementMode::III).outcome.pass);
  CHECK(code_of([] { topology_placement(star_graph({1, 1, 1}), PlacementMode::III); }) == ErrorCode::PreconditionUnmet);
  CHECK(code_of([] { topology_placement(cycle_graph({1, 1}), PlacementMode::III); }) == ErrorCode::PreconditionUnmet);
  CHECK(code_of([] { topology_placement(lasso_graph(), PlacementMode::IV); }) == ErrorCode::PreconditionUnmet);
  CHECK(code_of([] { topology_placement(flower_graph({1, 1}), PlacementMode::I); }) == ErrorCode::PreconditionUnmet);
}

TEST_CASE("topology placement on random graphs") {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    auto g = qtest::random_graph(seed, 5, 2);
    INFO(seed);
    CHECK(topology_placement(g, PlacementMode::IV).outcome.pass);
    CHECK(topology_placement(g.graph(), PlacementMode::III).outcome.pass);
  }
}

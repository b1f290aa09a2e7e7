#include <catch_amalgamated.hpp>

#include <cmath>

#include "bounds_guard.hpp"
#include "qghot/catalog/examples.hpp"
#include "qghot/spectral/rayleigh.hpp"
#include "qghot/spectral/spectrum.hpp"
#include "qghot/structure.hpp"
#include "support.hpp"

using namespace qghot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi2 = M_PI * M_PI;

std::size_t nullity(const Eigen::MatrixXd& m, double tol = 1e-8) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) n += s(i) < tol * std::max(s(0), 1.0) ? 1 : 0;
  return n;
}

// Closed-form spectra of equilateral families with unit edges.
std::vector<double> pumpkin_oracle(int E, std::size_t n) {
  std::vector<double> out{0.0};
  for (int j = 1; out.size() < n; ++j)
    for (int c = 0; c < E && out.size() < n; ++c) out.push_back(j * j * pi2);
  return out;
}

std::vector<double> star_oracle(int E, std::size_t n) {
  std::vector<double> out{0.0};
  for (int j = 1; out.size() < n; ++j) {
    double k = 0.5 * j * M_PI;
    int copies = j % 2 == 1 ? E - 1 : 1;
    for (int c = 0; c < copies && out.size() < n; ++c) out.push_back(k * k);
  }
  return out;
}

void check_spectrum(const MetricGraph& g, const std::vector<double>& oracle) {
  auto got = flatten(secular_eigenpairs(g, oracle.size()), oracle.size());
  REQUIRE(got.size() == oracle.size());
  CHECK(got[0] == 0.0);
  for (std::size_t j = 1; j < oracle.size(); ++j) CHECK_THAT(got[j], WithinRel(oracle[j], 1e-9));
}

}  // namespace

TEST_CASE("secular matrix nullspace dimensions") {
  CHECK(nullity(secular_matrix(qtest::unit_path(), M_PI)) == 1);
  CHECK(nullity(secular_matrix(qtest::unit_loop(), 2.0 * M_PI)) == 2);
  CHECK(nullity(secular_matrix(qtest::unit_path(), 0.5 * M_PI)) == 0);
  auto m = secular_matrix(qtest::unit_path(), M_PI);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK_THROWS_AS(secular_matrix(qtest::unit_path(), 0.0), Error);
}

TEST_CASE("canonical spectra against closed forms") {
  check_spectrum(qtest::unit_path(), {0.0, pi2, 4 * pi2, 9 * pi2});
  check_spectrum(cycle_graph({1.0}), {0.0, 4 * pi2, 4 * pi2, 16 * pi2, 16 * pi2});
  check_spectrum(cycle_graph({0.3, 0.5, 0.2}), {0.0, 4 * pi2, 4 * pi2, 16 * pi2, 16 * pi2});
  for (int E : {2, 3, 5}) check_spectrum(pumpkin_graph(std::vector<double>(E, 1.0)), pumpkin_oracle(E, 2 * E + 2));
  for (int E : {3, 4, 6}) check_spectrum(star_graph(std::vector<double>(E, 1.0)), star_oracle(E, 2 * E + 1));
  // A path of length 2.5 cut into three pieces.
  std::vector<double> path{0.0};
  for (int j = 1; j < 6; ++j) path.push_back(j * j * pi2 / 6.25);
  check_spectrum(path_graph({1.0, 0.7, 0.8}), path);
}

TEST_CASE("multiplicities and index ranges") {
  auto pairs = secular_eigenpairs(pumpkin_graph({1.0, 1.0, 1.0}), 4);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].mu == 0.0);
  CHECK(pairs[0].multiplicity == 1);
  CHECK(pairs[1].multiplicity == 3);
  CHECK(pairs[1].first_index == 1);
  CHECK(pairs[1].basis.size() == 3);
  auto star = second_pair(star_graph({1.0, 1.0, 1.0, 1.0}));
  CHECK_THAT(star.mu, WithinRel(pi2 / 4.0, 1e-9));
  CHECK(star.multiplicity == 3);
}

TEST_CASE("path eigenfunction is the normalized cosine") {
  auto g = qtest::unit_path();
  auto p = second_pair(g);
  REQUIRE(p.basis.size() == 1);
  const auto& t = p.basis[0].traces[0];
  CHECK_THAT(t.A, WithinAbs(std::sqrt(2.0), 1e-9));
  CHECK_THAT(t.B, WithinAbs(0.0, 1e-9));
  CHECK_THAT(p.k, WithinRel(M_PI, 1e-12));
  CHECK_THAT(evaluate(g, p.basis[0], {0, 0.0}), WithinAbs(std::sqrt(2.0), 1e-9));
  CHECK_THAT(evaluate(g, p.basis[0], {0, 0.5}), WithinAbs(0.0, 1e-9));
  CHECK_THAT(derivative(g, p.basis[0], {0, 0.0}, EdgeEnd{0, Side::Start}), WithinAbs(0.0, 1e-8));
  CHECK_THROWS_AS(derivative(g, p.basis[0], {0, 0.0}), Error);
  CHECK_THROWS_AS(evaluate(g, p.basis[0], {0, 1.5}), Error);
}

TEST_CASE("loop eigenspace is two orthonormal sinusoids") {
  auto g = qtest::unit_loop();
  auto p = second_pair(g);
  REQUIRE(p.multiplicity == 2);
  CHECK_THAT(p.mu, WithinRel(4 * pi2, 1e-9));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK_THAT(inner(g, p.basis[i], p.basis[j]), WithinAbs(i == j ? 1.0 : 0.0, 1e-9));
}

TEST_CASE("star eigenspace contains the two-edge functions") {
  auto g = star_graph({1.0, 1.0, 1.0, 1.0});
  auto p = second_pair(g);
  REQUIRE(p.basis.size() == 3);
  const double k = 0.5 * M_PI;
  // sin(kx) on edge i, -sin(kx) on edge j, zero elsewhere (x measured from the centre).
  for (EdgeIndex i = 0; i < 4; ++i) {
    for (EdgeIndex j = i + 1; j < 4; ++j) {
      EigenFunction f{k, std::vector<EdgeTrace>(4, EdgeTrace{0.0, 0.0, k})};
      f.traces[i].B = 1.0;
      f.traces[j].B = -1.0;
      double nf2 = inner(g, f, f);
      double proj = 0.0;
      for (const auto& b : p.basis) proj += std::pow(inner(g, f, b), 2);
      CHECK_THAT(proj, WithinRel(nf2, 1e-9));
      auto r = vertex_residuals(g, f);
      CHECK(r.continuity < 1e-12);
      CHECK(r.kirchhoff < 1e-12);
    }
  }
}

TEST_CASE("eigenfunction invariants on random graphs") {
  for (unsigned seed = 1; seed <= 8; ++seed) {
    auto g = qtest::random_graph(seed, 3 + static_cast<int>(seed % 4), static_cast<int>(seed % 3));
    auto pairs = secular_eigenpairs(g, 6);
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      CHECK(p.diagnostics.continuity < 1e-9);
      CHECK(p.diagnostics.kirchhoff < 1e-9);
      CHECK(p.diagnostics.mean < 1e-9);
      CHECK(p.diagnostics.gram < 1e-9);
      CHECK(p.mu > pairs[i - 1].mu);
      for (const auto& f : p.basis) {
        CHECK_THAT(rayleigh_quotient(g, f), WithinRel(p.mu, 1e-10));
        // Neumann condition at leaves.
        for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
          if (g.graph().degree(v) != 1) continue;
          CHECK(std::abs(outgoing_derivative(g, f, g.graph().ends_at(v).front())) < 1e-9 * p.k * max_amplitude(f));
        }
      }
    }
    // The exact count agrees with the located eigenvalues between consecutive roots.
    auto mus = flatten(pairs, 6);
    for (std::size_t j = 1; j + 1 < mus.size(); ++j) {
      if (mus[j + 1] - mus[j] < 1e-6 * mus[j]) continue;
      double mid = std::sqrt(0.5 * (mus[j] + mus[j + 1]));
      CHECK(count_below(g, mid) == j + 1);
    }
  }
}

TEST_CASE("rayleigh quotients") {
  auto g = qtest::unit_path();
  EigenFunction c{0.0, {EdgeTrace{1.0, 0.0, 0.0}}};
  CHECK(rayleigh_quotient(g, c) == 0.0);
  CHECK_THROWS_AS(rayleigh_quotient(g, scaled(c, 0.0)), Error);
  // Tent on [0,1]: energy 4, variance 1/3 - 1/4, quotient 48 >= pi^2.
  SampledFunction tent{{0.0, 1.0, 0.0}};
  double q = rayleigh_quotient(g, tent, true);
  CHECK_THAT(q, WithinRel(48.0, 1e-12));
  CHECK(q >= pi2);
  // Fine sampling of cos(pi x) approaches pi^2 from above.
  SampledFunction cosine(1);
  for (int i = 0; i <= 2000; ++i) cosine[0].push_back(std::cos(M_PI * i / 2000.0));
  double qc = rayleigh_quotient(g, cosine, true);
  CHECK(qc >= pi2);
  CHECK_THAT(qc, WithinRel(pi2, 1e-6));
  CHECK_THROWS_AS(rayleigh_quotient(g, SampledFunction{{1.0, 1.0}}, true), Error);
}

TEST_CASE("closed-form integrals match quadrature") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0), kk(0.0, 9.0), ll(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    EdgeTrace a{u(rng), u(rng), kk(rng)}, b{u(rng), u(rng), kk(rng)};
    if (trial % 5 == 0) b.k = a.k;
    double L = ll(rng);
    const int n = 20000;
    double s = 0.0, si = 0.0;
    for (int i = 0; i <= n; ++i) {
      double x = L * i / n, w = (i == 0 || i == n) ? 0.5 : 1.0;
      s += w * a.value(x) * b.value(x);
      si += w * a.value(x);
    }
    s *= L / n;
    si *= L / n;
    CHECK_THAT(integrate_product(a, b, L), WithinAbs(s, 1e-6));
    CHECK_THAT(integrate(a, L), WithinAbs(si, 1e-6));
    // Exact sup against dense sampling (sampling can only under-estimate).
    double sampled = 0.0;
    for (int i = 0; i <= n; ++i) sampled = std::max(sampled, std::abs(a.value(L * i / n)));
    CHECK(edge_sup(a, L) >= sampled - 1e-12);
    CHECK(edge_sup(a, L) <= sampled + 1e-6);
  }
}

TEST_CASE("degree-two suppression preserves the spectrum") {
  std::vector<MetricGraph> graphs = {path_graph({0.4, 0.3, 0.9}), cycle_graph({0.5, 0.7, 0.3}),
                                     qtest::make("lollipop", {"a", "b", "c", "d"},
                                                 {{"a", "b", 0.6}, {"b", "c", 0.5}, {"c", "a", 0.8}, {"c", "d", 0.4}})};
  for (const auto& g : graphs) {
    auto a = flatten(secular_eigenpairs(g, 6), 6);
    auto s = suppress_degree_two(g);
    CHECK(s.total_length() == Catch::Approx(g.total_length()).epsilon(1e-15));
    auto b = flatten(secular_eigenpairs(s, 6), 6);
    for (std::size_t j = 1; j < 6; ++j) CHECK_THAT(b[j], WithinRel(a[j], 1e-9));
  }
}

TEST_CASE("constrained eigenspace elements") {
  auto g = pumpkin_graph({1.0, 1.0, 1.0});
  auto p = second_pair(g);
  // Vanishing at v1 leaves the two sine functions.
  auto f = constrained_eigenfunction(g, p, {[&](const EigenFunction& h) { return value_at_vertex(g, h, 0); }});
  CHECK_THAT(value_at_vertex(g, f, 0), WithinAbs(0.0, 1e-9));
  CHECK_THAT(norm(g, f), WithinRel(1.0, 1e-12));
  auto cut = [&](VertexIndex v) { return [&, v](const EigenFunction& h) { return value_at_vertex(g, h, v); }; };
  auto sine = constrained_eigenfunction(g, p, {cut(0), [&](const EigenFunction& h) { return h.traces[0].B; }});
  CHECK_THAT(sine.traces[0].B, WithinAbs(0.0, 1e-9));
  CHECK_THROWS_AS(constrained_eigenfunction(g, p,
                                            {cut(0), [&](const EigenFunction& h) { return h.traces[0].B; },
                                             [&](const EigenFunction& h) { return h.traces[1].B; }}),
                  Error);
}

TEST_CASE("backend names") {
  CHECK(parse_backend("secular") == Backend::Secular);
  CHECK(parse_backend("fem") == Backend::Fem);
  CHECK_THROWS_AS(parse_backend("dense"), Error);
  CHECK_THROWS_AS(secular_eigenpairs(qtest::unit_path(), 0), Error);
}

TEST_CASE("a priori bounds were checked") { CHECK(qtest::BoundsGuard::checked > 0); }

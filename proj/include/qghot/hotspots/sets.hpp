#pragma once

// Hot-spot sets of the mu_2 eigenspace. A simple eigenvalue gives the sets
// exactly. For a multiple eigenvalue the eigenspace is sampled along unit
// coefficient directions (plus the subspaces where an outgoing derivative at
// a vertex vanishes, which generic directions miss), and same-edge maxima at
// edge distance <= pi / (2k) are joined into segments by the two-maxima
// combination. The result is a subset of the true set, every piece backed by
// an explicit eigenfunction.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qghot/hotspots/extrema.hpp"
#include "qghot/metric.hpp"
#include "qghot/spectral/eigen.hpp"

namespace qghot {

// ---------------------------------------------------------------------------
// Combination of two maxima on one edge

struct Combination {
  EigenFunction function;  // L^2-normalized
  double alpha = 0.0;
};

/// alpha for maxima at chart positions 0 and L, target t in (0, L).
inline double combination_alpha(double k, double L, double t) {
  return -std::sin(k * t) / std::sin(k * (t - L));
}

/// Combines f0 (local max at offset x1 on edge e) and f1 (local max at x2 on
/// the same edge) into an eigenfunction whose only critical point between x1
/// and x2 is a maximum at y. Both maxima must have zero slope along e.
inline Combination combine(const MetricGraph& g, const EigenFunction& f0, const EigenFunction& f1, EdgeIndex e, double x1,
                           double x2, double y) {
  const double L = g.length(e);
  for (double x : {x1, x2, y}) {
    if (x < -g.point_tolerance() || x > L + g.point_tolerance()) fail(ErrorCode::InvalidPoint, "offset outside the edge");
  }
  const double k = f0.k;
  if (!(k > 0.0) || std::abs(f1.k - k) > 1e-12 * k) fail(ErrorCode::BadParameter, "combination needs one eigenspace");
  const double gap = std::abs(x2 - x1);
  if (gap > M_PI / (2.0 * k) * (1.0 + 1e-9)) {
    fail(ErrorCode::TooFarApart, "maxima are farther apart than pi/(2k) = " + std::to_string(M_PI / (2.0 * k)));
  }
  const double lo = std::min(x1, x2), hi = std::max(x1, x2);
  if (!(y > lo && y < hi)) fail(ErrorCode::InvalidPoint, "target must lie strictly between the two maxima");
  auto check = [&](const EigenFunction& f, double x, const char* which) {
    const EdgeTrace& t = f.traces.at(e);
    double val = t.value(x);
    double slope = std::abs(t.slope(x));
    if (!(val > 0.0) || slope > 1e-7 * k * t.amplitude()) {
      fail(ErrorCode::NotMaxima, std::string(which) + " has no flat maximum at offset " + std::to_string(x));
    }
    return val;
  };
  const double r0 = check(f0, x1, "first function");
  const double r1 = check(f1, x2, "second function");
  Combination c;
  c.alpha = combination_alpha(k, gap, std::abs(y - x1));
  c.function = combine_linear(f0, 1.0 / r0, f1, c.alpha / r1);
  c.function = scaled(c.function, 1.0 / norm(g, c.function));
  notify_eigenfunction(g, c.function, k * k);
  return c;
}

// ---------------------------------------------------------------------------
// Direction sampling

namespace detail {

inline double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// Deterministic, roughly uniform unit vectors in R^d: a circle grid for
/// d = 2, a Fibonacci lattice for d = 3, Halton points pushed through
/// Box-Muller for d >= 4.
inline std::vector<Eigen::VectorXd> sphere_directions(std::size_t d, std::size_t count) {
  std::vector<Eigen::VectorXd> out;
  if (d == 1) {
    out.push_back(Eigen::VectorXd::Constant(1, 1.0));
    out.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return out;
  }
  if (d == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(count);
      Eigen::VectorXd v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(v);
    }
    return out;
  }
  if (d == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double t = golden * static_cast<double>(i);
      Eigen::VectorXd v(3);
      v << r * std::cos(t), r * std::sin(t), z;
      out.push_back(v);
    }
    return out;
  }
  static const unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  const std::size_t pairs = (d + 1) / 2;
  if (2 * pairs > std::size(primes)) fail(ErrorCode::BadParameter, "eigenspace dimension too large for sampling");
  for (std::size_t i = 1; out.size() < count; ++i) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(2 * pairs));
    for (std::size_t j = 0; j < pairs; ++j) {
      double u1 = std::max(radical_inverse(i, primes[2 * j]), 1e-12);
      double u2 = radical_inverse(i, primes[2 * j + 1]);
      double r = std::sqrt(-2.0 * std::log(u1));
      v(static_cast<Eigen::Index>(2 * j)) = r * std::cos(2.0 * M_PI * u2);
      v(static_cast<Eigen::Index>(2 * j + 1)) = r * std::sin(2.0 * M_PI * u2);
    }
    Eigen::VectorXd w = v.head(static_cast<Eigen::Index>(d));
    if (w.norm() > 1e-12) out.push_back(w.normalized());
  }
  return out;
}

/// Orthonormal basis (columns) of {c : C c = 0}.
inline Eigen::MatrixXd null_basis(const Eigen::MatrixXd& C, double abs_tol) {
  const Eigen::Index d = C.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > abs_tol ? 1 : 0;
  return svd.matrixV().rightCols(d - rank);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reports

/// A closed piece of one edge (a point when lo == hi) in a hot-spot set.
struct HotspotPiece {
  EdgeSegment segment;
  bool has_max = false;
  bool has_min = false;
  std::size_t component = 0;
  std::vector<std::vector<double>> witnesses;  // coefficient vectors, at most three

  bool is_point() const { return segment.lo == segment.hi; }
  GraphPoint point() const { return {segment.edge, segment.lo}; }
};

struct HotspotSet {
  std::vector<HotspotPiece> pieces;
  std::size_t component_count = 0;
};

struct HotspotReport {
  double mu = 0.0;
  double k = 0.0;
  std::size_t multiplicity = 1;
  HotspotSet global;  // M
  HotspotSet local;   // M_loc
  std::size_t directions = 0;
  std::size_t closure_segments = 0;
  bool subset_certified = true;
  bool equality_claimed = false;
};

struct HotspotOptions {
  std::size_t directions = 0;  // 0: 720 for d = 2, 4096 for d >= 3
  double tol = default_tol_eig();
  std::size_t closure_checks = 5;  // interior targets verified per global segment
};

namespace detail {

struct Candidate {
  GraphPoint point;
  bool max = true;           // kind for the sampled function (before orientation)
  bool global = false;
  Eigen::VectorXd witness;   // oriented so that the point is a maximum
};

inline EigenFunction from_basis(const EigenPair& pair, const Eigen::VectorXd& c) {
  EigenFunction f = scaled(pair.basis.front(), 0.0);
  for (Eigen::Index i = 0; i < c.size(); ++i) f = combine_linear(f, 1.0, pair.basis[static_cast<std::size_t>(i)], c(i));
  return f;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

/// Vertices touched by a piece (its endpoints when they sit at vertices).
inline std::vector<VertexIndex> touched_vertices(const MetricGraph& g, const EdgeSegment& s) {
  std::vector<VertexIndex> out;
  if (auto v = vertex_at(g, {s.edge, s.lo})) out.push_back(*v);
  if (s.hi != s.lo) {
    if (auto v = vertex_at(g, {s.edge, s.hi})) out.push_back(*v);
  }
  return out;
}

/// Merges overlapping pieces, drops points covered by segments, sorts, and
/// labels connected components.
inline HotspotSet assemble(const MetricGraph& g, std::vector<HotspotPiece> pieces) {
  const double tol = g.point_tolerance();
  // Canonical form for vertex points.
  for (auto& p : pieces) {
    if (p.is_point()) {
      auto c = canonicalize(g, p.point());
      p.segment = {c.edge, c.offset, c.offset};
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const HotspotPiece& a, const HotspotPiece& b) {
    if (a.segment.edge != b.segment.edge) return a.segment.edge < b.segment.edge;
    if (a.segment.lo != b.segment.lo) return a.segment.lo < b.segment.lo;
    return a.segment.hi > b.segment.hi;
  });
  std::vector<HotspotPiece> merged;
  auto absorb = [](HotspotPiece& into, const HotspotPiece& from) {
    into.has_max = into.has_max || from.has_max;
    into.has_min = into.has_min || from.has_min;
    for (const auto& w : from.witnesses) {
      if (into.witnesses.size() < 3) into.witnesses.push_back(w);
    }
  };
  for (const auto& p : pieces) {
    if (!merged.empty() && merged.back().segment.edge == p.segment.edge && p.segment.lo <= merged.back().segment.hi + tol) {
      auto& m = merged.back();
      m.segment.hi = std::max(m.segment.hi, p.segment.hi);
      absorb(m, p);
      continue;
    }
    merged.push_back(p);
  }
  // Vertex points covered by a segment ending at that vertex.
  std::vector<bool> drop(merged.size(), false);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (!merged[i].is_point()) continue;
    auto v = vertex_at(g, merged[i].point());
    if (!v) continue;
    for (std::size_t j = 0; j < merged.size() && !drop[i]; ++j) {
      if (j == i || merged[j].is_point()) continue;
      auto tv = touched_vertices(g, merged[j].segment);
      if (std::find(tv.begin(), tv.end(), *v) != tv.end()) {
        absorb(merged[j], merged[i]);
        drop[i] = true;
      }
    }
  }
  HotspotSet out;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (!drop[i]) out.pieces.push_back(merged[i]);
  }
  // Components: pieces sharing a vertex belong together.
  std::vector<std::size_t> parent(out.pieces.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<std::optional<std::size_t>> at_vertex(g.vertex_count());
  for (std::size_t i = 0; i < out.pieces.size(); ++i) {
    for (VertexIndex v : touched_vertices(g, out.pieces[i].segment)) {
      if (at_vertex[v]) {
        parent[find(i)] = find(*at_vertex[v]);
      } else {
        at_vertex[v] = i;
      }
    }
  }
  std::vector<std::optional<std::size_t>> label(out.pieces.size());
  for (std::size_t i = 0; i < out.pieces.size(); ++i) {
    auto r = find(i);
    if (!label[r]) label[r] = out.component_count++;
    out.pieces[i].component = *label[r];
  }
  return out;
}

/// Joins same-edge flat maxima at edge distance <= pi / (2k). For the
/// global set each join is checked by evaluating combinations at interior
/// targets; for the local set the join holds by the two-maxima combination.
inline std::vector<HotspotPiece> closure(const MetricGraph& g, const EigenPair& pair,
                                         const std::vector<Candidate>& candidates, bool global,
                                         const HotspotOptions& opts, std::size_t& segments) {
  std::vector<HotspotPiece> out;
  const double reach = M_PI / (2.0 * pair.k) * (1.0 + 1e-12);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const double L = g.length(e);
    const Edge& edge = g.edge(e);
    struct Flat {
      double offset;
      const Candidate* c;
    };
    std::vector<Flat> flats;
    for (const auto& c : candidates) {
      if (global && !c.global) continue;
      std::vector<double> offsets;
      if (auto v = vertex_at(g, c.point)) {
        if (*v == edge.origin) offsets.push_back(0.0);
        if (*v == edge.terminal) offsets.push_back(L);
      } else if (c.point.edge == e) {
        offsets.push_back(c.point.offset);
      }
      if (offsets.empty()) continue;
      EigenFunction f = from_basis(pair, c.witness);
      const double amp = f.traces[e].amplitude();
      if (!(amp > 0.0)) continue;
      for (double x : offsets) {
        if (std::abs(f.traces[e].slope(x)) <= 1e-7 * pair.k * amp) flats.push_back({x, &c});
      }
    }
    std::sort(flats.begin(), flats.end(), [](const Flat& a, const Flat& b) { return a.offset < b.offset; });
    for (std::size_t i = 0; i + 1 < flats.size(); ++i) {
      const Flat& a = flats[i];
      const Flat& b = flats[i + 1];
      const double gap = b.offset - a.offset;
      if (gap <= g.point_tolerance() || gap > reach) continue;
      EigenFunction f0 = from_basis(pair, a.c->witness);
      EigenFunction f1 = from_basis(pair, b.c->witness);
      std::vector<double> witness;
      bool ok = true;
      for (std::size_t j = 1; j <= opts.closure_checks && ok; ++j) {
        double y = a.offset + gap * static_cast<double>(j) / static_cast<double>(opts.closure_checks + 1);
        Combination comb;
        try {
          comb = combine(g, f0, f1, e, a.offset, b.offset, y);
        } catch (const Error&) {
          ok = false;
          break;
        }
        if (global) {
          auto ext = extrema_single(g, comb.function, opts.tol);
          double sup = std::max(ext.max_value, -ext.min_value);
          ok = comb.function.traces[e].value(y) >= ext.max_value - opts.tol * sup;
        }
        if (witness.empty()) {
          witness.resize(pair.basis.size());
          for (std::size_t i2 = 0; i2 < pair.basis.size(); ++i2) witness[i2] = inner(g, comb.function, pair.basis[i2]);
        }
      }
      if (!ok) continue;
      ++segments;
      HotspotPiece piece;
      piece.segment = {e, a.offset, b.offset};
      piece.has_max = true;
      piece.has_min = true;  // the negated functions give the same segment as minima
      piece.witnesses = {to_vector(a.c->witness), to_vector(b.c->witness), witness};
      out.push_back(std::move(piece));
    }
  }
  return out;
}

}  // namespace detail

/// M and M_loc for the mu_2 pair (or any eigenpair with k > 0).
inline HotspotReport hotspot_sets(const MetricGraph& g, const EigenPair& pair, const HotspotOptions& opts = {}) {
  if (!(pair.k > 0.0) || pair.basis.empty()) fail(ErrorCode::BadParameter, "hot spots need a nonconstant eigenpair");
  HotspotReport report;
  report.mu = pair.mu;
  report.k = pair.k;
  const std::size_t d = pair.basis.size();
  report.multiplicity = d;
  report.equality_claimed = d == 1;

  std::vector<Eigen::VectorXd> dirs;
  if (d == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
  } else {
    std::size_t count = opts.directions ? opts.directions : (d == 2 ? 720 : 4096);
    dirs = detail::sphere_directions(d, count);
    // Subspaces where outgoing derivatives at a vertex vanish (one end, or all ends).
    double amp = 0.0;
    for (const auto& f : pair.basis) amp = std::max(amp, max_amplitude(f));
    const double abs_tol = 1e-9 * pair.k * amp;
    std::vector<Eigen::MatrixXd> subspaces;
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
      const auto& ends = g.graph().ends_at(v);
      Eigen::MatrixXd all(static_cast<Eigen::Index>(ends.size()), static_cast<Eigen::Index>(d));
      for (std::size_t r = 0; r < ends.size(); ++r) {
        for (std::size_t i = 0; i < d; ++i) {
          all(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = outgoing_derivative(g, pair.basis[i], ends[r]);
        }
        if (ends.size() > 1) subspaces.push_back(detail::null_basis(all.row(static_cast<Eigen::Index>(r)), abs_tol));
      }
      subspaces.push_back(detail::null_basis(all, abs_tol));
    }
    for (const auto& S : subspaces) {
      const auto m = static_cast<std::size_t>(S.cols());
      if (m == 0 || m == d) continue;
      for (const auto& u : detail::sphere_directions(m, m == 2 ? 72 : 256)) dirs.push_back(S * u);
    }
  }
  report.directions = dirs.size();

  std::vector<detail::Candidate> candidates;
  for (const auto& c : dirs) {
    EigenFunction f = detail::from_basis(pair, c);
    if (!(max_amplitude(f) > 0.0)) continue;
    auto ext = extrema_single(g, f, opts.tol);
    for (const auto& p : ext.local) {
      bool is_max = p.kind == ExtremumKind::Max;
      candidates.push_back({p.location, is_max, p.global, is_max ? c : Eigen::VectorXd(-c)});
    }
  }

  auto build = [&](bool global) {
    std::vector<HotspotPiece> pieces;
    for (const auto& c : candidates) {
      if (global && !c.global) continue;
      HotspotPiece piece;
      piece.segment = {c.point.edge, c.point.offset, c.point.offset};
      piece.has_max = c.max;
      piece.has_min = !c.max;
      piece.witnesses = {detail::to_vector(c.max ? c.witness : Eigen::VectorXd(-c.witness))};
      pieces.push_back(std::move(piece));
    }
    if (d > 1) {
      auto segs = detail::closure(g, pair, candidates, global, opts, report.closure_segments);
      pieces.insert(pieces.end(), segs.begin(), segs.end());
    }
    return detail::assemble(g, std::move(pieces));
  };
  report.global = build(true);
  report.local = build(false);
  return report;
}

/// Global extrema of one eigenfunction as a hot-spot set (exact).
inline HotspotSet extrema_set(const MetricGraph& g, const EigenFunction& f, double tol = default_tol_eig()) {
  std::vector<HotspotPiece> pieces;
  for (const auto& p : extrema_single(g, f, tol).global) {
    HotspotPiece piece;
    piece.segment = {p.location.edge, p.location.offset, p.location.offset};
    piece.has_max = p.kind == ExtremumKind::Max;
    piece.has_min = !piece.has_max;
    pieces.push_back(piece);
  }
  return detail::assemble(g, std::move(pieces));
}

}  // namespace qghot

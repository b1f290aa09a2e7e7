#pragma once

// Shortest-path metric on a metric graph and exact diameter computation.
//
// Between a point at offset s on edge e and a point at offset t on edge f the
// distance is the minimum of finitely many affine functions of (s, t): the
// four endpoint routings, plus the direct route when e = f. The minimum of
// affine functions is concave, so its maximum over a polygon is attained at a
// vertex of the arrangement formed by the polygon sides and the lines where two
// routings tie. Enumerating those candidates gives the exact maximum.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "qghot/graph.hpp"

namespace qghot {

/// A closed piece [lo, hi] of one edge; lo == hi is a single point.
struct EdgeSegment {
  EdgeIndex edge = 0;
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {

struct Affine {
  double a = 0.0, b = 0.0, c = 0.0;  // a + b*s + c*t
  double operator()(double s, double t) const { return a + b * s + c * t; }
};

struct Line {
  double p = 0.0, q = 0.0, r = 0.0;  // p*s + q*t = r
};

}  // namespace detail

class GraphMetric {
 public:
  explicit GraphMetric(const MetricGraph& g) : g_(&g) {
    const std::size_t n = g.vertex_count();
    const double inf = std::numeric_limits<double>::infinity();
    dist_.assign(n, std::vector<double>(n, inf));
    for (VertexIndex v = 0; v < n; ++v) dist_[v][v] = 0.0;
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      const Edge& edge = g.edge(e);
      double& d = dist_[edge.origin][edge.terminal];
      d = std::min(d, g.length(e));
      dist_[edge.terminal][edge.origin] = d;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (dist_[i][k] + dist_[k][j] < dist_[i][j]) dist_[i][j] = dist_[i][k] + dist_[k][j];
  }

  double vertex_distance(VertexIndex a, VertexIndex b) const { return dist_.at(a).at(b); }

  double distance(const GraphPoint& p, const GraphPoint& q) const {
    validate_point(*g_, p);
    validate_point(*g_, q);
    double s = std::clamp(p.offset, 0.0, g_->length(p.edge));
    double t = std::clamp(q.offset, 0.0, g_->length(q.edge));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : routings(p.edge, q.edge)) best = std::min(best, f(s, t));
    if (p.edge == q.edge) best = std::min(best, std::abs(s - t));
    return best;
  }

  /// Exact max of distance(x, y) over x in a, y in b.
  double max_distance(const EdgeSegment& a, const EdgeSegment& b) const {
    auto fs = routings(a.edge, b.edge);
    if (a.edge != b.edge) return maximize(fs, a, b, {});
    // Same edge: split along the diagonal so the direct route is affine on each side.
    auto lower = fs;
    lower.push_back({0.0, -1.0, 1.0});  // t - s on {s <= t}
    auto upper = fs;
    upper.push_back({0.0, 1.0, -1.0});  // s - t on {s >= t}
    double m1 = maximize(lower, a, b, detail::Line{1.0, -1.0, 0.0}, -1);
    double m2 = maximize(upper, a, b, detail::Line{1.0, -1.0, 0.0}, +1);
    return std::max(m1, m2);
  }

  double diameter() const {
    double best = 0.0;
    for (EdgeIndex e = 0; e < g_->edge_count(); ++e) {
      for (EdgeIndex f = e; f < g_->edge_count(); ++f) {
        best = std::max(best, max_distance({e, 0.0, g_->length(e)}, {f, 0.0, g_->length(f)}));
      }
    }
    return best;
  }

 private:
  std::vector<detail::Affine> routings(EdgeIndex e, EdgeIndex f) const {
    const Edge& ee = g_->edge(e);
    const Edge& ff = g_->edge(f);
    double le = g_->length(e);
    double lf = g_->length(f);
    std::vector<detail::Affine> out;
    // s measured from origin of e, t from origin of f.
    out.push_back({dist_[ee.origin][ff.origin], 1.0, 1.0});
    out.push_back({dist_[ee.origin][ff.terminal] + lf, 1.0, -1.0});
    out.push_back({dist_[ee.terminal][ff.origin] + le, -1.0, 1.0});
    out.push_back({dist_[ee.terminal][ff.terminal] + le + lf, -1.0, -1.0});
    return out;
  }

  /// Max over the rectangle a x b (optionally intersected with the half-plane
  /// side * (s - t) >= 0) of the minimum of fs.
  double maximize(const std::vector<detail::Affine>& fs, const EdgeSegment& a, const EdgeSegment& b,
                  std::optional<detail::Line> diagonal, int side = 0) const {
    std::vector<detail::Line> lines = {
        {1.0, 0.0, a.lo}, {1.0, 0.0, a.hi}, {0.0, 1.0, b.lo}, {0.0, 1.0, b.hi}};
    if (diagonal) lines.push_back(*diagonal);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      for (std::size_t j = i + 1; j < fs.size(); ++j) {
        detail::Line l{fs[i].b - fs[j].b, fs[i].c - fs[j].c, fs[j].a - fs[i].a};
        if (std::abs(l.p) + std::abs(l.q) > 0.0) lines.push_back(l);
      }
    }
    const double scale = std::max({1.0, std::abs(a.hi), std::abs(b.hi)});
    const double tol = 1e-12 * scale;
    auto feasible = [&](double s, double t) {
      if (s < a.lo - tol || s > a.hi + tol || t < b.lo - tol || t > b.hi + tol) return false;
      if (side != 0 && side * (s - t) < -tol) return false;
      return true;
    };
    auto value = [&](double s, double t) {
      s = std::clamp(s, a.lo, a.hi);
      t = std::clamp(t, b.lo, b.hi);
      double m = std::numeric_limits<double>::infinity();
      for (const auto& f : fs) m = std::min(m, f(s, t));
      return m;
    };
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const auto& l1 = lines[i];
        const auto& l2 = lines[j];
        double det = l1.p * l2.q - l1.q * l2.p;
        if (std::abs(det) < 1e-14) continue;
        double s = (l1.r * l2.q - l1.q * l2.r) / det;
        double t = (l1.p * l2.r - l1.r * l2.p) / det;
        if (feasible(s, t)) best = std::max(best, value(s, t));
      }
    }
    // Degenerate segments (points) give parallel side lines; evaluate corners directly.
    for (double s : {a.lo, a.hi}) {
      for (double t : {b.lo, b.hi}) {
        if (feasible(s, t)) best = std::max(best, value(s, t));
      }
    }
    return best;
  }

  const MetricGraph* g_;
  std::vector<std::vector<double>> dist_;
};

inline double distance(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q) {
  return GraphMetric(g).distance(p, q);
}

inline double diameter(const MetricGraph& g) { return GraphMetric(g).diameter(); }

}  // namespace qghot

#pragma once

// SVG figure of an eigenfunction: a force-directed drawing of the graph with
// edges colored by value and hot spots marked, and below it one profile panel
// per edge ("unrolled" view). Marker positions in the profile panels carry
// data-edge / data-offset attributes; the layout itself is cosmetic.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qghot/hotspots/sets.hpp"
#include "qghot/report/report.hpp"

namespace qghot {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

/// Fruchterman-Reingold layout in the unit square; deterministic in the seed.
inline std::vector<Vec2> force_layout(const MetricGraph& g, unsigned seed, int iterations = 400) {
  const std::size_t n = g.vertex_count();
  std::vector<Vec2> pos(n);
  if (n == 1) {
    pos[0] = {0.5, 0.5};
    return pos;
  }
  std::mt19937 rng(seed);
  for (auto& p : pos) {
    p.x = 0.1 + 0.8 * (rng() / static_cast<double>(rng.max()));
    p.y = 0.1 + 0.8 * (rng() / static_cast<double>(rng.max()));
  }
  const double ideal = 1.0 / std::sqrt(static_cast<double>(n));
  const double mean_len = g.total_length() / static_cast<double>(g.edge_count());
  double temp = 0.1;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Vec2> disp(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
        double d = std::max(std::hypot(dx, dy), 1e-4);
        double f = ideal * ideal / d;
        disp[i].x += dx / d * f;
        disp[i].y += dy / d * f;
        disp[j].x -= dx / d * f;
        disp[j].y -= dy / d * f;
      }
    }
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      const Edge& edge = g.edge(e);
      if (edge.is_loop()) continue;
      auto a = edge.origin, b = edge.terminal;
      double dx = pos[a].x - pos[b].x, dy = pos[a].y - pos[b].y;
      double d = std::max(std::hypot(dx, dy), 1e-4);
      double want = ideal * std::clamp(g.length(e) / mean_len, 0.3, 3.0);
      double f = d * d / want;
      disp[a].x -= dx / d * f;
      disp[a].y -= dy / d * f;
      disp[b].x += dx / d * f;
      disp[b].y += dy / d * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double d = std::max(std::hypot(disp[i].x, disp[i].y), 1e-12);
      double step = std::min(d, temp);
      pos[i].x += disp[i].x / d * step;
      pos[i].y += disp[i].y / d * step;
    }
    temp = std::max(temp * 0.985, 1e-4);
  }
  double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
  for (const auto& p : pos) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double span = std::max({maxx - minx, maxy - miny, 1e-9});
  for (auto& p : pos) {
    p.x = 0.15 + 0.7 * (p.x - minx) / span;
    p.y = 0.15 + 0.7 * (p.y - miny) / span;
  }
  return pos;
}

namespace detail {

/// Drawing curve of each edge: straight, bent (parallel edges) or a loop.
class EdgeCurves {
 public:
  EdgeCurves(const MetricGraph& g, std::vector<Vec2> pos) : g_(g), pos_(std::move(pos)) {
    std::map<std::pair<VertexIndex, VertexIndex>, std::vector<EdgeIndex>> groups;
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      auto a = g.edge(e).origin, b = g.edge(e).terminal;
      groups[{std::min(a, b), std::max(a, b)}].push_back(e);
    }
    slot_.resize(g.edge_count());
    count_.resize(g.edge_count());
    for (const auto& [key, edges] : groups) {
      for (std::size_t i = 0; i < edges.size(); ++i) {
        slot_[edges[i]] = i;
        count_[edges[i]] = edges.size();
      }
    }
    Vec2 c;
    for (const auto& p : pos_) {
      c.x += p.x / static_cast<double>(pos_.size());
      c.y += p.y / static_cast<double>(pos_.size());
    }
    centre_ = c;
  }

  /// Position at fraction t in [0, 1] along edge e (from origin to terminal).
  Vec2 at(EdgeIndex e, double t) const {
    const Edge& edge = g_.edge(e);
    Vec2 a = pos_[edge.origin], b = pos_[edge.terminal];
    if (edge.is_loop()) {
      double base = std::atan2(a.y - centre_.y, a.x - centre_.x);
      if (pos_.size() == 1) base = -M_PI / 2;
      double dir = base + (static_cast<double>(slot_[e]) - 0.5 * (count_[e] - 1.0)) * 0.9;
      double r = 0.08;
      Vec2 c{a.x + r * std::cos(dir), a.y + r * std::sin(dir)};
      double phi = dir + M_PI + 2.0 * M_PI * t;
      return {c.x + r * std::cos(phi), c.y + r * std::sin(phi)};
    }
    double off = (static_cast<double>(slot_[e]) - 0.5 * (count_[e] - 1.0)) * 0.12;
    Vec2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    double dx = b.x - a.x, dy = b.y - a.y, d = std::max(std::hypot(dx, dy), 1e-9);
    Vec2 ctrl{mid.x - dy / d * off * 2.0, mid.y + dx / d * off * 2.0};
    double u = 1.0 - t;
    return {u * u * a.x + 2 * u * t * ctrl.x + t * t * b.x, u * u * a.y + 2 * u * t * ctrl.y + t * t * b.y};
  }

 private:
  const MetricGraph& g_;
  std::vector<Vec2> pos_;
  std::vector<std::size_t> slot_, count_;
  Vec2 centre_;
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Diverging blue - white - red for v in [-1, 1].
inline std::string color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  const double lo[3] = {33, 102, 172}, hi[3] = {178, 24, 43}, mid[3] = {247, 247, 247};
  const double* end = v < 0 ? lo : hi;
  double t = std::abs(v);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(mid[0] + t * (end[0] - mid[0]) + 0.5),
                static_cast<int>(mid[1] + t * (end[1] - mid[1]) + 0.5), static_cast<int>(mid[2] + t * (end[2] - mid[2]) + 0.5));
  return buf;
}

}  // namespace detail

struct PlotOptions {
  unsigned seed = 1;
  std::string title;
};

/// `marks` are the hot-spot pieces to highlight (for example M of the
/// eigenspace); the profile panels mark the extrema of f itself.
inline std::string plot_svg(const MetricGraph& g, const EigenFunction& f, const HotspotSet& marks, const PlotOptions& opts = {}) {
  const double W = 720, H = 480, panel_w = 170, panel_h = 90;
  const std::size_t per_row = 4;
  const std::size_t rows = (g.edge_count() + per_row - 1) / per_row;
  const double total_h = H + 30 + rows * (panel_h + 40);
  const double sup = std::max(sup_norm(g, f), 1e-300);
  detail::EdgeCurves curves(g, force_layout(g, opts.seed));
  auto X = [&](double x) { return detail::num(x * W); };
  auto Y = [&](double y) { return detail::num(y * H); };
  using detail::num;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(total_h)
    << "\" viewBox=\"0 0 " << num(W) << ' ' << num(total_h) << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << (opts.title.empty() ? g.name() : opts.title)
    << "</text>\n";
  s << "<g id=\"graph\" stroke-width=\"5\" stroke-linecap=\"round\">\n";
  const int pieces = 40;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const double L = g.length(e);
    for (int i = 0; i < pieces; ++i) {
      Vec2 a = curves.at(e, static_cast<double>(i) / pieces), b = curves.at(e, static_cast<double>(i + 1) / pieces);
      double v = f.traces[e].value(L * (i + 0.5) / pieces) / sup;
      s << "<line x1=\"" << X(a.x) << "\" y1=\"" << Y(a.y) << "\" x2=\"" << X(b.x) << "\" y2=\"" << Y(b.y) << "\" stroke=\""
        << detail::color(v) << "\"/>\n";
    }
  }
  s << "</g>\n<g id=\"vertices\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    Vec2 p = g.degree(v) > 0 ? curves.at(g.graph().ends_at(v).front().edge,
                                         g.graph().ends_at(v).front().side == Side::Start ? 0.0 : 1.0)
                             : Vec2{0.5, 0.5};
    s << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"3\" fill=\"#333\"/>";
    s << "<text x=\"" << num(p.x * W + 6) << "\" y=\"" << num(p.y * H - 6) << "\">" << g.graph().vertex_name(v) << "</text>\n";
  }
  s << "</g>\n<g id=\"hotspots\">\n";
  for (const auto& piece : marks.pieces) {
    const double L = g.length(piece.segment.edge);
    std::string fill = piece.has_max && piece.has_min ? "#7b3294" : piece.has_max ? "#b2182b" : "#2166ac";
    if (piece.is_point()) {
      Vec2 p = curves.at(piece.segment.edge, piece.segment.lo / L);
      s << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"7\" fill=\"" << fill
        << "\" fill-opacity=\"0.6\" stroke=\"black\"/>\n";
      continue;
    }
    s << "<polyline fill=\"none\" stroke=\"#fdb863\" stroke-opacity=\"0.8\" stroke-width=\"11\" points=\"";
    for (int i = 0; i <= 20; ++i) {
      double t = (piece.segment.lo + (piece.segment.hi - piece.segment.lo) * i / 20.0) / L;
      Vec2 p = curves.at(piece.segment.edge, t);
      s << X(p.x) << ',' << Y(p.y) << ' ';
    }
    s << "\"/>\n";
  }
  s << "</g>\n<g id=\"unrolled\" font-family=\"sans-serif\" font-size=\"11\">\n";
  const auto ext = extrema_single(g, f);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const double ox = 20 + (e % per_row) * (panel_w + 10), oy = H + 30 + (e / per_row) * (panel_h + 40);
    const double L = g.length(e);
    auto px = [&](double x) { return ox + panel_w * x / L; };
    auto py = [&](double v) { return oy + panel_h * (0.5 - 0.45 * v / sup); };
    s << "<text x=\"" << num(ox) << "\" y=\"" << num(oy - 6) << "\">" << g.edge(e).id << " (L=" << fmt(L) << ")</text>\n";
    s << "<rect x=\"" << num(ox) << "\" y=\"" << num(oy) << "\" width=\"" << num(panel_w) << "\" height=\"" << num(panel_h)
      << "\" fill=\"none\" stroke=\"#bbb\"/>\n";
    s << "<line x1=\"" << num(ox) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(ox + panel_w) << "\" y2=\"" << num(py(0))
      << "\" stroke=\"#ddd\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (int i = 0; i <= 60; ++i) {
      double x = L * i / 60.0;
      s << num(px(x)) << ',' << num(py(f.traces[e].value(x))) << ' ';
    }
    s << "\"/>\n";
    for (const auto& p : ext.local) {
      // A vertex extremum shows up at the matching end of every incident edge.
      std::vector<double> offsets;
      if (auto v = vertex_at(g, p.location)) {
        if (g.edge(e).origin == *v) offsets.push_back(0.0);
        if (g.edge(e).terminal == *v) offsets.push_back(L);
      } else if (p.location.edge == e) {
        offsets.push_back(p.location.offset);
      }
      for (double x : offsets) {
        s << "<circle class=\"" << to_string(p.kind) << (p.global ? " global" : "") << "\" data-edge=\"" << g.edge(e).id
          << "\" data-offset=\"" << fmt(x) << "\" cx=\"" << num(px(x)) << "\" cy=\"" << num(py(p.value)) << "\" r=\"4\" fill=\""
          << (p.kind == ExtremumKind::Max ? "#b2182b" : "#2166ac") << "\"/>\n";
      }
    }
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace qghot

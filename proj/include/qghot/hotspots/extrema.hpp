#pragma once

// Exact extrema of a single eigenfunction. On an edge a trace is
// R cos(k x - phi), so interior critical points sit at x = (phi + j pi) / k and
// are maxima exactly where the value is positive. A vertex is a local maximum
// when its value is positive and no outgoing derivative is positive (a zero
// derivative is resolved by psi'' = -mu psi < 0).

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qghot/spectral/trace.hpp"

namespace qghot {

enum class ExtremumKind { Max, Min };

inline const char* to_string(ExtremumKind k) { return k == ExtremumKind::Max ? "max" : "min"; }

struct ExtremumPoint {
  GraphPoint location;
  double value = 0.0;
  ExtremumKind kind = ExtremumKind::Max;
  bool global = false;
  std::vector<double> source;  // coefficients in the eigenspace basis, if known
};

struct ExtremaSets {
  std::vector<ExtremumPoint> global;  // M_psi
  std::vector<ExtremumPoint> local;   // M_psi,loc (contains the global ones)
  double max_value = 0.0;
  double min_value = 0.0;
};

/// All critical offsets of one trace strictly inside (0, L), keeping a margin
/// of `margin` from the ends.
inline std::vector<double> interior_critical_points(const EdgeTrace& t, double L, double margin) {
  std::vector<double> out;
  if (t.k == 0.0 || t.amplitude() == 0.0) return out;
  const double phi = std::atan2(t.B, t.A);
  const double step = M_PI / t.k;
  const double x0 = phi / t.k;
  for (double j = std::ceil((margin - x0) / step);; j += 1.0) {
    double x = x0 + j * step;
    if (x >= L - margin) break;
    if (x > margin) out.push_back(x);
  }
  return out;
}

/// Classification of a vertex: +1 local max, -1 local min, 0 neither.
inline int vertex_extremum_type(const MetricGraph& g, const EigenFunction& f, VertexIndex v, double tol) {
  const double amp = max_amplitude(f);
  const double val = value_at_vertex(g, f, v);
  if (std::abs(val) <= tol * amp) return 0;
  const double slope_tol = tol * std::max(f.k, 1.0) * amp;
  for (const auto& end : g.graph().ends_at(v)) {
    double d = outgoing_derivative(g, f, end);
    if (val > 0.0 && d > slope_tol) return 0;
    if (val < 0.0 && d < -slope_tol) return 0;
  }
  return val > 0.0 ? 1 : -1;
}

/// M_psi and M_psi,loc of an eigenfunction with k > 0. Global ties are merged
/// when values differ by at most tol * sup|psi|.
inline ExtremaSets extrema_single(const MetricGraph& g, const EigenFunction& f, double tol = default_tol_eig()) {
  if (!(f.k > 0.0)) fail(ErrorCode::BadParameter, "extrema need a nonconstant eigenfunction (k > 0)");
  if (f.traces.size() != g.edge_count()) fail(ErrorCode::BadParameter, "eigenfunction does not match the graph");
  const double amp = max_amplitude(f);
  if (!(amp > 0.0)) fail(ErrorCode::ZeroEigenfunction, "eigenfunction vanishes identically");
  ExtremaSets out;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    int type = vertex_extremum_type(g, f, v, tol);
    if (type == 0) continue;
    out.local.push_back({vertex_point(g, v), value_at_vertex(g, f, v), type > 0 ? ExtremumKind::Max : ExtremumKind::Min,
                         false, {}});
  }
  const double margin = g.point_tolerance();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const EdgeTrace& t = f.traces[e];
    // A zero-valued critical point means the trace vanishes on the edge.
    if (t.amplitude() <= tol * amp) continue;
    for (double x : interior_critical_points(t, g.length(e), margin)) {
      double val = t.value(x);
      out.local.push_back({{e, x}, val, val > 0.0 ? ExtremumKind::Max : ExtremumKind::Min, false, {}});
    }
  }
  std::sort(out.local.begin(), out.local.end(),
            [&](const ExtremumPoint& a, const ExtremumPoint& b) { return point_less(g, a.location, b.location); });
  double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
  for (const auto& p : out.local) {
    hi = std::max(hi, p.value);
    lo = std::min(lo, p.value);
  }
  out.max_value = hi;
  out.min_value = lo;
  const double sup = std::max(hi, -lo);
  for (auto& p : out.local) {
    if (p.kind == ExtremumKind::Max && p.value >= hi - tol * sup) p.global = true;
    if (p.kind == ExtremumKind::Min && p.value <= lo + tol * sup) p.global = true;
    if (p.global) out.global.push_back(p);
  }
  return out;
}

}  // namespace qghot

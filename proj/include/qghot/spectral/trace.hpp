#pragma once

// Functions on a metric graph that are a single sinusoid on every edge:
// f_e(x) = A cos(k x) + B sin(k x), x in [0, L(e)]. For k = 0 the trace is the
// constant A. All integrals are evaluated in closed form.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qghot/graph.hpp"

namespace qghot {

struct EdgeTrace {
  double A = 0.0;
  double B = 0.0;
  double k = 0.0;

  double value(double x) const { return k == 0.0 ? A : A * std::cos(k * x) + B * std::sin(k * x); }
  double slope(double x) const { return k == 0.0 ? 0.0 : k * (-A * std::sin(k * x) + B * std::cos(k * x)); }
  /// The derivative as a trace with the same wavenumber.
  EdgeTrace derivative() const { return {k * B, -k * A, k}; }
  double amplitude() const { return k == 0.0 ? std::abs(A) : std::hypot(A, B); }
};

/// One trace per edge, in the graph's edge order.
struct EigenFunction {
  double k = 0.0;
  std::vector<EdgeTrace> traces;
};

/// Residual-oriented tolerance for eigenfunctions; QGHOT_TOL overrides it.
inline double default_tol_eig() {
  if (const char* env = std::getenv("QGHOT_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && std::isfinite(v)) return v;
  }
  return 1e-9;
}

namespace detail {

/// Integral of cos(w x) over [0, L].
inline double int_cos(double w, double L) {
  if (std::abs(w) * L < 1e-8) return L - w * w * L * L * L / 6.0;
  return std::sin(w * L) / w;
}

/// Integral of sin(w x) over [0, L].
inline double int_sin(double w, double L) {
  if (std::abs(w) * L < 1e-8) return w * L * L / 2.0;
  double h = std::sin(0.5 * w * L);
  return 2.0 * h * h / w;
}

}  // namespace detail

/// Integral over [0, L] of the product of two traces (wavenumbers may differ).
inline double integrate_product(const EdgeTrace& f, const EdgeTrace& g, double L) {
  using detail::int_cos;
  using detail::int_sin;
  const double a = f.k, b = g.k;
  // Constant traces have no sine part.
  const double B1 = a == 0.0 ? 0.0 : f.B;
  const double B2 = b == 0.0 ? 0.0 : g.B;
  const double cm = int_cos(a - b, L), cp = int_cos(a + b, L);
  const double sp = int_sin(a + b, L), sm = int_sin(a - b, L);
  return 0.5 * (f.A * g.A * (cm + cp) + B1 * B2 * (cm - cp) + f.A * B2 * (sp - sm) + B1 * g.A * (sp + sm));
}

inline double integrate(const EdgeTrace& f, double L) {
  return f.A * detail::int_cos(f.k, L) + (f.k == 0.0 ? 0.0 : f.B * detail::int_sin(f.k, L));
}

inline double inner(const MetricGraph& g, const EigenFunction& f, const EigenFunction& h) {
  double s = 0.0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) s += integrate_product(f.traces[e], h.traces[e], g.length(e));
  return s;
}

inline double norm(const MetricGraph& g, const EigenFunction& f) { return std::sqrt(inner(g, f, f)); }

inline double integral(const MetricGraph& g, const EigenFunction& f) {
  double s = 0.0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) s += integrate(f.traces[e], g.length(e));
  return s;
}

/// Integral of |f'|^2 over the graph.
inline double energy(const MetricGraph& g, const EigenFunction& f) {
  double s = 0.0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    auto d = f.traces[e].derivative();
    s += integrate_product(d, d, g.length(e));
  }
  return s;
}

inline EigenFunction scaled(const EigenFunction& f, double c) {
  EigenFunction out = f;
  for (auto& t : out.traces) {
    t.A *= c;
    t.B *= c;
  }
  return out;
}

/// a*f + b*h for traces sharing their wavenumbers edge by edge.
inline EigenFunction combine_linear(const EigenFunction& f, double a, const EigenFunction& h, double b) {
  EigenFunction out = f;
  for (std::size_t e = 0; e < out.traces.size(); ++e) {
    out.traces[e].A = a * f.traces[e].A + b * h.traces[e].A;
    out.traces[e].B = a * f.traces[e].B + b * h.traces[e].B;
  }
  return out;
}

inline double evaluate(const MetricGraph& g, const EigenFunction& f, const GraphPoint& p) {
  validate_point(g, p);
  return f.traces.at(p.edge).value(std::clamp(p.offset, 0.0, g.length(p.edge)));
}

/// Derivative at an edge end, pointing into the edge (away from the vertex).
inline double outgoing_derivative(const MetricGraph& g, const EigenFunction& f, const EdgeEnd& end) {
  const EdgeTrace& t = f.traces.at(end.edge);
  return end.side == Side::Start ? t.slope(0.0) : -t.slope(g.length(end.edge));
}

inline double value_at_end(const MetricGraph& g, const EigenFunction& f, const EdgeEnd& end) {
  const EdgeTrace& t = f.traces.at(end.edge);
  return end.side == Side::Start ? t.value(0.0) : t.value(g.length(end.edge));
}

inline double value_at_vertex(const MetricGraph& g, const EigenFunction& f, VertexIndex v) {
  return value_at_end(g, f, g.graph().ends_at(v).front());
}

/// Derivative at p in the direction of increasing offset; at a vertex the
/// direction is the given incident edge end (pointing into that edge).
inline double derivative(const MetricGraph& g, const EigenFunction& f, const GraphPoint& p,
                         std::optional<EdgeEnd> direction = std::nullopt) {
  validate_point(g, p);
  if (auto v = vertex_at(g, p)) {
    if (!direction) fail(ErrorCode::InvalidPoint, "derivative at a vertex needs an incident edge direction");
    if (g.graph().vertex_of(*direction) != *v) fail(ErrorCode::InvalidPoint, "direction is not incident to the vertex");
    return outgoing_derivative(g, f, *direction);
  }
  return f.traces.at(p.edge).slope(p.offset);
}

/// Exact sup of |f| over one edge.
inline double edge_sup(const EdgeTrace& t, double L) {
  double best = std::max(std::abs(t.value(0.0)), std::abs(t.value(L)));
  if (t.k == 0.0) return best;
  // Interior critical points: k x = atan2(B, A) + j pi.
  double phi = std::atan2(t.B, t.A);
  double step = M_PI / t.k;
  double x = phi / t.k;
  double jmin = std::ceil(-x / step);
  for (double j = jmin;; j += 1.0) {
    double c = x + j * step;
    if (c > L) break;
    if (c >= 0.0) best = std::max(best, std::abs(t.value(c)));
  }
  return best;
}

inline double sup_norm(const MetricGraph& g, const EigenFunction& f) {
  double s = 0.0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) s = std::max(s, edge_sup(f.traces[e], g.length(e)));
  return s;
}

inline double sup_derivative(const MetricGraph& g, const EigenFunction& f) {
  double s = 0.0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) s = std::max(s, edge_sup(f.traces[e].derivative(), g.length(e)));
  return s;
}

inline double max_amplitude(const EigenFunction& f) {
  double s = 0.0;
  for (const auto& t : f.traces) s = std::max(s, t.amplitude());
  return s;
}

struct VertexResiduals {
  double continuity = 0.0;  // max spread of endpoint values at a vertex
  double kirchhoff = 0.0;   // max |sum of outgoing derivatives|
};

inline VertexResiduals vertex_residuals(const MetricGraph& g, const EigenFunction& f) {
  VertexResiduals r;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    const auto& ends = g.graph().ends_at(v);
    double v0 = value_at_end(g, f, ends.front());
    double sum = 0.0;
    for (const auto& end : ends) {
      r.continuity = std::max(r.continuity, std::abs(value_at_end(g, f, end) - v0));
      sum += outgoing_derivative(g, f, end);
    }
    r.kirchhoff = std::max(r.kirchhoff, std::abs(sum));
  }
  return r;
}

/// Hook invoked on every eigenfunction the solvers hand out; the test harness
/// installs assertions here.
inline std::function<void(const MetricGraph&, const EigenFunction&, double)>& eigenfunction_observer() {
  static std::function<void(const MetricGraph&, const EigenFunction&, double)> hook;
  return hook;
}

inline void notify_eigenfunction(const MetricGraph& g, const EigenFunction& f, double mu) {
  if (auto& hook = eigenfunction_observer()) hook(g, f, mu);
}

}  // namespace qghot

#pragma once

// Rayleigh quotients, in closed form for sinusoid traces and exactly for
// piecewise-linear sampled functions.

#include <cmath>
#include <vector>

#include "qghot/spectral/trace.hpp"

namespace qghot {

/// Values of a function at equally spaced nodes on every edge, endpoints
/// included (origin first). Interpreted as piecewise linear.
using SampledFunction = std::vector<std::vector<double>>;

inline double rayleigh_quotient(const MetricGraph& g, const EigenFunction& f, bool remove_mean = false) {
  double num = energy(g, f);
  double den = inner(g, f, f);
  if (remove_mean) {
    double m = integral(g, f);
    den -= m * m / g.total_length();
  }
  if (!(den > 1e-300)) fail(ErrorCode::ZeroFunction, "Rayleigh quotient of a zero function");
  return num / den;
}

inline double rayleigh_quotient(const MetricGraph& g, const SampledFunction& f, bool remove_mean = false) {
  if (f.size() != g.edge_count()) fail(ErrorCode::BadParameter, "sampled function needs one sample list per edge");
  double num = 0.0, sq = 0.0, lin = 0.0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const auto& v = f[e];
    if (v.size() < 2) fail(ErrorCode::BadParameter, "each edge needs at least two samples");
    double h = g.length(e) / static_cast<double>(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      double a = v[i], b = v[i + 1];
      num += (b - a) * (b - a) / h;
      sq += h * (a * a + a * b + b * b) / 3.0;
      lin += h * (a + b) / 2.0;
    }
  }
  double den = remove_mean ? sq - lin * lin / g.total_length() : sq;
  if (!(den > 1e-300)) fail(ErrorCode::ZeroFunction, "Rayleigh quotient of a zero function");
  return num / den;
}

}  // namespace qghot

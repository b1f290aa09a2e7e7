#pragma once

// The secular system of the standard Laplacian and an exact eigenvalue
// counting function.
//
// Unknowns are (A_e, B_e) per edge. Each vertex of degree d contributes d - 1
// continuity rows and one Kirchhoff row (sum of outgoing derivatives divided
// by k), so M(k) is square of size 2E.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qghot/graph.hpp"

namespace qghot {

inline Eigen::MatrixXd secular_matrix(const MetricGraph& g, double k) {
  if (!(k > 0.0)) fail(ErrorCode::BadParameter, "secular matrix needs k > 0");
  const std::size_t n = 2 * g.edge_count();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::Index row = 0;
  // Value at an end: A (start) or A c + B s (end).
  auto add_value = [&](Eigen::Index r, const EdgeEnd& end, double sign) {
    Eigen::Index col = static_cast<Eigen::Index>(2 * end.edge);
    if (end.side == Side::Start) {
      M(r, col) += sign;
    } else {
      double L = g.length(end.edge);
      M(r, col) += sign * std::cos(k * L);
      M(r, col + 1) += sign * std::sin(k * L);
    }
  };
  // Outgoing derivative / k: B (start) or A s - B c (end).
  auto add_flux = [&](Eigen::Index r, const EdgeEnd& end) {
    Eigen::Index col = static_cast<Eigen::Index>(2 * end.edge);
    if (end.side == Side::Start) {
      M(r, col + 1) += 1.0;
    } else {
      double L = g.length(end.edge);
      M(r, col) += std::sin(k * L);
      M(r, col + 1) -= std::cos(k * L);
    }
  };
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    const auto& ends = g.graph().ends_at(v);
    for (std::size_t i = 1; i < ends.size(); ++i, ++row) {
      add_value(row, ends[i], 1.0);
      add_value(row, ends[0], -1.0);
      // Fixed, k-independent scaling keeps rows O(1) without hiding zeros.
      M.row(row) /= std::sqrt(2.0);
    }
    for (const auto& end : ends) add_flux(row, end);
    M.row(row) /= std::sqrt(static_cast<double>(ends.size()));
    ++row;
  }
  return M;
}

/// Number of eigenvalues (with multiplicity) strictly below k^2, from the
/// Dirichlet decoupling: edgewise Dirichlet count plus the negative index of
/// the vertex Dirichlet-to-Neumann matrix. `margin` measures how far k is from
/// the situations where that index cannot be read off reliably (k close to a
/// Dirichlet eigenvalue of an edge, or to an eigenvalue of the graph);
/// `safe` is margin >= 1.
struct CountResult {
  std::size_t count = 0;
  double margin = 0.0;
  bool safe() const { return margin >= 1.0; }
};

inline CountResult count_below_raw(const MetricGraph& g, double k) {
  CountResult r;
  r.margin = std::numeric_limits<double>::infinity();
  const auto V = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd Lambda = Eigen::MatrixXd::Zero(V, V);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    double L = g.length(e);
    double kl = k * L;
    r.count += static_cast<std::size_t>(std::max(0.0, std::ceil(kl / M_PI) - 1.0));
    double s = std::sin(kl), c = std::cos(kl);
    r.margin = std::min(r.margin, std::abs(s) / 1e-12);
    double w = k / s;
    const Edge& edge = g.edge(e);
    auto a = static_cast<Eigen::Index>(edge.origin);
    auto b = static_cast<Eigen::Index>(edge.terminal);
    if (a == b) {
      Lambda(a, a) += w * (2.0 * c - 2.0);
    } else {
      Lambda(a, a) += w * c;
      Lambda(b, b) += w * c;
      Lambda(a, b) -= w;
      Lambda(b, a) -= w;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lambda, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double scale = std::max(ev.cwiseAbs().maxCoeff(), k);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) ++r.count;
    r.margin = std::min(r.margin, std::abs(ev(i)) / (1e-12 * scale));
  }
  return r;
}

/// Largest relative shift count_below may apply to k.
inline constexpr double count_nudge_limit = 3e-6;

/// Eigenvalue count below (k + tiny shift)^2. When the raw count at k is not
/// trustworthy, k is nudged by relative amounts up to count_nudge_limit; if
/// no nudge is safe, the count with the largest margin is returned.
inline std::size_t count_below(const MetricGraph& g, double k) {
  static constexpr double offsets[] = {0.0,   1e-10, -1e-10, 1e-9, -1e-9, 1e-8,  -1e-8,
                                       1e-7,  -1e-7, 1e-6,   -1e-6, 3e-6, -3e-6};
  CountResult best;
  best.margin = -1.0;
  for (double o : offsets) {
    CountResult r = count_below_raw(g, k * (1.0 + o));
    if (r.safe()) return r.count;
    if (r.margin > best.margin) best = r;
  }
  return best.count;
}

inline double sigma_min(const MetricGraph& g, double k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(secular_matrix(g, k));
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace qghot

#pragma once

// Secular eigensolver: locates eigenvalues by an exact counting function on a
// k-grid, refines each root by golden-section search on the smallest singular
// value of M(k), and turns the nullspace into an L^2-orthonormal basis.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "qghot/spectral/secular.hpp"
#include "qghot/spectral/trace.hpp"

namespace qghot {

struct SolverOptions {
  double tol_eig = default_tol_eig();
  double tol_null = 1e-8;
  /// Scan window cap, as a multiple of the Weyl estimate for the n-th root.
  double window_factor = 8.0;
};

struct EigenDiagnostics {
  double continuity = 0.0;  // max vertex continuity residual / max amplitude
  double kirchhoff = 0.0;   // max Kirchhoff residual / (k * max amplitude)
  double mean = 0.0;        // max |integral| over basis functions
  double gram = 0.0;        // max |Gram - I|
  double sigma = 0.0;       // largest "null" singular value / sigma_max
};

struct EigenPair {
  double mu = 0.0;
  double k = 0.0;
  std::size_t multiplicity = 1;
  std::size_t first_index = 0;  // 0-based position of the first copy in the spectrum
  std::vector<EigenFunction> basis;
  EigenDiagnostics diagnostics;
};

namespace detail {

inline EigenFunction constant_function(const MetricGraph& g) {
  EigenFunction f;
  f.k = 0.0;
  double c = 1.0 / std::sqrt(g.total_length());
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) f.traces.push_back({c, 0.0, 0.0});
  return f;
}

inline EigenFunction from_coefficients(const Eigen::VectorXd& x, double k) {
  EigenFunction f;
  f.k = k;
  for (Eigen::Index e = 0; 2 * e < x.size(); ++e) f.traces.push_back({x(2 * e), x(2 * e + 1), k});
  return f;
}

inline Eigen::VectorXd to_coefficients(const EigenFunction& f) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(2 * f.traces.size()));
  for (std::size_t e = 0; e < f.traces.size(); ++e) {
    x(static_cast<Eigen::Index>(2 * e)) = f.traces[e].A;
    x(static_cast<Eigen::Index>(2 * e + 1)) = f.traces[e].B;
  }
  return x;
}

/// Sign convention: the first vertex (in vertex order) with a non-negligible
/// value gets a positive value; if all vertex values vanish, the first edge
/// carrying the function starts out increasing.
inline EigenFunction fix_sign(const MetricGraph& g, EigenFunction f, double tol) {
  double amp = max_amplitude(f);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    double val = value_at_vertex(g, f, v);
    if (std::abs(val) > tol * amp) return val < 0.0 ? scaled(f, -1.0) : f;
  }
  for (const auto& t : f.traces) {
    if (std::abs(t.B) > tol * amp) return t.B < 0.0 ? scaled(f, -1.0) : f;
  }
  return f;
}

/// Deterministic orthonormal basis of a subspace given by spanning
/// coefficient columns: row echelon form in edge order, then L^2 Gram-Schmidt.
inline std::vector<EigenFunction> canonical_basis(const MetricGraph& g, Eigen::MatrixXd span, double k,
                                                  double tol) {
  Eigen::MatrixXd X = span.transpose();
  const Eigen::Index m = X.rows();
  const double big = X.cwiseAbs().maxCoeff();
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < X.cols() && r < m; ++j) {
    Eigen::Index p;
    double best = X.col(j).segment(r, m - r).cwiseAbs().maxCoeff(&p);
    p += r;
    if (best <= 1e-6 * big) continue;
    X.row(p).swap(X.row(r));
    X.row(r) /= X(r, j);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i != r) X.row(i) -= X(i, j) * X.row(r);
    }
    ++r;
  }
  std::vector<EigenFunction> basis;
  for (Eigen::Index i = 0; i < m; ++i) {
    EigenFunction f = from_coefficients(X.row(i).transpose(), k);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) f = combine_linear(f, 1.0, b, -inner(g, f, b));
    }
    double nf = norm(g, f);
    if (nf <= 0.0) fail(ErrorCode::NullspaceDimensionMismatch, "degenerate nullspace vector");
    basis.push_back(fix_sign(g, scaled(f, 1.0 / nf), tol));
  }
  return basis;
}

inline EigenDiagnostics diagnose(const MetricGraph& g, const std::vector<EigenFunction>& basis) {
  EigenDiagnostics d;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& f = basis[i];
    double amp = std::max(max_amplitude(f), 1e-300);
    auto r = vertex_residuals(g, f);
    d.continuity = std::max(d.continuity, r.continuity / amp);
    if (f.k > 0.0) {
      d.kirchhoff = std::max(d.kirchhoff, r.kirchhoff / (f.k * amp));
      d.mean = std::max(d.mean, std::abs(integral(g, f)));
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      d.gram = std::max(d.gram, std::abs(inner(g, f, basis[j]) - want));
    }
  }
  return d;
}

struct Cluster {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t multiplicity = 0;
};

/// Splits [a, b] (count ca at a, cb at b) until every jump is confined to an
/// interval of relative width <= rel.
inline void isolate(const MetricGraph& g, double a, std::size_t ca, double b, std::size_t cb, double rel,
                    std::vector<Cluster>& out) {
  if (cb <= ca) return;
  if (b - a <= rel * b) {
    out.push_back({a, b, cb - ca});
    return;
  }
  double m = 0.5 * (a + b);
  std::size_t cm = count_below(g, m);
  cm = std::clamp(cm, ca, cb);
  isolate(g, a, ca, m, cm, rel, out);
  isolate(g, m, cm, b, cb, rel, out);
}

inline double smallest_singular_value(const MetricGraph& g, double k) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(secular_matrix(g, k));
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

/// Golden-section minimization of sigma_min(M(k)) on [a, b].
inline double golden_root(const MetricGraph& g, double a, double b, double rel) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = smallest_singular_value(g, x1);
  double f2 = smallest_singular_value(g, x2);
  while (b - a > rel * b) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = smallest_singular_value(g, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = smallest_singular_value(g, x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

/// Number of singular values of M(k) below tol_null * max(sigma_max, 1). The
/// floor keeps the count meaningful when M(k) vanishes entirely (a single loop
/// at k = 2 pi j / L).
inline std::size_t numerical_nullity(const Eigen::VectorXd& s, double tol_null) {
  const double scale = std::max(s(0), 1.0);
  std::size_t n = 0;
  for (Eigen::Index i = s.size() - 1; i >= 0 && s(i) < tol_null * scale; --i) ++n;
  return n;
}

struct Root {
  double k = 0.0;
  std::size_t nullity = 0;
};

/// All roots of sigma_min in [lo, hi]: local minima of a uniform sample,
/// each polished by golden-section search and kept if M(k) is singular there.
inline std::vector<Root> roots_in(const MetricGraph& g, double lo, double hi, double tol_null) {
  constexpr int samples = 41;
  std::vector<double> x(samples), f(samples);
  for (int i = 0; i < samples; ++i) {
    x[i] = lo + (hi - lo) * i / (samples - 1);
    f[i] = smallest_singular_value(g, x[i]);
  }
  std::vector<Root> roots;
  for (int i = 0; i < samples; ++i) {
    bool left = i == 0 || f[i] <= f[i - 1];
    bool right = i == samples - 1 || f[i] < f[i + 1];
    if (!left || !right) continue;
    double k = golden_root(g, x[std::max(i - 1, 0)], x[std::min(i + 1, samples - 1)], 1e-12);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(secular_matrix(g, k));
    std::size_t n = numerical_nullity(svd.singularValues(), tol_null);
    if (n == 0) continue;
    if (!roots.empty() && k - roots.back().k <= 1e-10 * k) {
      if (n > roots.back().nullity) roots.back() = {k, n};
      continue;
    }
    roots.push_back({k, n});
  }
  return roots;
}

}  // namespace detail

/// Builds the eigenpair at a refined root k with the given multiplicity.
inline EigenPair secular_pair_at(const MetricGraph& g, double k, std::size_t multiplicity, std::size_t first_index,
                                 const SolverOptions& opts = {}) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(secular_matrix(g, k), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index n = s.size();
  const double smax = std::max(s(0), 1.0);
  const std::size_t numerically_null = detail::numerical_nullity(s, opts.tol_null);
  if (numerically_null != multiplicity) {
    std::ostringstream msg;
    msg << "at k = " << k << " the eigenvalue count says multiplicity " << multiplicity << " but "
        << numerically_null << " singular values are below " << opts.tol_null << " * sigma_max";
    fail(ErrorCode::NullspaceDimensionMismatch, msg.str());
  }
  const auto m = static_cast<Eigen::Index>(multiplicity);
  EigenPair pair;
  pair.k = k;
  pair.mu = k * k;
  pair.multiplicity = multiplicity;
  pair.first_index = first_index;
  pair.basis = detail::canonical_basis(g, svd.matrixV().rightCols(m), k, opts.tol_eig);
  pair.diagnostics = detail::diagnose(g, pair.basis);
  pair.diagnostics.sigma = s(n - m) / smax;
  for (const auto& f : pair.basis) notify_eigenfunction(g, f, pair.mu);
  return pair;
}

inline EigenPair constant_pair(const MetricGraph& g) {
  EigenPair p;
  p.basis.push_back(detail::constant_function(g));
  p.diagnostics = detail::diagnose(g, p.basis);
  notify_eigenfunction(g, p.basis.front(), 0.0);
  return p;
}

/// Eigenpairs covering at least the first n eigenvalues (counted with
/// multiplicity, mu_1 = 0 included). The last pair may reach past index n.
inline std::vector<EigenPair> secular_eigenpairs(const MetricGraph& g, std::size_t n, const SolverOptions& opts = {}) {
  if (n == 0) fail(ErrorCode::BadParameter, "need at least one eigenvalue");
  std::vector<EigenPair> pairs;
  pairs.push_back(constant_pair(g));
  std::size_t found = 1;
  const double L = g.total_length();
  const double E = static_cast<double>(g.edge_count());
  const double dk = std::min(M_PI / (4.0 * g.max_edge_length()), M_PI / (4.0 * L / E));
  // mu_2 >= pi^2 / L^2, so the count below k0 is exactly one.
  double a = 0.5 * M_PI / L;
  std::size_t ca = count_below(g, a);
  const double cap = opts.window_factor * M_PI * (static_cast<double>(n) + E + 1.0) / L;
  while (found < n) {
    double b = a + dk;
    if (a > cap) {
      std::ostringstream msg;
      msg << "found " << found << " of " << n << " eigenvalues below k = " << cap;
      fail(ErrorCode::ScanExhausted, msg.str());
    }
    std::size_t cb = count_below(g, b);
    if (cb > ca) {
      std::vector<detail::Cluster> clusters;
      detail::isolate(g, a, ca, b, cb, 1e-9, clusters);
      // Counts may have been taken at nudged k: jumps closer than the nudge
      // range belong together, and each cluster is widened by that range.
      std::vector<detail::Cluster> merged;
      for (const auto& c : clusters) {
        if (!merged.empty() && c.lo - merged.back().hi <= 2.0 * count_nudge_limit * c.hi) {
          merged.back().hi = c.hi;
          merged.back().multiplicity += c.multiplicity;
        } else {
          merged.push_back(c);
        }
      }
      for (const auto& c : merged) {
        double pad = 1.01 * count_nudge_limit * c.hi;
        std::size_t got = 0;
        std::vector<detail::Root> roots;
        for (const auto& r : detail::roots_in(g, c.lo - pad, c.hi + pad, opts.tol_null)) {
          if (pairs.size() > 1 && r.k <= pairs.back().k * (1.0 + 1e-10)) continue;
          roots.push_back(r);
          got += r.nullity;
        }
        if (got != c.multiplicity) {
          std::ostringstream msg;
          msg << "near k = " << c.hi << " the eigenvalue count says multiplicity " << c.multiplicity << " but "
              << got << " null directions were found";
          fail(ErrorCode::NullspaceDimensionMismatch, msg.str());
        }
        for (const auto& r : roots) {
          pairs.push_back(secular_pair_at(g, r.k, r.nullity, found, opts));
          found += r.nullity;
        }
      }
    }
    a = b;
    ca = cb;
  }
  return pairs;
}

/// The first n eigenvalues, repeated according to multiplicity.
inline std::vector<double> flatten(const std::vector<EigenPair>& pairs, std::size_t n) {
  std::vector<double> out;
  for (const auto& p : pairs) {
    for (std::size_t i = 0; i < p.multiplicity && out.size() < n; ++i) out.push_back(p.mu);
  }
  return out;
}

/// The pair holding mu_2.
inline EigenPair second_pair(const MetricGraph& g, const SolverOptions& opts = {}) {
  return secular_eigenpairs(g, 2, opts).at(1);
}

/// Normalized element of an eigenspace annihilated by the given linear
/// functionals (rows act on the basis coefficients). Takes the first
/// canonical element of the constrained subspace.
inline EigenFunction constrained_eigenfunction(const MetricGraph& g, const EigenPair& pair,
                                               const std::vector<std::function<double(const EigenFunction&)>>& constraints,
                                               double tol = 1e-9) {
  const auto d = static_cast<Eigen::Index>(pair.basis.size());
  Eigen::MatrixXd C(static_cast<Eigen::Index>(constraints.size()), d);
  for (std::size_t i = 0; i < constraints.size(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) C(static_cast<Eigen::Index>(i), j) = constraints[i](pair.basis[static_cast<std::size_t>(j)]);
  Eigen::VectorXd c;
  if (constraints.empty()) {
    c = Eigen::VectorXd::Unit(d, 0);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s.size() > 0 ? s(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > tol * std::max(smax, 1.0)) ++rank;
    }
    if (rank >= d) fail(ErrorCode::PreconditionUnmet, "constraints leave no nonzero eigenfunction");
    c = svd.matrixV().col(d - 1);
  }
  EigenFunction f = pair.basis.front();
  for (auto& t : f.traces) t.A = t.B = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) f = combine_linear(f, 1.0, pair.basis[static_cast<std::size_t>(j)], c(j));
  f = detail::fix_sign(g, scaled(f, 1.0 / norm(g, f)), tol);
  notify_eigenfunction(g, f, pair.mu);
  return f;
}

/// Linear combination of a pair's basis with the given coefficients.
inline EigenFunction eigenspace_element(const MetricGraph& g, const EigenPair& pair, const std::vector<double>& coeffs) {
  EigenFunction f = scaled(pair.basis.front(), 0.0);
  for (std::size_t j = 0; j < coeffs.size() && j < pair.basis.size(); ++j) f = combine_linear(f, 1.0, pair.basis[j], coeffs[j]);
  double nf = norm(g, f);
  if (nf <= 0.0) fail(ErrorCode::ZeroEigenfunction, "zero coefficient vector");
  f = scaled(f, 1.0 / nf);
  notify_eigenfunction(g, f, pair.mu);
  return f;
}

}  // namespace qghot

#pragma once

// Backend selection and the secular/FEM cross-check.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qghot/spectral/eigen.hpp"
#include "qghot/spectral/fem.hpp"

namespace qghot {

enum class Backend { Secular, Fem };

inline Backend parse_backend(const std::string& name) {
  if (name == "secular") return Backend::Secular;
  if (name == "fem") return Backend::Fem;
  fail(ErrorCode::BadParameter, "unknown backend '" + name + "' (expected secular or fem)");
}

inline std::string to_string(Backend b) { return b == Backend::Secular ? "secular" : "fem"; }

/// Ordered eigenpairs. The FEM backend reports every discrete eigenvalue as
/// its own pair without a sinusoid basis (sampled vectors come from fem_solve).
inline std::vector<EigenPair> eigenvalues(const MetricGraph& g, std::size_t n, Backend backend,
                                          const SolverOptions& opts = {}, double h = 1e-3) {
  if (backend == Backend::Secular) return secular_eigenpairs(g, n, opts);
  auto fem = fem_solve(g, h, n);
  std::vector<EigenPair> out;
  for (std::size_t i = 0; i < fem.values.size(); ++i) {
    EigenPair p;
    p.mu = fem.values[i];
    p.k = std::sqrt(p.mu);
    p.first_index = i;
    out.push_back(std::move(p));
  }
  return out;
}

/// Allowed relative FEM deviation at mesh size h (P1 error is about mu h^2 / 12).
inline double fem_tolerance(double mu, double h) { return std::max(1e-10, mu * h * h); }

/// Compares the first n eigenvalues from both backends; throws
/// BackendDisagreement on any mismatch and returns the FEM values.
inline std::vector<double> cross_check(const MetricGraph& g, std::size_t n, double h, const SolverOptions& opts = {}) {
  auto exact = flatten(secular_eigenpairs(g, n, opts), n);
  auto fem = fem_solve(g, h, n).values;
  for (std::size_t j = 0; j < n; ++j) {
    double err = std::abs(exact[j] - fem[j]);
    bool ok = exact[j] == 0.0 ? err <= 1e-8 : err <= fem_tolerance(exact[j], h) * exact[j];
    if (!ok) {
      std::ostringstream msg;
      msg << "eigenvalue " << j + 1 << ": secular " << exact[j] << " vs fem " << fem[j] << " at h = " << h;
      fail(ErrorCode::BackendDisagreement, msg.str());
    }
  }
  return fem;
}

/// Least-squares slope of log(error) against log(h).
inline double convergence_order(const std::vector<double>& hs, const std::vector<double>& errors) {
  double n = static_cast<double>(hs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    double x = std::log(hs[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qghot

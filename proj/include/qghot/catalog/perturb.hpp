#pragma once

// Length perturbations making an eigenfunction take pairwise distinct values
// on the boundary vertices. Each step moves length between the pendant edges
// of two boundary vertices (their sum is kept), with a step size below the
// current bound; the bound halves after every step.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qghot/spectral/eigen.hpp"
#include "qghot/structure.hpp"

namespace qghot {

struct PerturbOptions {
  std::size_t index = 2;      // 1-based eigenvalue index, mu_1 = 0
  double equal_tol = 1e-9;    // values closer than this times sup|psi| count as equal
  int max_steps = 60;
};

namespace detail {

/// The pair holding mu_index (1-based).
inline EigenPair pair_with_index(const MetricGraph& g, std::size_t index) {
  auto pairs = secular_eigenpairs(g, index);
  for (const auto& p : pairs) {
    if (index - 1 >= p.first_index && index - 1 < p.first_index + p.multiplicity) return p;
  }
  fail(ErrorCode::ScanExhausted, "eigenvalue " + std::to_string(index) + " not found");
}

}  // namespace detail

inline MetricGraph boundary_distinct_perturb(const MetricGraph& g, double eps, unsigned seed,
                                             const PerturbOptions& opts = {}) {
  if (!(eps > 0.0)) fail(ErrorCode::BadParameter, "perturbation bound must be positive");
  if (opts.index < 2) fail(ErrorCode::BadParameter, "eigenvalue index must be >= 2");
  const auto leaves = boundary_vertices(g);
  if (leaves.size() < 2) fail(ErrorCode::NoBoundary, "need at least two boundary vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.25, 0.75);
  MetricGraph cur = g;
  double bound = eps;
  for (int step = 0; step <= opts.max_steps; ++step) {
    auto pair = detail::pair_with_index(cur, opts.index);
    // A multiple eigenvalue is split by the same move on the first two leaves.
    std::optional<std::pair<VertexIndex, VertexIndex>> tie;
    if (pair.multiplicity > 1) {
      tie = {leaves[0], leaves[1]};
    } else {
      const auto& f = pair.basis.front();
      const double sup = sup_norm(cur, f);
      for (std::size_t i = 0; i < leaves.size() && !tie; ++i) {
        for (std::size_t j = i + 1; j < leaves.size() && !tie; ++j) {
          if (std::abs(value_at_vertex(cur, f, leaves[i]) - value_at_vertex(cur, f, leaves[j])) <= opts.equal_tol * sup) {
            tie = {leaves[i], leaves[j]};
          }
        }
      }
    }
    if (!tie) return cur;
    if (step == opts.max_steps) break;
    const EdgeIndex e1 = cur.graph().ends_at(tie->first).front().edge;
    const EdgeIndex e2 = cur.graph().ends_at(tie->second).front().edge;
    if (e1 == e2) break;  // a single edge joining the two leaves has no pair to trade length
    std::vector<double> lengths = cur.lengths();
    const double sum = lengths[e1] + lengths[e2];
    const double delta = unit(rng) * std::min({bound, 0.5 * lengths[e1], 0.5 * lengths[e2]});
    lengths[e1] += delta;
    lengths[e2] = sum - lengths[e1];
    cur = with_lengths(cur, lengths);
    bound *= 0.5;
  }
  fail(ErrorCode::NoWitnessFound, "boundary values still coincide after " + std::to_string(opts.max_steps) + " steps");
}

}  // namespace qghot

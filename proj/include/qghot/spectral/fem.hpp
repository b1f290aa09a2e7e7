#pragma once

// Piecewise-linear finite elements for the standard Laplacian. Vertex
// unknowns are shared by all incident edges (continuity is built in, the
// Kirchhoff condition is natural). The smallest eigenpairs of K x = mu M x are
// found by shift-inverted block subspace iteration with Rayleigh-Ritz.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "qghot/graph.hpp"

namespace qghot {

struct FemMesh {
  std::vector<std::size_t> intervals;               // per edge
  std::vector<std::vector<Eigen::Index>> edge_nodes;  // per edge, origin .. terminal
  Eigen::Index unknowns = 0;
};

inline FemMesh make_mesh(const MetricGraph& g, double h) {
  if (!(h > 0.0)) fail(ErrorCode::BadParameter, "mesh size must be positive");
  FemMesh mesh;
  mesh.unknowns = static_cast<Eigen::Index>(g.vertex_count());
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    auto n = static_cast<std::size_t>(std::ceil(g.length(e) / h - 1e-12));
    if (n < 2) {
      std::ostringstream msg;
      msg << "edge '" << g.edge(e).id << "' of length " << g.length(e) << " gets " << n << " interval(s) at h = " << h;
      fail(ErrorCode::MeshTooCoarse, msg.str());
    }
    mesh.intervals.push_back(n);
    std::vector<Eigen::Index> nodes;
    nodes.push_back(static_cast<Eigen::Index>(g.edge(e).origin));
    for (std::size_t i = 1; i < n; ++i) nodes.push_back(mesh.unknowns++);
    nodes.push_back(static_cast<Eigen::Index>(g.edge(e).terminal));
    mesh.edge_nodes.push_back(std::move(nodes));
  }
  return mesh;
}

struct FemResult {
  double h = 0.0;
  std::vector<double> values;
  /// values at mesh nodes: [eigen index][edge][node along edge]
  std::vector<std::vector<std::vector<double>>> vectors;
};

inline FemResult fem_solve(const MetricGraph& g, double h, std::size_t n) {
  if (n == 0) fail(ErrorCode::BadParameter, "need at least one eigenvalue");
  FemMesh mesh = make_mesh(g, h);
  const Eigen::Index N = mesh.unknowns;
  std::vector<Eigen::Triplet<double>> kt, mt;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    double he = g.length(e) / static_cast<double>(mesh.intervals[e]);
    const auto& nodes = mesh.edge_nodes[e];
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      Eigen::Index a = nodes[i], b = nodes[i + 1];
      kt.emplace_back(a, a, 1.0 / he);
      kt.emplace_back(b, b, 1.0 / he);
      kt.emplace_back(a, b, -1.0 / he);
      kt.emplace_back(b, a, -1.0 / he);
      mt.emplace_back(a, a, he / 3.0);
      mt.emplace_back(b, b, he / 3.0);
      mt.emplace_back(a, b, he / 6.0);
      mt.emplace_back(b, a, he / 6.0);
    }
  }
  Eigen::SparseMatrix<double> K(N, N), M(N, N);
  K.setFromTriplets(kt.begin(), kt.end());
  M.setFromTriplets(mt.begin(), mt.end());

  const Eigen::Index want = static_cast<Eigen::Index>(n);
  const Eigen::Index block = std::min<Eigen::Index>(N, 2 * want + 10);
  Eigen::MatrixXd X, ritz_vectors;
  Eigen::VectorXd ritz;

  if (N <= 400) {
    const Eigen::MatrixXd Kd(K), Md(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kd, Md);
    ritz = ges.eigenvalues();
    ritz_vectors = ges.eigenvectors();
  } else {
    const double shift = 1.0 / (g.total_length() * g.total_length());
    Eigen::SparseMatrix<double> A = K + shift * M;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) fail(ErrorCode::BackendDisagreement, "FEM factorization failed");
    std::mt19937_64 rng(20240531);
    std::normal_distribution<double> gauss;
    X.resize(N, block);
    for (Eigen::Index j = 0; j < block; ++j)
      for (Eigen::Index i = 0; i < N; ++i) X(i, j) = gauss(rng);
    Eigen::VectorXd previous = Eigen::VectorXd::Constant(want, -1.0);
    for (int iter = 0; iter < 2000; ++iter) {
      Eigen::MatrixXd Y = ldlt.solve(M * X);
      for (Eigen::Index j = 0; j < Y.cols(); ++j) Y.col(j).normalize();
      Eigen::MatrixXd Kr = Y.transpose() * (K * Y);
      Eigen::MatrixXd Mr = Y.transpose() * (M * Y);
      Kr = 0.5 * (Kr + Kr.transpose());
      Mr = 0.5 * (Mr + Mr.transpose());
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kr, Mr);
      ritz = ges.eigenvalues();
      X = Y * ges.eigenvectors();
      double change = 0.0;
      for (Eigen::Index i = 0; i < want; ++i) {
        change = std::max(change, std::abs(ritz(i) - previous(i)) / std::max(std::abs(ritz(i)), 1.0));
      }
      previous = ritz.head(want);
      if (iter > 2 && change < 1e-13) break;
    }
    ritz_vectors = X;
  }

  FemResult out;
  out.h = h;
  for (Eigen::Index i = 0; i < want && i < ritz.size(); ++i) {
    out.values.push_back(std::max(0.0, ritz(i)));
    Eigen::VectorXd x = ritz_vectors.col(i);
    x /= std::sqrt(x.dot(M * x));
    std::vector<std::vector<double>> per_edge;
    for (const auto& nodes : mesh.edge_nodes) {
      std::vector<double> vals;
      for (auto idx : nodes) vals.push_back(x(idx));
      per_edge.push_back(std::move(vals));
    }
    out.vectors.push_back(std::move(per_edge));
  }
  return out;
}

}  // namespace qghot

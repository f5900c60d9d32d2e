#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "soc/graph.hpp"

namespace soc {

struct SpectralEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // The operator is nilpotent (acyclic digraph); value is exactly 0.
  bool nilpotent = false;
};

// Kahn's algorithm; a self-loop counts as a cycle.
inline bool is_acyclic(const Adjacency& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> indeg(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w : adj.out(v)) ++indeg[w];
  }
  std::vector<NodeId> stack;
  for (NodeId v = 0; v < n; ++v) {
    if (indeg[v] == 0) stack.push_back(v);
  }
  std::size_t removed = 0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    ++removed;
    for (NodeId w : adj.out(v)) {
      if (--indeg[w] == 0) stack.push_back(w);
    }
  }
  return removed == n;
}

// Largest eigenvalue of the 0/1 adjacency operator of `adj`.
//
// Acyclic operators are detected exactly (spectral radius 0). Otherwise the
// radius is at least 1 and a shifted power iteration on (A + cI) is run from
// the all-ones vector, with c the mean out-degree; the shift makes the Perron
// root strictly dominant in modulus, so bipartite and periodic graphs converge.
// The estimate is ||(A + cI)x||_1 / ||x||_1 - c, stopped when its relative
// change drops below tol.
inline SpectralEstimate spectral_radius(const Adjacency& adj, double tol = 1e-10,
                                        std::size_t max_iter = 1'000'000) {
  SpectralEstimate est;
  const std::size_t n = adj.size();
  if (n == 0 || is_acyclic(adj)) {
    est.converged = true;
    est.nilpotent = true;
    return est;
  }
  const double shift = std::max(1.0, static_cast<double>(adj.arc_count()) / static_cast<double>(n));
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  double prev = -1.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    double norm = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double acc = shift * x[v];
      for (NodeId w : adj.out(v)) acc += x[w];
      y[v] = acc;
      norm += acc;
    }
    const double value = norm - shift;  // ||x||_1 == 1
    for (std::size_t v = 0; v < n; ++v) x[v] = y[v] / norm;
    est.value = value;
    est.iterations = it;
    if (prev >= 0.0 && std::abs(value - prev) <= tol * std::abs(value)) {
      est.converged = true;
      break;
    }
    prev = value;
  }
  return est;
}

inline SpectralEstimate spectral_radius(const Graph& g, double tol = 1e-10,
                                        std::size_t max_iter = 1'000'000) {
  if (g.node_count() == 0) throw InputError("spectral_radius: empty graph");
  return spectral_radius(g.arcs(), tol, max_iter);
}

}  // namespace soc

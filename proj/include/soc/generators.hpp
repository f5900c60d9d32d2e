#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "soc/errors.hpp"
#include "soc/graph.hpp"
#include "soc/sampling.hpp"

namespace soc::gen {

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return Graph::from_edges(n, std::move(e), false);
}

// Node 0 is the centre.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.push_back({0, v});
  return Graph::from_edges(leaves + 1, std::move(e), false);
}

// Row-major: node r * cols + c.
inline std::vector<Edge> grid_edges(std::size_t rows, std::size_t cols, NodeId offset = 0) {
  std::vector<Edge> e;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<NodeId>(offset + r * cols + c);
      if (c + 1 < cols) e.push_back({v, v + 1});
      if (r + 1 < rows) e.push_back({v, static_cast<NodeId>(v + cols)});
    }
  }
  return e;
}

inline Graph grid(std::size_t rows, std::size_t cols) {
  return Graph::from_edges(rows * cols, grid_edges(rows, cols), false);
}

// Two side x side grids, the last node of the first joined to the first node of
// the second by a path of bridge_len edges. Bridge interior nodes come last.
inline Graph bridged_grids(std::size_t side, std::size_t bridge_len) {
  if (bridge_len == 0) throw InputError("bridge needs at least one edge");
  const std::size_t cells = side * side;
  std::vector<Edge> e = grid_edges(side, side);
  const std::vector<Edge> second = grid_edges(side, side, static_cast<NodeId>(cells));
  e.insert(e.end(), second.begin(), second.end());
  const std::size_t n = 2 * cells + bridge_len - 1;
  NodeId prev = static_cast<NodeId>(cells - 1);
  for (std::size_t k = 0; k + 1 < bridge_len; ++k) {
    const auto v = static_cast<NodeId>(2 * cells + k);
    e.push_back({prev, v});
    prev = v;
  }
  e.push_back({prev, static_cast<NodeId>(cells)});
  return Graph::from_edges(n, std::move(e), false);
}

// G(n, p): every ordered (directed) or unordered pair independently, no self-loops.
inline Graph erdos_renyi(std::size_t n, double p, bool directed, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0xe5);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = directed ? 0 : u + 1; v < n; ++v) {
      if (u != v && coin(rng)) e.push_back({u, v});
    }
  }
  return Graph::from_edges(n, std::move(e), directed);
}

// Preferential attachment: start from a clique on m + 1 nodes, then each new
// node links to m distinct existing nodes chosen proportionally to degree.
inline Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m == 0 || n <= m) throw InputError("barabasi-albert needs 0 < m < n");
  Rng rng = make_rng(seed, 0xba);
  std::vector<Edge> e;
  std::vector<NodeId> ends;  // each node appears once per incident edge
  for (NodeId u = 0; u <= m; ++u) {
    for (NodeId v = u + 1; v <= m; ++v) {
      e.push_back({u, v});
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  std::vector<NodeId> chosen;
  for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      const NodeId u = ends[std::uniform_int_distribution<std::size_t>(0, ends.size() - 1)(rng)];
      if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) chosen.push_back(u);
    }
    for (NodeId u : chosen) {
      e.push_back({u, v});
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  return Graph::from_edges(n, std::move(e), false);
}

}  // namespace soc::gen

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "soc/graph.hpp"

namespace soc {

using StateId = std::uint32_t;

// A (node, state-of-charge) pair; soc == kStar marks the arrival sink of a node.
struct StateNode {
  static constexpr unsigned kStar = std::numeric_limits<unsigned>::max();

  NodeId node;
  unsigned soc;

  bool star() const noexcept { return soc == kStar; }
  friend bool operator==(const StateNode&, const StateNode&) = default;
};

// Flat indexing of the state space. Block b holds soc = kappa - b, so block 0
// is the full-charge block; the star block (when present) is block kappa + 1.
class StateIndexer {
 public:
  StateIndexer(std::size_t n, unsigned kappa) : n_(n), kappa_(kappa) {}

  std::size_t node_count() const noexcept { return n_; }
  unsigned kappa() const noexcept { return kappa_; }
  std::size_t numeric_states() const noexcept { return n_ * (kappa_ + 1); }
  std::size_t starred_states() const noexcept { return n_ * (kappa_ + 2); }

  StateId index(NodeId node, unsigned soc) const noexcept {
    const std::size_t block = soc == StateNode::kStar ? kappa_ + 1 : kappa_ - soc;
    return static_cast<StateId>(block * n_ + node);
  }
  StateId star(NodeId node) const noexcept { return static_cast<StateId>((kappa_ + 1) * n_ + node); }

  StateNode decode(StateId idx) const noexcept {
    const std::size_t block = idx / n_;
    const auto node = static_cast<NodeId>(idx % n_);
    if (block == kappa_ + 1) return {node, StateNode::kStar};
    return {node, static_cast<unsigned>(kappa_ - block)};
  }

 private:
  std::size_t n_;
  unsigned kappa_;
};

// The directed state graph: refill arcs (u,i) -> (v,kappa) for v in the refill
// set, consumption arcs (u,i) -> (v,i-1) otherwise. When starred, every numeric
// state (u,i) also has an arc to (u,star); star states have no out-arcs.
class StateGraph {
 public:
  StateGraph(SocInstance inst, bool starred) : inst_(std::move(inst)), idx_(inst_.node_count(), inst_.kappa()),
                                               starred_(starred) {
    const Graph& g = inst_.graph();
    const RefillSet& omega = inst_.omega();
    const unsigned kappa = inst_.kappa();
    const std::size_t total = starred ? idx_.starred_states() : idx_.numeric_states();
    std::vector<std::size_t> offsets;
    std::vector<NodeId> heads;
    offsets.reserve(total + 1);
    heads.reserve((idx_.numeric_states()) * (g.arcs().arc_count() / std::max<std::size_t>(1, g.node_count()) + 1));
    offsets.push_back(0);
    for (std::size_t flat = 0; flat < idx_.numeric_states(); ++flat) {
      const StateNode s = idx_.decode(static_cast<StateId>(flat));
      for (NodeId v : g.arcs().out(s.node)) {
        if (omega.contains(v)) {
          heads.push_back(idx_.index(v, kappa));
        } else if (s.soc >= 1) {
          heads.push_back(idx_.index(v, s.soc - 1));
        }
      }
      if (starred) heads.push_back(idx_.star(s.node));
      offsets.push_back(heads.size());
    }
    if (starred) {
      for (std::size_t k = 0; k < g.node_count(); ++k) offsets.push_back(heads.size());
    }
    adj_ = Adjacency(std::move(offsets), std::move(heads));
  }

  const SocInstance& instance() const noexcept { return inst_; }
  const StateIndexer& indexer() const noexcept { return idx_; }
  bool starred() const noexcept { return starred_; }
  const Adjacency& adjacency() const noexcept { return adj_; }
  std::size_t state_count() const noexcept { return adj_.size(); }

  std::span<const NodeId> out(StateId s) const noexcept { return adj_.out(s); }

 private:
  SocInstance inst_;
  StateIndexer idx_;
  bool starred_;
  Adjacency adj_;
};

inline StateGraph build_state_graph(const SocInstance& inst, bool starred) { return StateGraph(inst, starred); }

// y = B x, computed by arc traversal: y[a] = sum over arcs a -> b of x[b].
inline void apply_bkappa(const StateGraph& sg, std::span<const double> x, std::span<double> y) {
  if (sg.starred()) throw std::invalid_argument("apply_bkappa: state graph must not be starred");
  if (x.size() != sg.state_count() || y.size() != sg.state_count()) {
    throw std::invalid_argument("apply_bkappa: dimension mismatch");
  }
  const Adjacency& adj = sg.adjacency();
  for (StateId a = 0; a < adj.size(); ++a) {
    double acc = 0.0;
    for (NodeId b : adj.out(a)) acc += x[b];
    y[a] = acc;
  }
}

inline std::vector<double> apply_bkappa(const StateGraph& sg, std::span<const double> x) {
  std::vector<double> y(sg.state_count());
  apply_bkappa(sg, x, y);
  return y;
}

// Dense row-major n x n matrix of walk counts; saturated is set when any entry
// would have exceeded 2^64 - 1 (that entry is clamped).
struct WalkCountMatrix {
  std::size_t n = 0;
  std::vector<std::uint64_t> counts;
  bool saturated = false;

  std::uint64_t operator()(NodeId i, NodeId j) const { return counts[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {
inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, bool& saturated) noexcept {
  const std::uint64_t r = a + b;
  if (r < a) {
    saturated = true;
    return std::numeric_limits<std::uint64_t>::max();
  }
  return r;
}
}  // namespace detail

// Entry (i, j): number of length-k walks i -> j traversable from full charge.
inline WalkCountMatrix count_feasible_walks(const StateGraph& sg, unsigned k) {
  if (sg.starred()) throw std::invalid_argument("count_feasible_walks: state graph must not be starred");
  const StateIndexer& idx = sg.indexer();
  const std::size_t n = idx.node_count();
  WalkCountMatrix out{n, std::vector<std::uint64_t>(n * n, 0), false};
  std::vector<std::uint64_t> cur(sg.state_count()), next(sg.state_count());
  for (NodeId s = 0; s < n; ++s) {
    std::fill(cur.begin(), cur.end(), 0);
    cur[idx.index(s, idx.kappa())] = 1;
    for (unsigned step = 0; step < k; ++step) {
      std::fill(next.begin(), next.end(), 0);
      for (StateId a = 0; a < sg.state_count(); ++a) {
        if (cur[a] == 0) continue;
        for (NodeId b : sg.out(a)) next[b] = detail::saturating_add(next[b], cur[a], out.saturated);
      }
      cur.swap(next);
    }
    for (StateId a = 0; a < sg.state_count(); ++a) {
      if (cur[a] == 0) continue;
      std::uint64_t& cell = out.counts[static_cast<std::size_t>(s) * n + idx.decode(a).node];
      cell = detail::saturating_add(cell, cur[a], out.saturated);
    }
  }
  return out;
}

inline WalkCountMatrix count_feasible_walks(const SocInstance& inst, unsigned k) {
  return count_feasible_walks(StateGraph(inst, false), k);
}

// Length of a shortest feasible walk s -> t: BFS distance from (s,kappa) to
// (t,star) in the starred state graph, minus one.
inline std::optional<unsigned> shortest_feasible_walk_length(const StateGraph& starred, NodeId s, NodeId t) {
  if (!starred.starred()) throw std::invalid_argument("shortest_feasible_walk_length: needs starred graph");
  const StateIndexer& idx = starred.indexer();
  if (s >= idx.node_count() || t >= idx.node_count()) throw std::out_of_range("node id out of range");
  const StateId source = idx.index(s, idx.kappa());
  const StateId goal = idx.star(t);
  std::vector<std::int64_t> dist(starred.state_count(), -1);
  std::deque<StateId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const StateId v = queue.front();
    queue.pop_front();
    if (v == goal) return static_cast<unsigned>(dist[v] - 1);
    for (NodeId w : starred.out(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return std::nullopt;
}

inline std::optional<unsigned> shortest_feasible_walk_length(const SocInstance& inst, NodeId s, NodeId t) {
  return shortest_feasible_walk_length(StateGraph(inst, true), s, t);
}

inline std::string to_string(const StateNode& s) {
  return "(" + std::to_string(s.node) + "," + (s.star() ? std::string("*") : std::to_string(s.soc)) + ")";
}

// Debug dump, one "(u,i) -> (v,j)" line per arc.
inline void write_state_graph(std::ostream& out, const StateGraph& sg) {
  const StateIndexer& idx = sg.indexer();
  for (StateId a = 0; a < sg.state_count(); ++a) {
    for (NodeId b : sg.out(a)) out << to_string(idx.decode(a)) << " -> " << to_string(idx.decode(b)) << '\n';
  }
}

}  // namespace soc

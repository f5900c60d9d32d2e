#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "soc/detail/parallel.hpp"
#include "soc/errors.hpp"
#include "soc/graph.hpp"
#include "soc/scores.hpp"
#include "soc/state_space.hpp"

namespace soc {

struct StPair {
  NodeId source;
  NodeId target;

  friend bool operator==(const StPair&, const StPair&) = default;
};

// The part of a digraph that lies on some s -> t walk: reachable from s and
// co-reachable to t. Local ids index `nodes`, which is sorted ascending.
struct WalkSubgraph {
  std::vector<NodeId> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;  // local (tail, head), sorted
  std::uint32_t source = 0;
  std::uint32_t target = 0;

  bool empty() const noexcept { return nodes.empty(); }
  std::size_t size() const noexcept { return nodes.size(); }

  std::optional<std::uint32_t> local(NodeId host) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), host);
    if (it == nodes.end() || *it != host) return std::nullopt;
    return static_cast<std::uint32_t>(it - nodes.begin());
  }
};

namespace detail {

inline std::vector<std::uint8_t> reach_mask(const Adjacency& adj, NodeId from) {
  std::vector<std::uint8_t> seen(adj.size(), 0);
  std::vector<NodeId> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : adj.out(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace detail

inline WalkSubgraph walk_subgraph(const Adjacency& fwd, const Adjacency& rev, NodeId s, NodeId t) {
  if (s == t) throw std::invalid_argument("walk_subgraph: source equals target");
  if (s >= fwd.size() || t >= fwd.size()) throw std::out_of_range("walk_subgraph: node out of range");
  const auto from_s = detail::reach_mask(fwd, s);
  WalkSubgraph sub;
  if (!from_s[t]) return sub;
  const auto to_t = detail::reach_mask(rev, t);
  for (NodeId v = 0; v < fwd.size(); ++v) {
    if (from_s[v] && to_t[v]) sub.nodes.push_back(v);
  }
  for (std::uint32_t i = 0; i < sub.nodes.size(); ++i) {
    for (NodeId w : fwd.out(sub.nodes[i])) {
      if (from_s[w] && to_t[w]) sub.arcs.emplace_back(i, *sub.local(w));
    }
  }
  sub.source = *sub.local(s);
  sub.target = *sub.local(t);
  return sub;
}

inline WalkSubgraph walk_subgraph(const Adjacency& fwd, NodeId s, NodeId t) {
  return walk_subgraph(fwd, fwd.reversed(), s, t);
}

struct RwbcOptions {
  // Newman's convention: force the net flow of source and target to 1.
  bool unit_endpoints = false;
  // Subgraphs up to this many nodes use a dense LU; larger ones an iterative solve.
  std::size_t dense_limit = 2000;
  double residual_tol = 1e-10;
};

// f: expected uses of each out-arc of a node (visits / out-degree), zero at the target.
// arc_flow: F = D_f A on the subgraph arcs. net_flow: I_i = 1/2 sum over unordered
// neighbour pairs {i, j} of |F_ij - F_ji|.
struct FlowSolution {
  WalkSubgraph subgraph;
  std::vector<double> f;
  std::vector<double> arc_flow;
  std::vector<double> net_flow;
};

namespace detail {

// Solves (D_t - A_t)^T x = e_source over all local nodes except the target.
inline std::vector<double> solve_arc_usage(const WalkSubgraph& sub, const RwbcOptions& opt) {
  const std::size_t n = sub.size();
  const std::uint32_t t = sub.target;
  auto pos = [t](std::uint32_t v) { return v < t ? v : v - 1; };
  const std::size_t m = n - 1;

  std::vector<double> outdeg(n, 0.0);
  for (const auto& [i, j] : sub.arcs) outdeg[i] += 1.0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (v != t && outdeg[v] == 0.0) {
      throw NumericalError("singular walk system: subgraph node " + std::to_string(sub.nodes[v]) +
                           " has no out-arc");
    }
  }

  std::vector<double> x(n, 0.0);
  if (m == 0) return x;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  rhs[pos(sub.source)] = 1.0;

  Eigen::VectorXd sol;
  if (m <= opt.dense_limit) {
    Eigen::MatrixXd kt = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::uint32_t v = 0; v < n; ++v) {
      if (v != t) kt(pos(v), pos(v)) += outdeg[v];
    }
    for (const auto& [i, j] : sub.arcs) {
      if (i == t || j == t) continue;
      kt(pos(j), pos(i)) -= 1.0;  // transpose of -A_t
    }
    sol = kt.partialPivLu().solve(rhs);
  } else {
    using Sparse = Eigen::SparseMatrix<double>;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(sub.arcs.size() + n);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (v != t) trips.emplace_back(pos(v), pos(v), outdeg[v]);
    }
    for (const auto& [i, j] : sub.arcs) {
      if (i == t || j == t) continue;
      trips.emplace_back(pos(j), pos(i), -1.0);
    }
    Sparse kt(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    kt.setFromTriplets(trips.begin(), trips.end());
    Eigen::BiCGSTAB<Sparse, Eigen::IncompleteLUT<double>> it;
    it.setTolerance(opt.residual_tol * 1e-2);
    it.setMaxIterations(10 * static_cast<Eigen::Index>(m));
    it.compute(kt);
    if (it.info() == Eigen::Success) sol = it.solve(rhs);
    if (it.info() != Eigen::Success || (kt * sol - rhs).norm() > opt.residual_tol) {
      Eigen::SparseLU<Sparse> lu;
      lu.compute(kt);
      if (lu.info() != Eigen::Success) throw NumericalError("sparse LU failed on walk system");
      sol = lu.solve(rhs);
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (v != t) x[v] = sol[pos(v)];
  }
  return x;
}

}  // namespace detail

// Net random-walk flow for a single pair on a directed graph, with walks confined
// to the s -> t walk subgraph and absorbed at t.
inline FlowSolution rwbc_on_subgraph(WalkSubgraph subgraph, const RwbcOptions& opt = {}) {
  if (subgraph.empty()) throw InputError("directed_rwbc_pair: no walk from source to target");
  FlowSolution sol;
  sol.subgraph = std::move(subgraph);
  const WalkSubgraph& sub = sol.subgraph;
  sol.f = detail::solve_arc_usage(sub, opt);

  sol.arc_flow.resize(sub.arcs.size());
  for (std::size_t a = 0; a < sub.arcs.size(); ++a) sol.arc_flow[a] = sol.f[sub.arcs[a].first];

  // Group arcs by unordered pair; each pair contributes |F_ij - F_ji| once.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> keyed;
  keyed.reserve(sub.arcs.size());
  for (std::size_t a = 0; a < sub.arcs.size(); ++a) {
    const auto [i, j] = sub.arcs[a];
    if (i == j) continue;
    const double signed_flow = i < j ? sol.arc_flow[a] : -sol.arc_flow[a];
    keyed.emplace_back(std::min(i, j), std::max(i, j), signed_flow);
  }
  std::sort(keyed.begin(), keyed.end());
  sol.net_flow.assign(sub.size(), 0.0);
  for (std::size_t k = 0; k < keyed.size();) {
    const auto lo = std::get<0>(keyed[k]);
    const auto hi = std::get<1>(keyed[k]);
    double diff = 0.0;
    for (; k < keyed.size() && std::get<0>(keyed[k]) == lo && std::get<1>(keyed[k]) == hi; ++k) {
      diff += std::get<2>(keyed[k]);
    }
    const double half = 0.5 * std::abs(diff);
    sol.net_flow[lo] += half;
    sol.net_flow[hi] += half;
  }
  if (opt.unit_endpoints) {
    sol.net_flow[sub.source] = 1.0;
    sol.net_flow[sub.target] = 1.0;
  }
  return sol;
}

inline FlowSolution directed_rwbc_pair(const Adjacency& fwd, const Adjacency& rev, NodeId s, NodeId t,
                                       const RwbcOptions& opt = {}) {
  return rwbc_on_subgraph(walk_subgraph(fwd, rev, s, t), opt);
}

inline FlowSolution directed_rwbc_pair(const Adjacency& fwd, NodeId s, NodeId t, const RwbcOptions& opt = {}) {
  return directed_rwbc_pair(fwd, fwd.reversed(), s, t, opt);
}

inline FlowSolution directed_rwbc_pair(const Graph& g, NodeId s, NodeId t, const RwbcOptions& opt = {}) {
  return directed_rwbc_pair(g.arcs(), s, t, opt);
}

struct RwbcResult {
  ScoreVector scores;
  std::vector<double> state_scores;  // accumulated net flow per numeric state
  std::vector<StPair> skipped;       // pairs with no feasible walk
};

namespace detail {

// The unstarred state graph with every (t, i) merged into one absorbing state,
// which reuses the flat index of (t, kappa).
inline Adjacency contract_target(const StateGraph& sg, NodeId t) {
  const StateIndexer& idx = sg.indexer();
  const StateId tau = idx.index(t, idx.kappa());
  std::vector<std::size_t> offsets;
  std::vector<NodeId> heads;
  offsets.reserve(sg.state_count() + 1);
  heads.reserve(sg.adjacency().arc_count());
  offsets.push_back(0);
  for (StateId a = 0; a < sg.state_count(); ++a) {
    if (idx.decode(a).node != t) {
      for (NodeId b : sg.out(a)) heads.push_back(idx.decode(b).node == t ? tau : b);
    }
    offsets.push_back(heads.size());
  }
  return Adjacency(std::move(offsets), std::move(heads));
}

}  // namespace detail

// SOC random-walk betweenness aggregated over the given pairs. For each pair the
// target's states are contracted into one absorbing state; the pair's net flows
// are summed per state, then over charge levels per node. The absorbing state's
// own score is dropped.
inline RwbcResult soc_rwbc(const SocInstance& inst, std::span<const StPair> pairs, const RwbcOptions& opt = {}) {
  if (pairs.empty()) throw InputError("soc_rwbc: no source-target pairs");
  const std::size_t n = inst.node_count();
  for (const StPair& p : pairs) {
    if (p.source >= n || p.target >= n) throw InputError("soc_rwbc: pair node out of range");
    if (p.source == p.target) throw InputError("soc_rwbc: pair with source == target");
  }
  const StateGraph sg(inst, false);
  const StateIndexer& idx = sg.indexer();
  const std::size_t states = sg.state_count();

  const std::size_t block = std::max<std::size_t>(1, (pairs.size() + 63) / 64);
  const std::size_t blocks = (pairs.size() + block - 1) / block;
  std::vector<std::vector<double>> partial(blocks);
  std::vector<std::vector<std::uint8_t>> skipped_flags(blocks);
  detail::for_each_block(pairs.size(), block, [&](std::size_t b, std::size_t begin, std::size_t end) {
    std::vector<double> acc(states, 0.0);
    std::vector<std::uint8_t> skipped(end - begin, 0);
    std::optional<NodeId> cached_target;
    Adjacency fwd, rev;
    for (std::size_t k = begin; k < end; ++k) {
      const StPair p = pairs[k];
      if (cached_target != p.target) {
        fwd = detail::contract_target(sg, p.target);
        rev = fwd.reversed();
        cached_target = p.target;
      }
      const StateId from = idx.index(p.source, inst.kappa());
      const StateId tau = idx.index(p.target, inst.kappa());
      WalkSubgraph sub = walk_subgraph(fwd, rev, from, tau);
      if (sub.empty()) {
        skipped[k - begin] = 1;
        continue;
      }
      const FlowSolution flow = rwbc_on_subgraph(std::move(sub), opt);
      for (std::uint32_t v = 0; v < flow.subgraph.size(); ++v) {
        if (v != flow.subgraph.target) acc[flow.subgraph.nodes[v]] += flow.net_flow[v];
      }
    }
    partial[b] = std::move(acc);
    skipped_flags[b] = std::move(skipped);
  });

  RwbcResult out;
  out.state_scores.assign(states, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t v = 0; v < states; ++v) out.state_scores[v] += partial[b][v];
    for (std::size_t k = 0; k < skipped_flags[b].size(); ++k) {
      if (skipped_flags[b][k]) out.skipped.push_back(pairs[b * block + k]);
    }
  }
  out.scores.values.assign(n, 0.0);
  for (unsigned soc = 0; soc <= inst.kappa(); ++soc) {
    for (NodeId v = 0; v < n; ++v) out.scores.values[v] += out.state_scores[idx.index(v, soc)];
  }
  out.scores.meta.measure = "soc-rwbc";
  out.scores.meta.params = {{"kappa", inst.kappa()},
                            {"pairs", pairs.size()},
                            {"skipped_pairs", out.skipped.size()},
                            {"unit_endpoints", opt.unit_endpoints}};
  return out;
}

// Plain directed random-walk betweenness on the base graph, summed over pairs.
inline RwbcResult standard_rwbc(const Graph& g, std::span<const StPair> pairs, const RwbcOptions& opt = {}) {
  if (pairs.empty()) throw InputError("standard_rwbc: no source-target pairs");
  const Adjacency& fwd = g.arcs();
  const Adjacency rev = fwd.reversed();
  RwbcResult out;
  out.scores.values.assign(g.node_count(), 0.0);
  for (const StPair& p : pairs) {
    if (p.source == p.target) throw InputError("standard_rwbc: pair with source == target");
    WalkSubgraph sub = walk_subgraph(fwd, rev, p.source, p.target);
    if (sub.empty()) {
      out.skipped.push_back(p);
      continue;
    }
    const FlowSolution flow = rwbc_on_subgraph(std::move(sub), opt);
    for (std::uint32_t v = 0; v < flow.subgraph.size(); ++v) {
      out.scores.values[flow.subgraph.nodes[v]] += flow.net_flow[v];
    }
  }
  out.scores.meta.measure = "rwbc";
  out.scores.meta.params = {{"pairs", pairs.size()}, {"skipped_pairs", out.skipped.size()},
                            {"unit_endpoints", opt.unit_endpoints}};
  return out;
}

}  // namespace soc

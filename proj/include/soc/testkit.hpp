#pragma once

// Brute-force reference implementations. They follow the definitions directly
// (explicit walk enumeration, dense matrices, sampled walks) and share no code
// with the kernels beyond the graph containers, so agreement is evidence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "soc/errors.hpp"
#include "soc/graph.hpp"
#include "soc/rwbc.hpp"
#include "soc/sampling.hpp"
#include "soc/scores.hpp"
#include "soc/state_space.hpp"

namespace soc::testkit {

struct OracleBudget {
  std::size_t max_nodes = 8;
  unsigned max_kappa = 3;
  std::size_t max_walk_len = 8;
};

inline void check_budget(const SocInstance& inst, const OracleBudget& b, std::size_t walk_len) {
  if (inst.node_count() > b.max_nodes) throw BudgetExceeded("oracle: too many nodes");
  if (inst.kappa() > b.max_kappa) throw BudgetExceeded("oracle: kappa too large");
  if (walk_len > b.max_walk_len) throw BudgetExceeded("oracle: walk length too large");
}

// A walk as its node sequence; charge[k] is the charge held after arriving at nodes[k].
struct Walk {
  std::vector<NodeId> nodes;
  std::vector<unsigned> charge;
};

// Visits every feasible walk from s of length 0..max_len, prefixes first.
// A hop into a refill node restores the charge to kappa; any other hop needs
// charge >= 1 and spends one unit. The callback returns false to prune the
// extensions of the current walk.
inline void for_each_feasible_walk(const SocInstance& inst, NodeId s, std::size_t max_len,
                                   const std::function<bool(const Walk&)>& visit) {
  const Graph& g = inst.graph();
  Walk w{{s}, {inst.kappa()}};
  std::function<void()> rec = [&] {
    if (!visit(w) || w.nodes.size() > max_len) return;
    const NodeId u = w.nodes.back();
    const unsigned c = w.charge.back();
    for (NodeId v : g.out_neighbors(u)) {
      unsigned next;
      if (inst.omega().contains(v)) {
        next = inst.kappa();
      } else if (c >= 1) {
        next = c - 1;
      } else {
        continue;
      }
      w.nodes.push_back(v);
      w.charge.push_back(next);
      rec();
      w.nodes.pop_back();
      w.charge.pop_back();
    }
  };
  rec();
}

// Every feasible walk from s ending at t with at most max_len hops.
inline std::vector<std::vector<NodeId>> enumerate_feasible_walks(const SocInstance& inst, NodeId s, NodeId t,
                                                                 std::size_t max_len,
                                                                 const OracleBudget& budget = {}) {
  check_budget(inst, budget, max_len);
  std::vector<std::vector<NodeId>> out;
  for_each_feasible_walk(inst, s, max_len, [&](const Walk& w) {
    if (w.nodes.back() == t) out.push_back(w.nodes);
    return true;
  });
  return out;
}

// Number of feasible walks with exactly k hops between every ordered pair.
inline WalkCountMatrix count_feasible_walks_brute(const SocInstance& inst, unsigned k,
                                                  const OracleBudget& budget = {}) {
  check_budget(inst, budget, k);
  const std::size_t n = inst.node_count();
  WalkCountMatrix m{n, std::vector<std::uint64_t>(n * n, 0), false};
  for (NodeId s = 0; s < n; ++s) {
    for_each_feasible_walk(inst, s, k, [&](const Walk& w) {
      if (w.nodes.size() == k + 1) {
        ++m.counts[s * n + w.nodes.back()];
        return false;
      }
      return true;
    });
  }
  return m;
}

struct BruteBc {
  ScoreVector scores;
  std::vector<std::uint64_t> sigma;   // n x n, number of shortest feasible walks s -> t
  std::vector<std::int64_t> length;   // n x n, their length, -1 if none
};

// Betweenness from explicit enumeration of shortest feasible walks. Each walk
// credits every position after the source, so a node met twice at different
// charges is credited twice and the target is credited once per walk.
// Shortest walks never repeat a (node, charge) state, so only such walks are
// enumerated; a reachable target beyond max_walk_len exceeds the budget.
inline BruteBc brute_soc_bc(const SocInstance& inst, const OracleBudget& budget = {}) {
  check_budget(inst, budget, 0);
  const std::size_t n = inst.node_count();
  const unsigned kappa = inst.kappa();
  BruteBc out;
  out.sigma.assign(n * n, 0);
  out.length.assign(n * n, -1);
  out.scores.values.assign(n, 0.0);
  out.scores.meta.measure = "soc-bc";
  out.scores.meta.params = {{"kappa", kappa}, {"oracle", true}};

  for (NodeId s = 0; s < n; ++s) {
    std::vector<std::vector<double>> credit(n, std::vector<double>(n, 0.0));
    auto state = [&](NodeId v, unsigned c) { return static_cast<std::size_t>(c) * n + v; };
    // Nodes reachable from (s, kappa); each must get a walk within max_walk_len.
    std::vector<std::uint8_t> reachable(n, 0);
    {
      std::vector<std::uint8_t> seen(n * (kappa + 1), 0);
      std::vector<std::pair<NodeId, unsigned>> stack{{s, kappa}};
      seen[state(s, kappa)] = 1;
      while (!stack.empty()) {
        auto [x, cx] = stack.back();
        stack.pop_back();
        reachable[x] = 1;
        for (NodeId v : inst.graph().out_neighbors(x)) {
          unsigned nc;
          if (inst.omega().contains(v)) nc = kappa;
          else if (cx >= 1) nc = cx - 1;
          else continue;
          if (!seen[state(v, nc)]) {
            seen[state(v, nc)] = 1;
            stack.push_back({v, nc});
          }
        }
      }
    }

    for_each_feasible_walk(inst, s, budget.max_walk_len, [&](const Walk& w) {
      const std::size_t len = w.nodes.size() - 1;
      const std::size_t st = state(w.nodes.back(), w.charge.back());
      // Repeated state: not a shortest walk to anything, and neither are its extensions.
      for (std::size_t k = 0; k < len; ++k) {
        if (state(w.nodes[k], w.charge[k]) == st) return false;
      }
      const NodeId t = w.nodes.back();
      if (len > 0 && t != s) {
        auto& best = out.length[s * n + t];
        if (best < 0 || static_cast<std::int64_t>(len) < best) {
          best = static_cast<std::int64_t>(len);
          out.sigma[s * n + t] = 0;
          std::fill(credit[t].begin(), credit[t].end(), 0.0);
        }
        if (static_cast<std::int64_t>(len) == best) {
          ++out.sigma[s * n + t];
          for (std::size_t k = 1; k <= len; ++k) credit[t][w.nodes[k]] += 1.0;
        }
      }
      return true;
    });

    for (NodeId t = 0; t < n; ++t) {
      if (t == s || !reachable[t]) continue;
      if (out.sigma[s * n + t] == 0) throw BudgetExceeded("oracle: shortest feasible walk longer than budget");
      const double sigma = static_cast<double>(out.sigma[s * n + t]);
      for (NodeId v = 0; v < n; ++v) out.scores.values[v] += credit[t][v] / sigma;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense linear algebra.

inline Eigen::MatrixXd dense_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_neighbors(u)) a(u, v) = 1.0;
  }
  return a;
}

// The walk operator written block by block: block (b, c) relates charge kappa-b
// to charge kappa-c. Block column 0 is A J_omega; the blocks
// (b, b+1) are A (I - J_omega).
inline Eigen::MatrixXd dense_bkappa(const SocInstance& inst) {
  const Eigen::MatrixXd a = dense_adjacency(inst.graph());
  const auto n = a.rows();
  const auto k = static_cast<Eigen::Index>(inst.kappa());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (NodeId v : inst.omega().members()) j(v, v) = 1.0;
  const Eigen::MatrixXd aj = a * j;
  const Eigen::MatrixXd ajc = a * (Eigen::MatrixXd::Identity(n, n) - j);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n * (k + 1), n * (k + 1));
  for (Eigen::Index blk = 0; blk <= k; ++blk) {
    b.block(blk * n, 0, n, n) += aj;
    if (blk < k) b.block(blk * n, (blk + 1) * n, n, n) += ajc;
  }
  return b;
}

inline double dense_spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Row sums of the first block of (I - alpha B)^{-1}, by direct inversion.
inline ScoreVector dense_soc_katz(const SocInstance& inst, double alpha) {
  const auto states = inst.node_count() * (inst.kappa() + 1);
  if (states > 200) throw BudgetExceeded("dense katz: state space too large");
  const Eigen::MatrixXd b = dense_bkappa(inst);
  if (alpha * dense_spectral_radius(b) >= 1.0) throw NumericalError("dense katz: alpha at or above the bound");
  const auto dim = b.rows();
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim) - alpha * b;
  const Eigen::VectorXd c = m.fullPivLu().solve(Eigen::VectorXd::Ones(dim));
  ScoreVector out;
  out.values.resize(inst.node_count());
  for (std::size_t v = 0; v < inst.node_count(); ++v) out.values[v] = c[static_cast<Eigen::Index>(v)];
  out.meta.measure = "soc-katz";
  out.meta.params = {{"alpha", alpha}, {"kappa", inst.kappa()}, {"oracle", true}};
  return out;
}

// Row sums of (I - alpha A)^{-1}, by direct inversion.
inline std::vector<double> dense_katz(const Graph& g, double alpha) {
  const Eigen::MatrixXd a = dense_adjacency(g);
  const auto n = a.rows();
  const Eigen::VectorXd c = (Eigen::MatrixXd::Identity(n, n) - alpha * a).fullPivLu().solve(Eigen::VectorXd::Ones(n));
  return {c.data(), c.data() + n};
}

// ---------------------------------------------------------------------------
// Random-walk flow by sampling.

struct MonteCarloFlow {
  WalkSubgraph subgraph;
  std::vector<double> arc_flow;   // mean uses per subgraph arc
  std::vector<double> net_flow;   // 1/2 sum over unordered pairs of |mean(F_ij - F_ji)|
  std::vector<double> std_error;  // delta-method standard error of net_flow
  std::size_t walks = 0;
};

// Samples absorbing walks from s on the s -> t walk subgraph, each hop along a
// uniformly chosen out-arc. Two passes over the same random stream: the first
// estimates the per-pair net flows, the second the spread of the linearized
// per-walk contributions sum_j sgn(mean_ij) (c_ij - c_ji) / 2.
inline MonteCarloFlow monte_carlo_rwbc(const Adjacency& fwd, NodeId s, NodeId t, std::size_t walks,
                                       std::uint64_t seed = 0, std::size_t max_hops = 1'000'000) {
  MonteCarloFlow out;
  out.subgraph = walk_subgraph(fwd, s, t);
  out.walks = walks;
  const WalkSubgraph& sub = out.subgraph;
  if (sub.empty() || walks == 0) return out;
  const std::size_t n = sub.size();
  const std::size_t arcs = sub.arcs.size();
  std::vector<std::vector<std::size_t>> out_arcs(n);
  for (std::size_t a = 0; a < arcs; ++a) out_arcs[sub.arcs[a].first].push_back(a);

  // Unordered pair key per non-loop arc, with the orientation sign.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_of(arcs);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::size_t a = 0; a < arcs; ++a) {
    const auto [i, j] = sub.arcs[a];
    pair_of[a] = {std::min(i, j), std::max(i, j)};
    if (i != j) pairs.push_back(pair_of[a]);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  auto pair_index = [&](std::size_t a) {
    return static_cast<std::size_t>(std::lower_bound(pairs.begin(), pairs.end(), pair_of[a]) - pairs.begin());
  };
  std::vector<std::size_t> arc_pair(arcs);
  std::vector<double> arc_sign(arcs, 0.0);
  for (std::size_t a = 0; a < arcs; ++a) {
    const auto [i, j] = sub.arcs[a];
    if (i == j) continue;
    arc_pair[a] = pair_index(a);
    arc_sign[a] = i < j ? 1.0 : -1.0;
  }

  std::vector<std::uint32_t> used(arcs, 0);
  std::vector<std::size_t> touched;
  auto run = [&](Rng& rng) {
    for (std::size_t a : touched) used[a] = 0;
    touched.clear();
    std::uint32_t v = sub.source;
    for (std::size_t hop = 0; v != sub.target; ++hop) {
      if (hop >= max_hops) throw NumericalError("monte carlo walk did not absorb");
      const auto& opts = out_arcs[v];
      const std::size_t a = opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
      if (used[a]++ == 0) touched.push_back(a);
      v = sub.arcs[a].second;
    }
  };

  std::vector<double> arc_sum(arcs, 0.0), pair_sum(pairs.size(), 0.0);
  {
    Rng rng = make_rng(seed, 0x3c);
    for (std::size_t w = 0; w < walks; ++w) {
      run(rng);
      for (std::size_t a : touched) {
        arc_sum[a] += used[a];
        if (arc_sign[a] != 0.0) pair_sum[arc_pair[a]] += arc_sign[a] * used[a];
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(walks);
  out.arc_flow.resize(arcs);
  for (std::size_t a = 0; a < arcs; ++a) out.arc_flow[a] = arc_sum[a] * inv;
  std::vector<double> pair_mean(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) pair_mean[p] = pair_sum[p] * inv;
  out.net_flow.assign(n, 0.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out.net_flow[pairs[p].first] += 0.5 * std::abs(pair_mean[p]);
    out.net_flow[pairs[p].second] += 0.5 * std::abs(pair_mean[p]);
  }

  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0), y(n, 0.0), pair_walk(pairs.size(), 0.0);
  {
    Rng rng = make_rng(seed, 0x3c);
    for (std::size_t w = 0; w < walks; ++w) {
      run(rng);
      std::fill(pair_walk.begin(), pair_walk.end(), 0.0);
      for (std::size_t a : touched) {
        if (arc_sign[a] != 0.0) pair_walk[arc_pair[a]] += arc_sign[a] * used[a];
      }
      std::fill(y.begin(), y.end(), 0.0);
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double sg = (pair_mean[p] > 0.0) - (pair_mean[p] < 0.0);
        y[pairs[p].first] += 0.5 * sg * pair_walk[p];
        y[pairs[p].second] += 0.5 * sg * pair_walk[p];
      }
      for (std::size_t v = 0; v < n; ++v) {
        sum[v] += y[v];
        sum_sq[v] += y[v] * y[v];
      }
    }
  }
  out.std_error.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const double mean = sum[v] * inv;
    const double var = std::max(0.0, sum_sq[v] * inv - mean * mean);
    out.std_error[v] = std::sqrt(var * inv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Current-flow betweenness on an undirected graph for one pair: unit current
// injected at s and extracted at t, potentials from the Laplacian grounded at t,
// throughput of node i = 1/2 sum over neighbours j of |p_i - p_j|.
inline std::vector<double> current_flow_pair(const Graph& g, NodeId s, NodeId t) {
  if (g.directed()) throw InputError("current flow oracle needs an undirected graph");
  if (s == t) throw InputError("current flow oracle needs distinct endpoints");
  const std::size_t n = g.node_count();
  // Restrict to the component of s; nodes outside carry no current.
  std::vector<std::uint8_t> in = detail::reach_mask(g.arcs(), s);
  if (!in[t]) throw InputError("current flow oracle: endpoints disconnected");
  std::vector<std::int64_t> slot(n, -1);
  Eigen::Index m = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (in[v] && v != t) slot[v] = m++;
  }
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
  for (NodeId u = 0; u < n; ++u) {
    if (!in[u]) continue;
    for (NodeId v : g.out_neighbors(u)) {
      if (u == v) continue;
      if (slot[u] >= 0) lap(slot[u], slot[u]) += 1.0;
      if (slot[u] >= 0 && slot[v] >= 0) lap(slot[u], slot[v]) -= 1.0;
    }
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b[slot[s]] = 1.0;
  const Eigen::VectorXd pot = lap.ldlt().solve(b);
  auto p = [&](NodeId v) { return slot[v] >= 0 ? pot[slot[v]] : 0.0; };
  std::vector<double> through(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    if (!in[u]) continue;
    for (NodeId v : g.out_neighbors(u)) {
      if (u != v) through[u] += 0.5 * std::abs(p(u) - p(v));
    }
  }
  return through;
}

}  // namespace soc::testkit

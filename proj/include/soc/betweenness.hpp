#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "soc/detail/parallel.hpp"
#include "soc/graph.hpp"
#include "soc/scores.hpp"
#include "soc/state_space.hpp"

namespace soc {

// Which path endpoints are credited. The SOC kernel credits the target and
// never the source; kExcludeBoth is the textbook convention.
enum class Endpoints { kTargetOnly, kExcludeBoth };

// Single-source shortest-path bookkeeping over a digraph. Predecessors are not
// stored: v precedes w iff there is an arc v -> w and distance[w] == distance[v] + 1.
template <typename Count = double>
struct DependencyState {
  explicit DependencyState(std::size_t n) : distance(n, -1), sigma(n, Count{0}) {}

  StateId source = 0;
  std::vector<std::int64_t> distance;
  std::vector<Count> sigma;
  std::vector<StateId> order;  // BFS visit order, non-decreasing distance

  bool reached(StateId v) const noexcept { return distance[v] >= 0; }

  void reset() {
    for (StateId v : order) {
      distance[v] = -1;
      sigma[v] = Count{0};
    }
    order.clear();
  }
};

namespace detail {

template <typename Count>
void add_count(Count& acc, Count x) {
  if constexpr (std::is_integral_v<Count>) {
    if (acc > std::numeric_limits<Count>::max() - x) throw std::overflow_error("shortest-path count overflow");
  }
  acc += x;
}

}  // namespace detail

template <typename Count>
void brandes_bfs(const Adjacency& adj, StateId source, DependencyState<Count>& st) {
  st.reset();
  st.source = source;
  st.distance[source] = 0;
  st.sigma[source] = Count{1};
  st.order.push_back(source);
  for (std::size_t head = 0; head < st.order.size(); ++head) {
    const StateId v = st.order[head];
    for (NodeId w : adj.out(v)) {
      if (st.distance[w] < 0) {
        st.distance[w] = st.distance[v] + 1;
        st.order.push_back(w);
      }
      if (st.distance[w] == st.distance[v] + 1) detail::add_count(st.sigma[w], st.sigma[v]);
    }
  }
}

template <typename Count = double>
DependencyState<Count> brandes_bfs(const Adjacency& adj, StateId source) {
  DependencyState<Count> st(adj.size());
  brandes_bfs(adj, source, st);
  return st;
}

namespace detail {

// Back-propagation in non-increasing distance order:
//   delta[v] = sum over successors w with chi[w] of sigma[v]/sigma[w] * (1_T(w) + delta[w]).
// chi starts at 1 on targets and spreads to predecessors of chi-marked states.
template <typename Count, typename IsTarget>
void accumulate_dependency(const Adjacency& adj, const DependencyState<Count>& st, IsTarget&& is_target,
                           std::vector<double>& delta, std::vector<std::uint8_t>& chi) {
  for (auto it = st.order.rbegin(); it != st.order.rend(); ++it) {
    const StateId v = *it;
    double acc = 0.0;
    bool marked = is_target(v);
    const std::int64_t next_level = st.distance[v] + 1;
    const double sigma_v = static_cast<double>(st.sigma[v]);
    for (NodeId w : adj.out(v)) {
      if (st.distance[w] != next_level || !chi[w]) continue;
      acc += sigma_v / static_cast<double>(st.sigma[w]) * ((is_target(w) ? 1.0 : 0.0) + delta[w]);
      marked = true;
    }
    delta[v] = acc;
    chi[v] = marked ? 1 : 0;
  }
}

template <typename Count>
void clear_dependency(const DependencyState<Count>& st, std::vector<double>& delta, std::vector<std::uint8_t>& chi) {
  for (StateId v : st.order) {
    delta[v] = 0.0;
    chi[v] = 0;
  }
}

}  // namespace detail

// Target-restricted dependency of the BFS source on every state:
// delta(v) = sum over t in T of sigma_st(v) / sigma_st.
template <typename Count>
std::vector<double> target_restricted_dependency(const Adjacency& adj, const DependencyState<Count>& st,
                                                 std::span<const std::uint8_t> is_target) {
  if (is_target.size() != adj.size()) throw std::invalid_argument("target mask size mismatch");
  std::vector<double> delta(adj.size(), 0.0);
  std::vector<std::uint8_t> chi(adj.size(), 0);
  detail::accumulate_dependency(adj, st, [&](StateId v) { return is_target[v] != 0; }, delta, chi);
  return delta;
}

struct BcScores {
  std::vector<double> state_scores;  // over the starred state space; star states are 0
  ScoreVector node_scores;
};

// SOC-betweenness: Brandes over the starred state graph from every full-charge
// source state with targets = star states, then summed over charge levels.
// Unnormalized; targets credited, sources not.
template <typename Count = double>
BcScores soc_betweenness_states(const SocInstance& inst) {
  const StateGraph sg(inst, true);
  const StateIndexer& idx = sg.indexer();
  const Adjacency& adj = sg.adjacency();
  const std::size_t n = inst.node_count();
  const std::size_t states = sg.state_count();
  const StateId first_star = idx.star(0);
  auto is_star = [first_star](StateId v) { return v >= first_star; };

  const std::size_t block = std::max<std::size_t>(1, (n + 63) / 64);
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<std::vector<double>> partial(blocks);
  detail::for_each_block(n, block, [&](std::size_t b, std::size_t begin, std::size_t end) {
    std::vector<double> acc(states, 0.0);
    DependencyState<Count> st(states);
    std::vector<double> delta(states, 0.0);
    std::vector<std::uint8_t> chi(states, 0);
    for (std::size_t s = begin; s < end; ++s) {
      const StateId source = idx.index(static_cast<NodeId>(s), inst.kappa());
      detail::clear_dependency(st, delta, chi);
      brandes_bfs(adj, source, st);
      detail::accumulate_dependency(adj, st, is_star, delta, chi);
      for (StateId w : st.order) {
        if (w != source && chi[w]) acc[w] += delta[w];
      }
    }
    partial[b] = std::move(acc);
  });

  BcScores out;
  out.state_scores.assign(states, 0.0);
  for (const auto& p : partial) {
    for (std::size_t v = 0; v < states; ++v) out.state_scores[v] += p[v];
  }
  out.node_scores.values.assign(n, 0.0);
  for (unsigned soc = 0; soc <= inst.kappa(); ++soc) {
    for (NodeId v = 0; v < n; ++v) out.node_scores.values[v] += out.state_scores[idx.index(v, soc)];
  }
  out.node_scores.meta.measure = "soc-bc";
  out.node_scores.meta.params = {{"kappa", inst.kappa()}};
  return out;
}

template <typename Count = double>
ScoreVector soc_betweenness(const SocInstance& inst) {
  return soc_betweenness_states<Count>(inst).node_scores;
}

// Brandes betweenness on the base graph, unnormalized.
template <typename Count = double>
ScoreVector standard_betweenness(const Graph& g, Endpoints endpoints = Endpoints::kTargetOnly) {
  const Adjacency& adj = g.arcs();
  const std::size_t n = g.node_count();
  const std::size_t block = std::max<std::size_t>(1, (n + 63) / 64);
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<std::vector<double>> partial(blocks);
  auto all = [](StateId) { return true; };
  detail::for_each_block(n, block, [&](std::size_t b, std::size_t begin, std::size_t end) {
    std::vector<double> acc(n, 0.0);
    DependencyState<Count> st(n);
    std::vector<double> delta(n, 0.0);
    std::vector<std::uint8_t> chi(n, 0);
    for (std::size_t s = begin; s < end; ++s) {
      detail::clear_dependency(st, delta, chi);
      brandes_bfs(adj, static_cast<StateId>(s), st);
      detail::accumulate_dependency(adj, st, all, delta, chi);
      for (StateId w : st.order) {
        if (w == s) continue;
        acc[w] += delta[w] + (endpoints == Endpoints::kTargetOnly ? 1.0 : 0.0);
      }
    }
    partial[b] = std::move(acc);
  });
  ScoreVector out;
  out.values.assign(n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t v = 0; v < n; ++v) out.values[v] += p[v];
  }
  out.meta.measure = "bc";
  out.meta.params = {{"endpoints", endpoints == Endpoints::kTargetOnly ? "target" : "exclude-both"}};
  return out;
}

}  // namespace soc

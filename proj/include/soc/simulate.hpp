#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "soc/detail/parallel.hpp"
#include "soc/errors.hpp"
#include "soc/graph.hpp"
#include "soc/sampling.hpp"
#include "soc/state_space.hpp"

namespace soc {

// Realized per-node scores from a simulation run.
struct SimOutcome {
  std::vector<double> values;
  nlohmann::json meta = nlohmann::json::object();
};

// ---------------------------------------------------------------------------
// Generalized SIR spreading with a consumable charge (recovery probability 1).

struct SirParams {
  double alpha = 0.03;  // per-contact transmission probability
  std::size_t runs = 1000;
  std::size_t max_steps = 100'000;
  std::uint64_t seed = 0;
};

namespace detail {

struct SirWorkspace {
  enum Status : std::uint8_t { kSusceptible = 0, kInfected = 1, kRecovered = 2 };

  explicit SirWorkspace(std::size_t n) : status(n, kSusceptible), charge(n, 0), pending(n, -1) {}

  std::vector<std::uint8_t> status;
  std::vector<int> charge;
  std::vector<int> pending;  // best charge offered this round, -1 if none
  std::vector<NodeId> infected, next, touched;

  void reset() {
    for (NodeId v : touched) {
      status[v] = kSusceptible;
      charge[v] = 0;
      pending[v] = -1;
    }
    touched.clear();
    infected.clear();
    next.clear();
  }
};

}  // namespace detail

// One episode seeded at `seed_node`; returns the number of ever-infected nodes.
//
// Synchronous rounds. An infected node u with charge c tries each neighbour w
// that is susceptible at the start of the round, succeeding with probability
// alpha; w outside the refill set is only reachable when c >= 1. A newly
// infected w gets charge kappa if it refills, otherwise c - 1; with several
// successful parents it keeps the largest. Every infected node recovers after
// its round.
template <typename Urbg>
std::size_t sir_episode(const SocInstance& inst, NodeId seed_node, double alpha, std::size_t max_steps, Urbg& rng,
                        detail::SirWorkspace& ws) {
  using WS = detail::SirWorkspace;
  const Graph& g = inst.graph();
  const RefillSet& omega = inst.omega();
  const int kappa = static_cast<int>(inst.kappa());
  std::bernoulli_distribution transmit(alpha);

  ws.reset();
  ws.status[seed_node] = WS::kInfected;
  ws.charge[seed_node] = kappa;
  ws.infected.push_back(seed_node);
  ws.touched.push_back(seed_node);
  std::size_t ever = 1;
  for (std::size_t step = 0; step < max_steps && !ws.infected.empty(); ++step) {
    std::sort(ws.infected.begin(), ws.infected.end());
    ws.next.clear();
    for (NodeId u : ws.infected) {
      const int c = ws.charge[u];
      for (NodeId w : g.arcs().out(u)) {
        if (ws.status[w] != WS::kSusceptible) continue;
        const bool refill = omega.contains(w);
        if (!refill && c < 1) continue;
        if (!transmit(rng)) continue;
        const int offered = refill ? kappa : c - 1;
        if (ws.pending[w] < 0) {
          ws.next.push_back(w);
          ws.touched.push_back(w);
        }
        ws.pending[w] = std::max(ws.pending[w], offered);
      }
    }
    for (NodeId u : ws.infected) ws.status[u] = WS::kRecovered;
    for (NodeId w : ws.next) {
      ws.status[w] = WS::kInfected;
      ws.charge[w] = ws.pending[w];
      ws.pending[w] = -1;
    }
    ever += ws.next.size();
    ws.infected.swap(ws.next);
  }
  return ever;
}

inline void check_sir_params(const SirParams& p) {
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw InputError("SIR transmission probability must lie in [0, 1]");
  if (p.runs == 0) throw InputError("SIR needs at least one run");
}

// Outbreak sizes of p.runs episodes seeded at one node. Episode k uses the
// stream keyed by (p.seed, seed_node, k).
inline std::vector<std::size_t> sir_outbreak_sizes(const SocInstance& inst, const SirParams& p, NodeId seed_node) {
  check_sir_params(p);
  if (seed_node >= inst.node_count()) throw std::out_of_range("SIR seed node out of range");
  detail::SirWorkspace ws(inst.node_count());
  std::vector<std::size_t> sizes(p.runs);
  for (std::size_t k = 0; k < p.runs; ++k) {
    Rng rng = make_rng(p.seed, seed_node, k);
    sizes[k] = sir_episode(inst, seed_node, p.alpha, p.max_steps, rng, ws);
  }
  return sizes;
}

// Spreading influence: mean outbreak size when seeding each node.
inline SimOutcome sir_influence(const SocInstance& inst, const SirParams& p) {
  check_sir_params(p);
  const std::size_t n = inst.node_count();
  SimOutcome out;
  out.values.assign(n, 0.0);
  detail::for_each_block(n, std::max<std::size_t>(1, (n + 63) / 64), [&](std::size_t, std::size_t begin,
                                                                          std::size_t end) {
    detail::SirWorkspace ws(n);
    for (std::size_t v = begin; v < end; ++v) {
      std::size_t total = 0;
      for (std::size_t k = 0; k < p.runs; ++k) {
        Rng rng = make_rng(p.seed, v, k);
        total += sir_episode(inst, static_cast<NodeId>(v), p.alpha, p.max_steps, rng, ws);
      }
      out.values[v] = static_cast<double>(total) / static_cast<double>(p.runs);
    }
  });
  out.meta = {{"simulation", "sir"},
              {"alpha", p.alpha},
              {"runs", p.runs},
              {"max_steps", p.max_steps},
              {"seed", p.seed},
              {"kappa", inst.kappa()},
              {"omega_size", inst.omega().size()}};
  return out;
}

// ---------------------------------------------------------------------------
// Particle hopping with feasibility-informed routing.

enum class RoutingPolicy { kShortestFeasible, kRandomFeasible };

struct Trip {
  std::size_t step;
  NodeId source;
  NodeId target;
};

struct HoppingParams {
  RoutingPolicy policy = RoutingPolicy::kShortestFeasible;
  std::size_t duration = 10'000;
  double injection_rate = 0.5;  // mean new particles per step (Poisson)
  std::uint64_t seed = 0;
  // Explicit injections; when non-empty, no random injection happens.
  std::vector<Trip> scripted;
  std::size_t cache_bytes = std::size_t{1} << 30;
};

struct HoppingStats {
  std::uint64_t injected = 0;            // particles created (placed or waiting at source)
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;           // on the network at the end
  std::uint64_t pending_injection = 0;   // waiting for a free source at the end
  std::uint64_t resampled_pairs = 0;     // drawn pairs with no feasible walk
  std::uint64_t blocked_moves = 0;
  std::uint64_t cycle_moves = 0;         // blocked moves released by a waiting cycle
  std::uint64_t delayed_injections = 0;  // step-attempts where the source was occupied
};

inline nlohmann::json to_json(const HoppingStats& s) {
  return {{"injected", s.injected},
          {"delivered", s.delivered},
          {"in_flight", s.in_flight},
          {"pending_injection", s.pending_injection},
          {"resampled_pairs", s.resampled_pairs},
          {"blocked_moves", s.blocked_moves},
          {"cycle_moves", s.cycle_moves},
          {"delayed_injections", s.delayed_injections}};
}

struct HoppingResult {
  SimOutcome outcome;  // occupation ratio per node
  HoppingStats stats;
};

// Distances (in state-graph hops) from every state to the first arrival at a
// target node, and the number of shortest such walks.
struct TargetField {
  static constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> dist;
  std::vector<double> paths;

  bool reaches(StateId s) const noexcept { return dist[s] != kUnreachable; }
};

inline TargetField target_field(const StateGraph& sg, const Adjacency& reverse, NodeId target) {
  const StateIndexer& idx = sg.indexer();
  TargetField f;
  f.dist.assign(sg.state_count(), TargetField::kUnreachable);
  f.paths.assign(sg.state_count(), 0.0);
  std::vector<StateId> queue;
  for (unsigned soc = 0; soc <= idx.kappa(); ++soc) {
    const StateId s = idx.index(target, soc);
    f.dist[s] = 0;
    f.paths[s] = 1.0;
    queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const StateId v = queue[head];
    for (NodeId p : reverse.out(v)) {
      if (f.dist[p] == TargetField::kUnreachable) {
        f.dist[p] = f.dist[v] + 1;
        queue.push_back(p);
      }
      if (f.dist[p] == f.dist[v] + 1) f.paths[p] += f.paths[v];
    }
  }
  return f;
}

namespace detail {

class FieldCache {
 public:
  FieldCache(const StateGraph& sg, std::size_t budget_bytes)
      : sg_(sg), reverse_(sg.adjacency().reversed()), budget_(budget_bytes) {}

  std::shared_ptr<const TargetField> get(NodeId t) {
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
    const std::size_t bytes = sg_.state_count() * (sizeof(std::uint32_t) + sizeof(double));
    if (used_ + bytes > budget_) {
      cache_.clear();  // particles in flight keep their own references
      used_ = 0;
    }
    auto field = std::make_shared<const TargetField>(target_field(sg_, reverse_, t));
    cache_.emplace(t, field);
    used_ += bytes;
    return field;
  }

 private:
  const StateGraph& sg_;
  Adjacency reverse_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::unordered_map<NodeId, std::shared_ptr<const TargetField>> cache_;
};

struct Particle {
  StateId state;
  NodeId source;
  NodeId target;
  std::shared_ptr<const TargetField> field;
  std::vector<StateId> route;  // remaining hops under the shortest policy
  std::size_t hop = 0;
  bool arrived = false;
  StateId want = 0;  // next state of a move blocked this step
  bool blocked = false;
};

}  // namespace detail

// Discrete-time particle hopping; at most one particle per node. Each step:
// particles move once in a random order (a move into an occupied node blocks),
// blocked particles that wait on each other in a cycle advance together, new
// particles are injected at free sources, occupancy is recorded, then particles
// that reached their target leave. Returns occupied-steps / duration.
//
// Every blocked particle waits on exactly one occupant, so each chain of waits
// ends in a cycle or in a particle that can move: the network never gridlocks.
inline HoppingResult particle_hopping(const SocInstance& inst, const HoppingParams& p) {
  if (p.duration == 0) throw InputError("hopping duration must be positive");
  if (!(p.injection_rate >= 0.0)) throw InputError("injection rate must be non-negative");
  const std::size_t n = inst.node_count();
  if (n < 2) throw InputError("hopping needs at least two nodes");
  const StateGraph sg(inst, false);
  const StateIndexer& idx = sg.indexer();
  detail::FieldCache fields(sg, p.cache_bytes);
  Rng rng = make_rng(p.seed, 0x4f9);

  std::vector<std::uint8_t> occupied(n, 0);
  std::vector<std::uint64_t> occupied_steps(n, 0);
  std::vector<detail::Particle> active;
  std::deque<detail::Particle> pending;
  HoppingStats stats;

  std::uniform_int_distribution<NodeId> pick_src(0, static_cast<NodeId>(n - 1));
  std::uniform_int_distribution<NodeId> pick_dst(0, static_cast<NodeId>(n - 2));
  std::poisson_distribution<std::uint64_t> arrivals(p.injection_rate > 0.0 ? p.injection_rate : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto make_particle = [&](NodeId s, NodeId t, std::shared_ptr<const TargetField> field) {
    detail::Particle q{idx.index(s, inst.kappa()), s, t, std::move(field), {}, 0, false};
    return q;
  };
  // Uniform over shortest feasible walks: successor w is taken with probability paths[w] / paths[v].
  auto sample_route = [&](detail::Particle& q) {
    const TargetField& f = *q.field;
    StateId cur = q.state;
    while (f.dist[cur] > 0) {
      double r = unit(rng) * f.paths[cur];
      StateId chosen = TargetField::kUnreachable;
      for (NodeId w : sg.out(cur)) {
        if (f.dist[w] + 1 != f.dist[cur]) continue;
        chosen = w;
        r -= f.paths[w];
        if (r < 0.0) break;
      }
      q.route.push_back(chosen);
      cur = chosen;
    }
  };
  auto next_state = [&](const detail::Particle& q) -> StateId {
    if (p.policy == RoutingPolicy::kShortestFeasible) return q.route[q.hop];
    const TargetField& f = *q.field;
    std::size_t options = 0;
    for (NodeId w : sg.out(q.state)) options += f.reaches(w) ? 1 : 0;
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, options - 1)(rng);
    for (NodeId w : sg.out(q.state)) {
      if (!f.reaches(w)) continue;
      if (k-- == 0) return w;
    }
    throw std::logic_error("particle stranded");
  };
  auto enqueue = [&](NodeId s, NodeId t) {
    auto field = fields.get(t);
    if (!field->reaches(idx.index(s, inst.kappa()))) return false;
    pending.push_back(make_particle(s, t, std::move(field)));
    ++stats.injected;
    return true;
  };

  std::vector<Trip> script = p.scripted;
  std::stable_sort(script.begin(), script.end(), [](const Trip& a, const Trip& b) { return a.step < b.step; });
  std::size_t script_pos = 0;
  std::vector<std::size_t> order;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> holder(n, kNone);
  std::vector<std::uint8_t> mark;
  std::vector<std::size_t> trail;
  auto advance = [&](detail::Particle& q, StateId next) {
    q.state = next;
    ++q.hop;
    if (idx.decode(next).node == q.target) q.arrived = true;
  };

  for (std::size_t step = 0; step < p.duration; ++step) {
    // Moves.
    order.resize(active.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      detail::Particle& q = active[i];
      const StateId next = next_state(q);
      const NodeId from = idx.decode(q.state).node;
      const NodeId to = idx.decode(next).node;
      q.blocked = to != from && occupied[to];
      if (q.blocked) {
        q.want = next;
        ++stats.blocked_moves;
        continue;
      }
      occupied[from] = 0;
      occupied[to] = 1;
      advance(q, next);
    }

    // Waiting cycles. mark: 0 unvisited, 1 on the current trail, 2 done.
    for (std::size_t i = 0; i < active.size(); ++i) holder[idx.decode(active[i].state).node] = i;
    mark.assign(active.size(), 0);
    for (std::size_t i = 0; i < active.size(); ++i) {
      trail.clear();
      std::size_t j = i;
      while (j != kNone && active[j].blocked && mark[j] == 0) {
        mark[j] = 1;
        trail.push_back(j);
        j = holder[idx.decode(active[j].want).node];
      }
      if (j != kNone && mark[j] == 1) {
        // Occupied nodes are unchanged as a set when the whole cycle moves.
        for (auto it = std::find(trail.begin(), trail.end(), j); it != trail.end(); ++it) {
          advance(active[*it], active[*it].want);
          ++stats.cycle_moves;
        }
      }
      for (std::size_t k : trail) mark[k] = 2;
    }
    for (const auto& q : active) holder[idx.decode(q.state).node] = kNone;

    // Injections.
    if (!script.empty()) {
      for (; script_pos < script.size() && script[script_pos].step == step; ++script_pos) {
        const Trip& tr = script[script_pos];
        if (tr.source >= n || tr.target >= n || tr.source == tr.target) throw InputError("invalid scripted trip");
        if (!enqueue(tr.source, tr.target)) ++stats.resampled_pairs;
      }
    } else if (p.injection_rate > 0.0) {
      const std::uint64_t k = arrivals(rng);
      for (std::uint64_t j = 0; j < k; ++j) {
        for (std::size_t attempt = 0;; ++attempt) {
          if (attempt > 1000 * n) throw InputError("no feasible source-target pair found");
          const NodeId s = pick_src(rng);
          NodeId t = pick_dst(rng);
          if (t >= s) ++t;
          if (enqueue(s, t)) break;
          ++stats.resampled_pairs;
        }
      }
    }
    for (auto it = pending.begin(); it != pending.end();) {
      if (occupied[it->source]) {
        ++stats.delayed_injections;
        ++it;
        continue;
      }
      occupied[it->source] = 1;
      if (p.policy == RoutingPolicy::kShortestFeasible) sample_route(*it);
      active.push_back(std::move(*it));
      it = pending.erase(it);
    }

    // Occupancy, then departures.
    for (const auto& q : active) ++occupied_steps[idx.decode(q.state).node];
    for (std::size_t i = 0; i < active.size();) {
      if (active[i].arrived) {
        occupied[idx.decode(active[i].state).node] = 0;
        ++stats.delivered;
        active[i] = std::move(active.back());
        active.pop_back();
      } else {
        ++i;
      }
    }
    if (stats.injected != stats.delivered + active.size() + pending.size()) {
      throw std::logic_error("particle conservation violated");
    }
  }
  stats.in_flight = active.size();
  stats.pending_injection = pending.size();

  HoppingResult res;
  res.stats = stats;
  res.outcome.values.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    res.outcome.values[v] = static_cast<double>(occupied_steps[v]) / static_cast<double>(p.duration);
  }
  res.outcome.meta = {{"simulation", "hopping"},
                      {"policy", p.policy == RoutingPolicy::kShortestFeasible ? "shortest" : "random"},
                      {"duration", p.duration},
                      {"injection_rate", p.injection_rate},
                      {"seed", p.seed},
                      {"kappa", inst.kappa()},
                      {"omega_size", inst.omega().size()},
                      {"stats", to_json(stats)}};
  return res;
}

}  // namespace soc

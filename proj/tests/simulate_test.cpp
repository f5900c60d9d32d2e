#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "soc/generators.hpp"
#include "soc/simulate.hpp"
#include "test_util.hpp"

namespace soc {
namespace {

SirParams sir(double alpha, std::size_t runs, std::uint64_t seed = 0) {
  SirParams p;
  p.alpha = alpha;
  p.runs = runs;
  p.seed = seed;
  return p;
}

TEST(Sir, NoTransmissionInfectsOnlyTheSeed) {
  const SocInstance inst(gen::grid(4, 4), RefillSet::all(16), 3);
  const auto r = sir_influence(inst, sir(0.0, 20));
  for (double v : r.values) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(r.meta["simulation"], "sir");
}

TEST(Sir, ChargeLimitsCertainSpread) {
  const SocInstance inst(gen::star(4), RefillSet::none(5), 1);
  const auto r = sir_influence(inst, sir(1.0, 5));
  EXPECT_EQ(r.values[0], 5.0);
  for (NodeId v = 1; v < 5; ++v) EXPECT_EQ(r.values[v], 2.0);
}

TEST(Sir, RefillExtendsReach) {
  const SocInstance with(gen::path(3), RefillSet(3, std::vector<NodeId>{1}), 1);
  const SocInstance without(gen::path(3), RefillSet::none(3), 1);
  EXPECT_EQ(sir_outbreak_sizes(with, sir(1.0, 3), 0), (std::vector<std::size_t>{3, 3, 3}));
  EXPECT_EQ(sir_outbreak_sizes(without, sir(1.0, 3), 0), (std::vector<std::size_t>{2, 2, 2}));
}

TEST(Sir, RejectsBadParameters) {
  const SocInstance inst(gen::path(3), RefillSet::none(3), 1);
  EXPECT_THROW(sir_influence(inst, sir(1.5, 1)), InputError);
  EXPECT_THROW(sir_influence(inst, sir(0.5, 0)), InputError);
  EXPECT_THROW(sir_outbreak_sizes(inst, sir(0.5, 1), 3), std::out_of_range);
}

TEST(Sir, DeterministicAndBounded) {
  const SocInstance inst(gen::erdos_renyi(30, 0.1, false, 4), sample_refill_set(30, 0.3, 1), 2);
  const auto a = sir_influence(inst, sir(0.4, 50, 9));
  const auto b = sir_influence(inst, sir(0.4, 50, 9));
  EXPECT_EQ(a.values, b.values);
  for (double v : a.values) {
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 30.0);
  }
}

// Plain SIR with recovery after one round, written independently.
std::size_t plain_sir(const Graph& g, NodeId seed, double alpha, std::mt19937& rng) {
  std::vector<int> state(g.node_count(), 0);
  std::vector<NodeId> infected{seed}, next;
  state[seed] = 1;
  std::size_t total = 1;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (!infected.empty()) {
    next.clear();
    for (NodeId v : infected) {
      for (NodeId w : g.out_neighbors(v)) {
        if (state[w] == 0 && u(rng) < alpha) {
          state[w] = 1;
          next.push_back(w);
        }
      }
    }
    total += next.size();
    infected.swap(next);
  }
  return total;
}

// With every node refilling the charge never binds; outbreak size
// distributions must match plain SIR (two-sample KS at the 5% level).
TEST(Sir, FullRefillMatchesPlainSir) {
  const Graph g = gen::erdos_renyi(30, 0.15, false, 2);
  const SocInstance inst(g, RefillSet::all(30), 1);
  const std::size_t runs = 10'000;
  const double alpha = 0.3;
  auto ours = sir_outbreak_sizes(inst, sir(alpha, runs, 5), 0);
  std::vector<std::size_t> ref(runs);
  std::mt19937 rng(12345);
  for (auto& s : ref) s = plain_sir(g, 0, alpha, rng);
  double ks = 0.0;
  for (std::size_t x = 0; x <= 30; ++x) {
    const auto fa = static_cast<double>(std::count_if(ours.begin(), ours.end(), [&](auto v) { return v <= x; }));
    const auto fb = static_cast<double>(std::count_if(ref.begin(), ref.end(), [&](auto v) { return v <= x; }));
    ks = std::max(ks, std::abs(fa - fb) / static_cast<double>(runs));
  }
  EXPECT_LT(ks, 1.36 * std::sqrt(2.0 / static_cast<double>(runs)));
}

HoppingParams scripted(std::vector<Trip> trips, std::size_t duration,
                       RoutingPolicy policy = RoutingPolicy::kShortestFeasible) {
  HoppingParams p;
  p.policy = policy;
  p.duration = duration;
  p.scripted = std::move(trips);
  return p;
}

TEST(Hopping, SingleTripOccupancy) {
  const SocInstance inst(gen::path(3), RefillSet::none(3), 2);
  const auto r = particle_hopping(inst, scripted({{0, 0, 2}}, 3));
  for (double v : r.outcome.values) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  EXPECT_EQ(r.stats.injected, 1u);
  EXPECT_EQ(r.stats.delivered, 1u);
  EXPECT_EQ(r.stats.in_flight, 0u);
}

TEST(Hopping, InfeasibleTripCounted) {
  const SocInstance inst(gen::path(3), RefillSet::none(3), 1);
  const auto r = particle_hopping(inst, scripted({{0, 0, 2}}, 5));
  EXPECT_EQ(r.stats.injected, 0u);
  EXPECT_EQ(r.stats.resampled_pairs, 1u);
  for (double v : r.outcome.values) EXPECT_EQ(v, 0.0);
}

TEST(Hopping, PoliciesAgreeWhenRouteIsForced) {
  const SocInstance inst(test::directed_path(4), RefillSet::none(4), 3);
  const std::vector<Trip> trips{{0, 0, 3}, {10, 1, 2}};
  const auto a = particle_hopping(inst, scripted(trips, 20));
  const auto b = particle_hopping(inst, scripted(trips, 20, RoutingPolicy::kRandomFeasible));
  EXPECT_EQ(a.outcome.values, b.outcome.values);
  EXPECT_EQ(a.stats.delivered, 2u);
}

// Particles that meet head on wait on each other; the waiting cycle moves as a
// whole, so they pass.
TEST(Hopping, HeadOnParticlesPass) {
  const SocInstance inst(gen::path(3), RefillSet::none(3), 5);
  const auto r = particle_hopping(inst, scripted({{0, 0, 2}, {0, 2, 0}}, 50));
  EXPECT_EQ(r.stats.delivered, 2u);
  EXPECT_GT(r.stats.blocked_moves, 0u);
  EXPECT_GT(r.stats.cycle_moves, 0u);
}

// A chain of waits that ends in a free node is not a cycle.
TEST(Hopping, QueueBehindLeaderIsNotACycle) {
  const SocInstance inst(test::directed_path(5), RefillSet::none(5), 4);
  const auto r = particle_hopping(inst, scripted({{0, 1, 4}, {1, 0, 4}}, 20));
  EXPECT_EQ(r.stats.delivered, 2u);
  EXPECT_EQ(r.stats.cycle_moves, 0u);
}

TEST(Hopping, DenseTrafficKeepsFlowing) {
  const SocInstance inst(gen::grid(10, 10), sample_refill_set(100, 0.2, 1), 8);
  HoppingParams p;
  p.duration = 5000;
  p.injection_rate = 3.0;
  p.seed = 2;
  const auto r = particle_hopping(inst, p);
  EXPECT_GT(r.stats.delivered, 5000u);
}

TEST(Hopping, OccupiedSourceDelaysInjection) {
  const SocInstance inst(gen::path(3), RefillSet::none(3), 5);
  const auto r = particle_hopping(inst, scripted({{0, 0, 2}, {0, 0, 1}}, 10));
  EXPECT_EQ(r.stats.delayed_injections, 1u);
  EXPECT_EQ(r.stats.delivered, 2u);
  EXPECT_EQ(r.stats.pending_injection, 0u);
}

TEST(Hopping, RejectsBadInput) {
  const SocInstance inst(gen::path(3), RefillSet::none(3), 1);
  EXPECT_THROW(particle_hopping(inst, scripted({{0, 1, 1}}, 5)), InputError);
  EXPECT_THROW(particle_hopping(inst, scripted({}, 0)), InputError);
}

TEST(Hopping, RandomInjectionIsDeterministicAndBounded) {
  const SocInstance inst(gen::grid(6, 6), sample_refill_set(36, 0.2, 3), 4);
  for (auto policy : {RoutingPolicy::kShortestFeasible, RoutingPolicy::kRandomFeasible}) {
    HoppingParams p;
    p.policy = policy;
    p.duration = 500;
    p.injection_rate = 0.8;
    p.seed = 11;
    const auto a = particle_hopping(inst, p);
    p.cache_bytes = 0;
    const auto b = particle_hopping(inst, p);
    EXPECT_EQ(a.outcome.values, b.outcome.values);
    EXPECT_EQ(a.stats.delivered, b.stats.delivered);
    EXPECT_GT(a.stats.delivered, 0u);
    EXPECT_EQ(a.stats.injected, a.stats.delivered + a.stats.in_flight + a.stats.pending_injection);
    for (double v : a.outcome.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

}  // namespace
}  // namespace soc

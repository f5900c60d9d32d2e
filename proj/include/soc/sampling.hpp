#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <random>
#include <vector>

#include "soc/errors.hpp"
#include "soc/graph.hpp"
#include "soc/rwbc.hpp"

namespace soc {

// All randomness goes through std::mt19937_64. Independent streams are keyed by
// up to three 64-bit words through std::seed_seq, so a run is reproducible
// bit-for-bit within one build given the same seed.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(substream), hi(substream)};
  return Rng(seq);
}

// Seed of repetition `rep` in a multi-run experiment.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t rep) {
  Rng rng = make_rng(seed, 0x5eed, rep);
  return rng();
}

// Uniform sample without replacement of round(ratio * n) nodes.
inline RefillSet sample_refill_set(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InputError("omega ratio must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  std::vector<NodeId> chosen;
  chosen.reserve(k);
  Rng rng = make_rng(seed, 0x0e6a);
  std::sample(all.begin(), all.end(), std::back_inserter(chosen), k, rng);
  return RefillSet(n, chosen);
}

// Ordered pairs (s, t), s != t, drawn uniformly with replacement.
inline std::vector<StPair> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw InputError("pair sampling needs at least two nodes");
  Rng rng = make_rng(seed, 0x9a125);
  std::uniform_int_distribution<NodeId> src(0, static_cast<NodeId>(n - 1));
  std::uniform_int_distribution<NodeId> dst(0, static_cast<NodeId>(n - 2));
  std::vector<StPair> pairs;
  pairs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const NodeId s = src(rng);
    NodeId t = dst(rng);
    if (t >= s) ++t;
    pairs.push_back({s, t});
  }
  return pairs;
}

}  // namespace soc

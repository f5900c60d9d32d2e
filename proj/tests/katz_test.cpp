#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "soc/generators.hpp"
#include "soc/katz.hpp"
#include "soc/testkit.hpp"
#include "test_util.hpp"

namespace soc {
namespace {

SocInstance path_instance(unsigned kappa, std::vector<NodeId> omega) {
  return SocInstance(gen::path(3), RefillSet(3, omega), kappa);
}

TEST(SocKatz, SingleEdgeNoRefill) {
  const SocInstance inst(gen::path(2), RefillSet::none(2), 1);
  const auto c = soc_katz(inst, {0.5});
  EXPECT_NEAR(c[0], 1.5, 1e-12);
  EXPECT_NEAR(c[1], 1.5, 1e-12);
  EXPECT_EQ(c.meta.measure, "soc-katz");
}

// From (1,1) every walk steps to (0,0) or (2,0) and refills back at 1, so
// x(1,1) = (1 + 2a) / (1 - 2a^2) = 4 and x(0,1) = x(2,1) = 1 + a x(1,1) = 3.
TEST(SocKatz, PathRefillInMiddle) {
  const SocInstance inst = path_instance(1, {1});
  const auto c = soc_katz(inst, {0.5});
  const auto dense = testkit::dense_soc_katz(inst, 0.5);
  const std::vector<double> expect{3.0, 4.0, 3.0};
  for (NodeId v = 0; v < 3; ++v) {
    EXPECT_NEAR(c[v], expect[v], 1e-9);
    EXPECT_NEAR(dense[v], expect[v], 1e-12);
  }
}

TEST(SocKatz, SmallAlphaFirstOrder) {
  const SocInstance inst = test::random_instance(11, 8, 3);
  const double a = 1e-6;
  const auto c = soc_katz(inst, {a});
  const auto walks1 = count_feasible_walks(inst, 1);
  for (NodeId v = 0; v < inst.node_count(); ++v) {
    double row = 0.0;
    for (NodeId w = 0; w < inst.node_count(); ++w) row += static_cast<double>(walks1(v, w));
    EXPECT_NEAR(c[v], 1.0 + a * row, 1e-10);
  }
}

TEST(SocKatz, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SocInstance inst = test::random_instance(seed, 8, 3, 0.4);
    const AlphaBound bound = max_alpha(inst);
    const double alpha = std::isfinite(bound.max_alpha) ? 0.8 * bound.max_alpha : 0.7;
    const auto c = soc_katz(inst, {alpha});
    const auto d = testkit::dense_soc_katz(inst, alpha);
    for (NodeId v = 0; v < inst.node_count(); ++v) EXPECT_NEAR(c[v], d[v], 1e-8 * d[v]) << "seed " << seed;
  }
}

TEST(SocKatz, MonotoneInRefillSet) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SocInstance inst = test::random_instance(seed, 8, 3, 0.4);
    const std::size_t n = inst.node_count();
    // Any alpha valid for Omega = V is valid for every subset.
    const double alpha = 0.8 * max_alpha(inst.with_omega(RefillSet::all(n))).max_alpha;
    const double a = std::isfinite(alpha) ? alpha : 0.7;
    std::vector<NodeId> grow(inst.omega().members().begin(), inst.omega().members().end());
    auto prev = soc_katz(inst, {a});
    for (NodeId v = 0; v < n; ++v) {
      if (inst.omega().contains(v)) continue;
      grow.push_back(v);
      const auto next = soc_katz(inst.with_omega(RefillSet(n, grow)), {a});
      for (NodeId u = 0; u < n; ++u) EXPECT_GE(next[u], prev[u] * (1 - 1e-12));
      prev = next;
    }
  }
}

// The k-th term of the series counts feasible walks of length k from full charge.
TEST(SocKatz, SeriesCoefficientsCountFeasibleWalks) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SocInstance inst = test::random_instance(seed);
    const std::size_t n = inst.node_count();
    const Eigen::MatrixXd b = testkit::dense_bkappa(inst);
    Eigen::VectorXd term = Eigen::VectorXd::Ones(b.rows());
    for (unsigned k = 0; k <= 4; ++k) {
      const auto walks = count_feasible_walks(inst, k);
      for (NodeId v = 0; v < n; ++v) {
        double row = 0.0;
        for (NodeId w = 0; w < n; ++w) row += static_cast<double>(walks(v, w));
        EXPECT_EQ(term[v], row);
      }
      term = b * term;
    }
  }
}

TEST(SocKatz, AlphaOutOfRangeCarriesBound) {
  const SocInstance inst = path_instance(1, {1});
  try {
    soc_katz(inst, {0.8});
    FAIL() << "expected rejection";
  } catch (const AlphaOutOfRange& e) {
    EXPECT_NEAR(e.bound().max_alpha, 1.0 / std::sqrt(2.0), 1e-8);
  }
  EXPECT_THROW(soc_katz(inst, {0.0}), AlphaOutOfRange);
  EXPECT_THROW(soc_katz(inst, {-0.1}), AlphaOutOfRange);
}

TEST(SocKatz, NonConvergenceKeepsPartialSums) {
  const SocInstance inst = path_instance(1, {1});
  try {
    soc_katz(inst, {0.7, 1e-10, 5});
    FAIL() << "expected non-convergence";
  } catch (const SeriesDiverged& e) {
    ASSERT_EQ(e.partial_sums().size(), 6u);
    EXPECT_GT(e.partial_sums()[0], 1.0);
  }
}

TEST(StandardKatz, EdgelessGraphIsAllOnes) {
  const Graph g = Graph::from_edges(4, {}, false);
  for (double c : standard_katz(g, 0.5).values) EXPECT_EQ(c, 1.0);
}

TEST(StandardKatz, SingleEdge) {
  const auto c = standard_katz(gen::path(2), 0.5);
  EXPECT_NEAR(c[0], 2.0, 1e-9);
  EXPECT_NEAR(c[1], 2.0, 1e-9);
  const auto d = testkit::dense_katz(gen::path(2), 0.5);
  EXPECT_NEAR(d[0], 2.0, 1e-12);
}

TEST(StandardKatz, RejectsAlphaAtBound) {
  EXPECT_THROW(standard_katz(gen::path(2), 1.0), AlphaOutOfRange);
}

TEST(SocKatz, FullRefillReducesToKatz) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SocInstance base = test::random_instance(seed, 8, 3, 0.4);
    const SocInstance inst = base.with_omega(RefillSet::all(base.node_count()));
    const AlphaBound bound = alpha_bound_from(spectral_radius(inst.graph()));
    const double alpha = std::isfinite(bound.max_alpha) ? 0.9 * bound.max_alpha : 0.5;
    const auto a = soc_katz(inst, {alpha});
    const auto b = standard_katz(inst.graph(), alpha);
    for (NodeId v = 0; v < inst.node_count(); ++v) EXPECT_NEAR(a[v], b[v], 1e-8 * b[v]);
  }
}

TEST(MaxAlpha, NilpotentSingleArc) {
  const SocInstance inst(Graph::from_edges(2, {{0, 1}}, true), RefillSet::none(2), 1);
  const AlphaBound b = max_alpha(inst);
  EXPECT_TRUE(b.nilpotent);
  EXPECT_TRUE(std::isinf(b.max_alpha));
  EXPECT_NO_THROW(soc_katz(inst, {5.0}));
}

TEST(MaxAlpha, FullRefillMatchesAdjacency) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SocInstance base = test::random_instance(seed, 8, 3, 0.4);
    const SocInstance inst = base.with_omega(RefillSet::all(base.node_count()));
    const AlphaBound a = max_alpha(inst);
    const AlphaBound g = alpha_bound_from(spectral_radius(inst.graph()));
    if (g.nilpotent) {
      EXPECT_TRUE(a.nilpotent);
    } else {
      EXPECT_NEAR(a.max_alpha, g.max_alpha, 1e-6 * g.max_alpha);
    }
  }
}

TEST(MaxAlpha, NeverBelowAdjacencyBound) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SocInstance inst = test::random_instance(seed, 8, 3, 0.4);
    // A nilpotent operator has a defective zero eigenvalue that dense solvers
    // only resolve to about eps^(1/k); its radius is exactly 0.
    if (is_acyclic(StateGraph(inst, false).adjacency())) continue;
    const double b = testkit::dense_spectral_radius(testkit::dense_bkappa(inst));
    const double a = testkit::dense_spectral_radius(testkit::dense_adjacency(inst.graph()));
    EXPECT_LE(b, a + 1e-8);
    if (a > 0.0) {
      EXPECT_GE(max_alpha(inst).max_alpha, 1.0 / a - 1e-6);
    }
  }
}

}  // namespace
}  // namespace soc

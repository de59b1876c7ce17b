#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "infodiff/diffusion.hpp"
#include "support/reference.hpp"

using namespace infodiff;

namespace {

Graph chain() { return build_graph(4, {{0, 1}, {1, 2}, {2, 3}}); }

Graph random_tree(std::mt19937_64& rng, std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> parent(0, v - 1);
    edges.push_back({parent(rng), v});
  }
  return build_graph(n, edges);
}

}  // namespace

TEST(UpdateFromSource, WorkedExampleValues) {
  EXPECT_DOUBLE_EQ(update_from_source(1.0, 0.5, 0), 0.5);
  EXPECT_DOUBLE_EQ(update_from_source(0.5, 0.5, 0), 0.25);
  EXPECT_DOUBLE_EQ(update_from_source(0.0, 0.7, 3), 0.0);
}

TEST(UpdateFromSource, OneEffectiveEdge) {
  // 0.5 + 1 * 0.5^1 * 0.5^(1+1-1) * C(1,1) * (1 - 0.5^1)
  EXPECT_NEAR(update_from_source(1.0, 0.5, 1), 0.625, 1e-15);
}

TEST(UpdateFromSource, MatchesExactTermByTermSum) {
  for (int N = 0; N <= 30; ++N) {
    for (int num = 0; num <= 20; ++num) {
      const reference::Rational P(num, 20);
      const reference::Rational p_cur(3, 7);
      const double expected = static_cast<double>(reference::update_exact(p_cur, P, N));
      EXPECT_NEAR(update_from_source(3.0 / 7.0, num / 20.0, static_cast<std::size_t>(N)), expected, 1e-14)
          << "N=" << N << " P=" << num / 20.0;
    }
  }
}

TEST(UpdateFromSource, BoundedBetweenDirectGainAndSourceBelief) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double p = unit(rng), P = unit(rng);
    const std::size_t N = rng() % 400;
    const double r = update_from_source(p, P, N);
    EXPECT_GE(r, p * P - 1e-15);
    EXPECT_LE(r, p + 1e-15);
    EXPECT_TRUE(std::isfinite(r));
  }
}

TEST(LabelNodes, ThresholdIsInclusive) {
  const std::vector<double> p{0.5, 0.49999, 0.0, 1.0};
  const auto labels = label_nodes(std::span<const double>(p), 0.5);
  EXPECT_EQ(labels[0], NodeLabel::Infected);
  EXPECT_EQ(labels[1], NodeLabel::Susceptible);
  EXPECT_EQ(labels[2], NodeLabel::Susceptible);
  for (auto l : label_nodes(std::span<const double>(p), 0.0)) EXPECT_EQ(l, NodeLabel::Infected);
}

TEST(RunSingleDiffusion, ChainTrace) {
  const auto s = run_single_diffusion(chain(), std::vector<NodeId>{0}, {0.5, 0.5});
  const std::vector<double> expected{1.0, 0.5, 0.25, 0.125};
  for (std::size_t v = 0; v < 4; ++v) EXPECT_NEAR(s.p_i[v], expected[v], 1e-15);
  EXPECT_EQ(s.iterations_run, 3u);
  const auto m = diffusion_metrics(s);
  EXPECT_EQ(m.iterations, 3u);
  EXPECT_NEAR(m.sum_p_i, 1.875, 1e-15);
  EXPECT_EQ(m.infected, 2u);
}

TEST(RunSingleDiffusion, TriangleUsesTheEffectiveEdge) {
  const Graph g = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto s = run_single_diffusion(g, std::vector<NodeId>{0}, {0.5, 0.5});
  EXPECT_NEAR(s.p_i[1], 0.625, 1e-15);
  EXPECT_NEAR(s.p_i[2], 0.625, 1e-15);
}

TEST(RunSingleDiffusion, AllNodesAreCreators) {
  std::mt19937_64 rng(2);
  const Graph g = reference::random_graph(rng, 12, 0.3);
  std::vector<NodeId> all(12);
  std::iota(all.begin(), all.end(), 0);
  const auto s = run_single_diffusion(g, all, {0.3, 0.5});
  for (double p : s.p_i) EXPECT_EQ(p, 1.0);
  const auto m = diffusion_metrics(s);
  EXPECT_EQ(m.iterations, 0u);
  EXPECT_EQ(m.sum_p_i, 12.0);
}

TEST(RunSingleDiffusion, EdgelessGraphReachesNothing) {
  const auto s = run_single_diffusion(build_graph(5, {}), std::vector<NodeId>{2}, {0.5, 0.5});
  const auto m = diffusion_metrics(s);
  EXPECT_EQ(m.iterations, 0u);
  EXPECT_EQ(m.sum_p_i, 1.0);
}

TEST(RunSingleDiffusion, EmptyCreatorSetIsAnError) {
  EXPECT_THROW(run_single_diffusion(chain(), std::vector<NodeId>{}, {0.5, 0.5}), InputError);
}

TEST(RunSingleDiffusion, RejectsOutOfRangeParameters) {
  EXPECT_THROW(run_single_diffusion(chain(), std::vector<NodeId>{0}, {1.5, 0.5}), InputError);
  EXPECT_THROW(run_single_diffusion(chain(), std::vector<NodeId>{0}, {0.5, -0.1}), InputError);
}

TEST(RunSingleDiffusion, StateInvariants) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 5 + rng() % 60;
    const Graph g = reference::random_graph(rng, n, 0.05 + 0.3 * (trial % 5) / 5.0);
    const std::vector<NodeId> ic{static_cast<NodeId>(rng() % n)};
    const auto s = run_single_diffusion(g, ic, {0.1 + 0.8 * (trial % 9) / 8.0, 0.5});
    for (NodeId v = 0; v < n; ++v) {
      EXPECT_GE(s.p_i[v], 0.0);
      EXPECT_LE(s.p_i[v], 1.0);
      EXPECT_NEAR(s.p_i[v] + s.p_i_bar[v], 1.0, 1e-12);
      if (!s.layers.reached(v)) { EXPECT_EQ(s.p_i[v], 0.0); }
    }
    EXPECT_EQ(s.p_i[ic[0]], 1.0);
  }
}

TEST(RunSingleDiffusion, ExactRationalOracle) {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 18;
    const Graph g = reference::random_graph(rng, n, 0.1 + 0.5 * static_cast<double>(rng() % 100) / 100.0);
    const int num = 1 + static_cast<int>(rng() % 19);
    std::vector<NodeId> ic{static_cast<NodeId>(rng() % n)};
    if (trial % 3 == 0) ic.push_back(static_cast<NodeId>(rng() % n));
    const auto s = run_single_diffusion(g, ic, {num / 20.0, 0.5});
    const auto exact = reference::single_diffusion_exact(g, ic, reference::Rational(num, 20));
    for (NodeId v = 0; v < n; ++v) EXPECT_NEAR(s.p_i[v], static_cast<double>(exact[v]), 1e-12) << "trial " << trial;
  }
}

TEST(RunSingleDiffusion, MonotoneInTransmissionProbability) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = reference::random_graph(rng, 60, 0.08);
    const std::vector<NodeId> ic{0, 1, 2};
    double previous = -1.0;
    for (int k = 1; k <= 9; ++k) {
      const double sum = diffusion_metrics(run_single_diffusion(g, ic, {k / 10.0, 0.5})).sum_p_i;
      EXPECT_GE(sum, previous - 1e-12);
      previous = sum;
    }
  }
}

TEST(RunSingleDiffusion, RelabelingDoesNotChangeBeliefs) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 40;
    const Graph g = reference::random_graph(rng, n, 0.12);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> relabeled;
    for (const Edge& e : g.edges()) relabeled.push_back({perm[e.u], perm[e.v]});
    const Graph h = build_graph(n, relabeled);
    const auto a = run_single_diffusion(g, std::vector<NodeId>{0, 5}, {0.45, 0.5});
    const auto b = run_single_diffusion(h, std::vector<NodeId>{perm[5], perm[0]}, {0.45, 0.5});
    for (NodeId v = 0; v < n; ++v) EXPECT_NEAR(a.p_i[v], b.p_i[perm[v]], 1e-12);
  }
}

TEST(RunSingleDiffusion, DegenerateTransmissionProbabilities) {
  std::mt19937_64 rng(10);
  const Graph g = reference::random_graph(rng, 30, 0.2);
  const auto zero = run_single_diffusion(g, std::vector<NodeId>{3}, {0.0, 0.5});
  for (NodeId v = 0; v < 30; ++v) EXPECT_EQ(zero.p_i[v], v == 3 ? 1.0 : 0.0);

  const Graph tree = random_tree(rng, 30);
  const auto one = run_single_diffusion(tree, std::vector<NodeId>{0}, {1.0, 0.5});
  for (double p : one.p_i) EXPECT_EQ(p, 1.0);
}

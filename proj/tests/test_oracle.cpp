#include <gtest/gtest.h>

#include "support.hpp"

using namespace acid;
using acid::fixtures::graph_from_paths;
using acid::fixtures::reference_min_delay;

namespace {

// Reference minimum coloring sum: every assignment of colors 0..n-1.
std::size_t reference_msc(const UndirectedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> colors(n, 0);
  std::size_t best = n * n;
  while (true) {
    bool proper = true;
    for (const auto& [u, v] : g.edges()) proper = proper && colors[u] != colors[v];
    if (proper) {
      std::size_t sum = 0;
      for (auto c : colors) sum += c;
      best = std::min(best, sum);
    }
    std::size_t k = 0;
    while (k < n && ++colors[k] == n) colors[k++] = 0;
    if (k == n) break;
  }
  return n == 0 ? 0 : best;
}

UndirectedGraph random_graph(Rng& rng, std::size_t max_vertices, std::size_t max_edges) {
  const std::size_t n = 1 + rng() % max_vertices;
  std::vector<Edge> all;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) all.emplace_back(u, v);
  }
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min<std::size_t>(all.size(), rng() % (max_edges + 1)));
  return UndirectedGraph(n, all);
}

}  // namespace

TEST(AcidOracle, NonCollidingPlanNeedsNothing) {
  const Plan plan = Plan::from_paths({{0, 1, 2}, {3, 4, 5}});
  const Graph g = graph_from_paths(plan.paths);
  const auto r = brute_force_acid(g, plan, all_indices(plan), TailSemantics::StayAtGoal);
  EXPECT_TRUE(r.solvable);
  EXPECT_EQ(r.min_delay, 0u);
  ASSERT_EQ(r.witness.size(), 2u);
  EXPECT_TRUE(r.witness[0].empty());
  EXPECT_TRUE(r.witness[1].empty());
}

TEST(AcidOracle, CrossingAtOneVertex) {
  const Plan plan = Plan::from_paths({{0, 1, 2}, {3, 1, 4}});
  const Graph g = graph_from_paths(plan.paths);
  const auto r = brute_force_acid(g, plan, all_indices(plan), TailSemantics::StayAtGoal);
  ASSERT_TRUE(r.solvable);
  EXPECT_EQ(r.min_delay, 1u);
  const Plan fixed = apply_delays(g, plan, all_indices(plan), r.witness);
  EXPECT_TRUE(find_conflicts(fixed, TailSemantics::StayAtGoal).empty());
}

TEST(AcidOracle, SwapIsUnsolvable) {
  const Plan plan = Plan::from_paths({{0, 1}, {1, 0}});
  const Graph g = graph_from_paths(plan.paths);
  const auto r = brute_force_acid(g, plan, all_indices(plan), TailSemantics::StayAtGoal);
  EXPECT_FALSE(r.solvable);
}

TEST(AcidOracle, CollidingStartsAreUnsolvable) {
  const Plan plan = Plan::from_paths({{0, 1}, {0, 2}});
  const Graph g = graph_from_paths(plan.paths);
  EXPECT_FALSE(brute_force_acid(g, plan, all_indices(plan), TailSemantics::StayAtGoal).solvable);
}

TEST(AcidOracle, RespectsPermittedIndices) {
  const auto f = fixtures::example_postponed_delay();
  const auto r = brute_force_acid(f.graph, f.plan, f.permitted, TailSemantics::StayAtGoal);
  ASSERT_TRUE(r.solvable);
  EXPECT_EQ(r.min_delay, f.optimum);
  EXPECT_TRUE(r.witness[0].empty());
  const auto all = brute_force_acid(f.graph, f.plan, all_indices(f.plan), TailSemantics::StayAtGoal);
  EXPECT_EQ(all.min_delay, 1u);
}

TEST(AcidOracle, LongerSingleDelay) {
  const auto f = fixtures::example_longer_single_delay();
  AcidOracleOptions options;
  options.max_slots = 64;
  const auto r = brute_force_acid(f.graph, f.plan, f.permitted, TailSemantics::StayAtGoal, options);
  ASSERT_TRUE(r.solvable);
  EXPECT_EQ(r.min_delay, f.optimum);
  EXPECT_EQ(r.witness[1].total(), 2u);
}

TEST(AcidOracle, GuardsTrip) {
  const auto f = fixtures::example_longer_single_delay();
  AcidOracleOptions options;
  options.max_slots = 3;
  try {
    brute_force_acid(f.graph, f.plan, f.permitted, TailSemantics::StayAtGoal, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InstanceTooLarge);
  }
}

TEST(AcidOracle, BudgetCapLeavesItUnsolved) {
  const auto f = fixtures::example_longer_single_delay();
  AcidOracleOptions options;
  options.max_slots = 64;
  options.max_budget = 1;
  EXPECT_FALSE(brute_force_acid(f.graph, f.plan, f.permitted, TailSemantics::StayAtGoal, options).solvable);
}

TEST(AcidOracleProperty, MatchesStarsAndBars) {
  Rng rng(29);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 60; ++trial) {
    auto seed = fixtures::random_seed_plan(rng, 4, 2, 3, TailSemantics::StayAtGoal);
    if (!seed) continue;
    const auto& [graph, plan] = *seed;
    auto delayed = inject_collision_inducing_delay(graph, plan, TailSemantics::StayAtGoal, rng);
    if (!delayed) continue;
    DelayPermissions permitted = all_indices(delayed->plan);
    if (trial % 2) {
      for (auto& set : permitted) {
        for (auto it = set.begin(); it != set.end();) it = rng() % 3 == 0 ? set.erase(it) : std::next(it);
      }
    }
    for (auto sem : {TailSemantics::StayAtGoal, TailSemantics::DisappearAtGoal}) {
      AcidOracleOptions options;
      options.max_budget = 3;
      options.max_slots = 256;
      const auto r = brute_force_acid(graph, delayed->plan, permitted, sem, options);
      const auto expected = reference_min_delay(graph, delayed->plan, permitted, sem, 3);
      ASSERT_EQ(r.solvable, expected.has_value());
      if (!expected) continue;
      EXPECT_EQ(r.min_delay, *expected);
      std::size_t total = 0;
      for (const auto& d : r.witness) total += d.total();
      EXPECT_EQ(total, *expected);
      const Plan fixed = apply_delays(graph, delayed->plan, permitted, r.witness);
      EXPECT_TRUE(find_conflicts(fixed, sem).empty());
    }
    ++compared;
  }
  EXPECT_GE(compared, 30);
}

TEST(Msc, FigureGraph) {
  const auto r = brute_force_msc(fixtures::figure_graph());
  EXPECT_EQ(r.min_sum, 3u);
  EXPECT_TRUE(is_proper_coloring(fixtures::figure_graph(), r.coloring));
  EXPECT_TRUE(is_proper_coloring(fixtures::figure_graph(), {0, 1, 2, 0}));
  EXPECT_FALSE(is_proper_coloring(fixtures::figure_graph(), {0, 1, 0, 0}));
}

TEST(Msc, EdgelessAndSingleEdge) {
  EXPECT_EQ(brute_force_msc(UndirectedGraph(5, {})).min_sum, 0u);
  EXPECT_EQ(brute_force_msc(UndirectedGraph(2, {{0, 1}})).min_sum, 1u);
}

TEST(Msc, GraphValidation) {
  EXPECT_THROW(UndirectedGraph(2, {{0, 0}}), Error);
  EXPECT_THROW(UndirectedGraph(2, {{0, 1}, {1, 0}}), Error);
  EXPECT_THROW(UndirectedGraph(2, {{0, 2}}), Error);
  EXPECT_THROW(brute_force_msc(UndirectedGraph(11, {})), Error);
}

TEST(MscProperty, MatchesExhaustiveAssignment) {
  Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const auto g = random_graph(rng, 6, 9);
    const auto r = brute_force_msc(g);
    EXPECT_EQ(r.min_sum, reference_msc(g));
    EXPECT_TRUE(is_proper_coloring(g, r.coloring));
    std::size_t sum = 0;
    for (auto c : r.coloring) sum += c;
    EXPECT_EQ(sum, r.min_sum);
  }
}

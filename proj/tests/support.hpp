#pragma once

// Shared fixtures, random generators and reference implementations for tests.
// The reference oracles are deliberately naive and share no code with the
// library search routines.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "acid/harness.hpp"
#include "acid/io.hpp"
#include "acid/mapf.hpp"
#include "acid/oracle.hpp"
#include "acid/reduction.hpp"
#include "acid/solver.hpp"

namespace acid::fixtures {

inline Graph grid_graph(std::size_t rows, std::size_t cols) {
  GridMap map{rows, cols, std::vector<bool>(rows * cols, true)};
  return grid_to_graph(map, DelayPolicy::AllVertices).graph;
}

/// Graph containing exactly the path edges plus a self-loop on every vertex.
inline Graph graph_from_paths(const std::vector<Path>& paths) {
  std::set<Edge> edges;
  VertexId top = 0;
  for (const auto& path : paths) {
    for (std::size_t k = 0; k < path.size(); ++k) {
      top = std::max(top, path[k]);
      edges.emplace(path[k], path[k]);
      if (k + 1 < path.size() && path[k] != path[k + 1]) edges.emplace(path[k], path[k + 1]);
    }
  }
  const std::vector<Edge> list(edges.begin(), edges.end());
  return Graph(top + 1, list);
}

/// Symbolic vertex names to dense ids, in order of first use.
class Names {
 public:
  VertexId operator()(const std::string& name) {
    auto [it, inserted] = ids_.emplace(name, static_cast<VertexId>(ids_.size()));
    return it->second;
  }
  Path path(std::initializer_list<const char*> names) {
    Path p;
    for (const char* n : names) p.push_back((*this)(n));
    return p;
  }

 private:
  std::map<std::string, VertexId> ids_;
};

struct Fixture {
  Graph graph;
  Plan plan;  // the delayed, colliding plan
  DelayPermissions permitted;
  std::size_t optimum = 0;
};

/// Red is already one step late and may not wait again. Green can wait right
/// before X (cost 1) or earlier, which also forces Blue to wait at Z.
inline Fixture example_postponed_delay() {
  Names v;
  std::vector<Path> paths{
      v.path({"r0", "r0", "r1", "r2", "X", "r4"}),
      v.path({"g0", "g1", "Z", "g3", "X", "g5"}),
      v.path({"b0", "b1", "b2", "Z", "b4"}),
  };
  Fixture f;
  f.graph = graph_from_paths(paths);
  f.plan = Plan::from_paths(paths);
  f.permitted = all_indices(f.plan);
  f.permitted[0].clear();
  f.optimum = 1;
  return f;
}

/// A one-step wait of Green before X pushes it into Blue at Y, and Blue into
/// Orange at W; waiting two steps before X avoids the cascade.
inline Fixture example_longer_single_delay() {
  Names v;
  std::vector<Path> paths{
      v.path({"r0", "r0", "r1", "r2", "r3", "X", "r5", "r6"}),
      v.path({"g0", "g1", "g2", "g3", "g4", "X", "Y", "g7", "g8"}),
      v.path({"b0", "b1", "b2", "b3", "b4", "b5", "b6", "Y", "W", "b9", "b10"}),
      v.path({"o0", "o1", "o2", "o3", "o4", "o5", "o6", "o7", "o8", "W", "o10", "o11"}),
  };
  Fixture f;
  f.graph = graph_from_paths(paths);
  f.plan = Plan::from_paths(paths);
  f.permitted = all_indices(f.plan);
  f.permitted[0].clear();
  f.optimum = 2;
  return f;
}

/// Edges e1={x,y}, e2={y,z}, e3={x,z}, e4={z,w} over x=0, y=1, z=2, w=3.
inline UndirectedGraph figure_graph() {
  return UndirectedGraph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
}

/// Every way to spread `budget` repetitions over `slots` (stars and bars),
/// stopping early when `visit` returns true.
inline bool for_each_distribution(std::size_t slots, std::size_t budget,
                                  const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> counts(slots, 0);
  std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t slot, std::size_t left) {
    if (slot + 1 >= slots) {
      if (slots == 0) return left == 0 && visit(counts);
      counts[slot] = left;
      const bool stop = visit(counts);
      counts[slot] = 0;
      return stop;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[slot] = c;
      if (go(slot + 1, left - c)) return true;
    }
    counts[slot] = 0;
    return false;
  };
  return go(0, budget);
}

/// Reference ACID minimum: stars and bars over every permitted delay-vertex
/// index, budgets 0..max_budget. nullopt when nothing up to max_budget works.
inline std::optional<std::size_t> reference_min_delay(const Graph& graph, const Plan& plan,
                                                      const DelayPermissions& permitted,
                                                      TailSemantics semantics,
                                                      std::size_t max_budget) {
  std::vector<std::pair<AgentId, std::size_t>> slots;
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    for (std::size_t j : permitted[i]) {
      if (j >= 1 && j <= plan.paths[i].size() && graph.is_delay_vertex(plan.paths[i][j - 1])) {
        slots.emplace_back(i, j);
      }
    }
  }
  for (std::size_t d = 0; d <= max_budget; ++d) {
    const bool found = for_each_distribution(slots.size(), d, [&](const std::vector<std::size_t>& c) {
      std::vector<DelayAssignment> delays(plan.agent_count());
      for (std::size_t s = 0; s < slots.size(); ++s) delays[slots[s].first].add(slots[s].second, c[s]);
      const Plan p = apply_delays(graph, plan, permitted, delays);
      return find_conflicts(p, semantics, true).empty();
    });
    if (found) return d;
  }
  return std::nullopt;
}

/// Reference low level: breadth-first search over (node, t) up to the horizon,
/// returning the least arrival time at a goal node where the agent may stay.
inline std::optional<std::size_t> reference_path_length(const AgentEdgeGraph& instance, AgentId agent,
                                                        const std::vector<Constraint>& constraints,
                                                        TailSemantics semantics, std::size_t horizon) {
  auto vertex_ok = [&](VertexId v, std::size_t t) {
    return std::none_of(constraints.begin(), constraints.end(), [&](const Constraint& c) {
      return c.kind == ConstraintKind::VertexAt && c.from == v && c.timestep == t;
    });
  };
  auto edge_ok = [&](VertexId a, VertexId b, std::size_t t) {
    return std::none_of(constraints.begin(), constraints.end(), [&](const Constraint& c) {
      return c.kind == ConstraintKind::EdgeAt && c.from == a && c.to == b && c.timestep == t;
    });
  };
  auto can_finish = [&](VertexId v, std::size_t t) {
    if (semantics == TailSemantics::DisappearAtGoal) return true;
    for (const auto& c : constraints) {
      if (c.kind == ConstraintKind::VertexAt && c.from == v && c.timestep >= t) return false;
    }
    return true;
  };
  std::set<std::pair<std::uint64_t, std::size_t>> seen;
  std::deque<std::pair<Node, std::size_t>> queue;
  const Node start = instance.start(agent);
  if (!vertex_ok(start.vertex, 0)) return std::nullopt;
  queue.push_back({start, 0});
  seen.insert({start.key(), 0});
  std::vector<Node> next;
  while (!queue.empty()) {
    auto [node, t] = queue.front();
    queue.pop_front();
    if (instance.is_goal(agent, node) && can_finish(node.vertex, t)) return t;
    if (t == horizon) continue;
    next.clear();
    instance.successors(agent, node, next);
    for (const Node& s : next) {
      if (!vertex_ok(s.vertex, t + 1) || !edge_ok(node.vertex, s.vertex, t)) continue;
      if (seen.insert({s.key(), t + 1}).second) queue.push_back({s, t + 1});
    }
  }
  return std::nullopt;
}

/// A random collision-free plan on a random small grid, planned from random
/// distinct endpoints. nullopt when planning fails.
inline std::optional<std::pair<Graph, Plan>> random_seed_plan(Rng& rng, std::size_t max_side,
                                                              std::size_t min_agents,
                                                              std::size_t max_agents,
                                                              TailSemantics semantics) {
  std::uniform_int_distribution<std::size_t> side(2, max_side);
  const std::size_t rows = side(rng), cols = side(rng);
  const std::size_t cells = rows * cols;
  const std::size_t n = std::min(cells / 2,
                                 std::uniform_int_distribution<std::size_t>(min_agents, max_agents)(rng));
  if (n < min_agents) return std::nullopt;
  Graph graph = grid_graph(rows, cols);
  std::vector<VertexId> order(cells);
  for (VertexId v = 0; v < cells; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<VertexId> starts(order.begin(), order.begin() + n);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<VertexId> goals(order.begin(), order.begin() + n);
  auto plan = plan_seed(graph, starts, goals, semantics, 5.0, rng);
  if (!plan) return std::nullopt;
  return std::make_pair(std::move(graph), std::move(*plan));
}

inline SolveOptions solve_options(std::size_t horizon,
                                  TailSemantics semantics = TailSemantics::StayAtGoal) {
  SolveOptions options;
  options.semantics = semantics;
  options.time_limit_s = 60;
  options.horizon = horizon;
  return options;
}

}  // namespace acid::fixtures

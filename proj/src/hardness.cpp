#include "acid/hardness.hpp"

#include <set>
#include <string>

namespace acid {

ReductionOutput msc_to_acid(const UndirectedGraph& graph, std::size_t threshold,
                            const ReductionOptions& options) {
  if (threshold > 50) {
    throw Error(ErrorCode::ThresholdTooLarge,
                "threshold " + std::to_string(threshold) + " exceeds 50");
  }
  const std::size_t n = graph.vertex_count();
  const std::size_t m = graph.edges().size();
  if (n == 0) throw Error(ErrorCode::InvalidGraph, "graph has no vertices");

  ReductionOutput out;
  out.block_count = threshold + 1;
  out.budget = threshold;
  out.shared_vertex_map.resize(m);
  for (AgentId i = 0; i < n; ++i) out.agent_map.push_back(i);

  std::vector<Path> paths(n);
  VertexId next_id = 0;
  for (AgentId i = 0; i < n; ++i) paths[i].push_back(next_id++);
  for (std::size_t block = 0; block < out.block_count; ++block) {
    for (std::size_t r = 0; r < m; ++r) {
      const auto [a, b] = graph.edges()[r];
      const VertexId shared = next_id++;
      out.shared_vertex_map[r].emplace_back(block, shared);
      for (AgentId i = 0; i < n; ++i) {
        paths[i].push_back(i == a || i == b ? shared : next_id++);
      }
    }
  }

  std::set<Edge> edges;
  for (VertexId v = 0; v < next_id; ++v) edges.emplace(v, v);
  for (const Path& path : paths) {
    for (std::size_t k = 0; k + 1 < path.size(); ++k) edges.emplace(path[k], path[k + 1]);
  }
  const std::vector<Edge> edge_list(edges.begin(), edges.end());
  out.graph = Graph(next_id, edge_list);
  out.plan = Plan::from_paths(std::move(paths));
  out.permitted = options.start_only ? DelayPermissions(n, IndexSet{1})
                                     : all_indices(out.plan);
  return out;
}

std::vector<DelayAssignment> coloring_to_delays(const ReductionOutput& output,
                                                const std::vector<std::size_t>& coloring) {
  const std::size_t n = output.plan.agent_count();
  if (coloring.size() != n) {
    throw Error(ErrorCode::InvariantViolation, "coloring size differs from the agent count");
  }
  std::vector<DelayAssignment> delays(n);
  for (AgentId i = 0; i < n; ++i) delays[output.agent_map[i]].add(1, coloring[i]);
  const Plan delayed = apply_delays(output.graph, output.plan, output.permitted, delays);
  const auto conflicts = find_conflicts(delayed, output.semantics, true);
  if (!conflicts.empty()) {
    const auto& c = conflicts.front();
    throw Error(ErrorCode::ColoringImproper,
                "agents " + std::to_string(c.first) + " and " + std::to_string(c.second) +
                    " collide at timestep " + std::to_string(c.timestep));
  }
  return delays;
}

std::size_t greedy_coloring_sum(const UndirectedGraph& graph) {
  std::vector<std::size_t> color(graph.vertex_count(), 0);
  std::size_t sum = 0;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    std::set<std::size_t> used;
    for (auto [a, b] : graph.edges()) {
      if (b == v && a < v) used.insert(color[a]);
      if (a == v && b < v) used.insert(color[b]);
    }
    while (used.contains(color[v])) ++color[v];
    sum += color[v];
  }
  return sum;
}

}  // namespace acid

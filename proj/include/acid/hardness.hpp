#pragma once

#include <utility>
#include <vector>

#include "acid/mapf.hpp"
#include "acid/oracle.hpp"

namespace acid {

struct ReductionOutput {
  Graph graph;  // H, with a self-loop on every vertex
  Plan plan;
  DelayPermissions permitted;
  /// Agents joined by the last edge end on the same vertex, so the instance is
  /// only meaningful when finished agents leave the graph.
  TailSemantics semantics = TailSemantics::DisappearAtGoal;
  std::size_t block_count = 0;
  std::size_t budget = 0;
  /// Vertex of G -> agent id.
  std::vector<AgentId> agent_map;
  /// Edge e_r of G -> (block, H-vertex) for every block.
  std::vector<std::vector<std::pair<std::size_t, VertexId>>> shared_vertex_map;
};

struct ReductionOptions {
  /// Permit repetitions only at path index 1 (the start vertex).
  bool start_only = false;
};

/// Builds the ACID instance of threshold + 1 identical blocks for a sum
/// coloring instance: agent i walks its start vertex and then m vertices per
/// block, the r-th of which it shares with agent j when e_r = {i, j}.
/// H-vertex ids: the n start vertices first, then block by block and edge index
/// by edge index, the shared vertex followed by the other agents' private ones.
/// Throws ThresholdTooLarge when threshold > 50.
ReductionOutput msc_to_acid(const UndirectedGraph& graph, std::size_t threshold,
                            const ReductionOptions& options = {});

/// Agent i waits coloring[i] steps at its start vertex. Throws ColoringImproper
/// when the delayed plan still collides.
std::vector<DelayAssignment> coloring_to_delays(const ReductionOutput& output,
                                                const std::vector<std::size_t>& coloring);

/// Sum of the first-fit coloring in vertex order; an upper bound on the
/// minimum coloring sum.
std::size_t greedy_coloring_sum(const UndirectedGraph& graph);

}  // namespace acid

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "acid/instance.hpp"
#include "acid/mapf.hpp"

namespace acid {

enum class GraphMode { Original, Constrained, ImprovedConstrained };

std::string_view to_string(GraphMode mode);
std::optional<GraphMode> parse_graph_mode(std::string_view text);

/// I_i: the 1-based indices of agent i's path whose vertex also lies on some
/// other agent's path.
struct IntersectionProfile {
  std::vector<IndexSet> indices;
};

IntersectionProfile intersecting_indices(const Plan& plan);

/// Agent-Edge instance whose agent i may only follow its own path: node
/// (v_j, j) leads to (v_{j+1}, j+1) and, where a wait is allowed, back to
/// itself. Nodes are generated on demand from the paths; the product
/// V x {1..l(P)} is never materialized.
class ConstrainedGraph final : public AgentEdgeGraph {
 public:
  ConstrainedGraph(GraphMode mode, std::vector<Path> paths,
                   std::vector<std::vector<bool>> self_loops);

  std::size_t agent_count() const override { return paths_.size(); }
  Node start(AgentId agent) const override { return {paths_.at(agent).front(), 1}; }
  Node goal(AgentId agent) const;
  bool is_goal(AgentId agent, Node node) const override { return node == goal(agent); }
  void successors(AgentId agent, Node node, std::vector<Node>& out) const override;

  GraphMode mode() const { return mode_; }
  const Path& path(AgentId agent) const { return paths_.at(agent); }
  const std::vector<Path>& paths() const { return paths_; }
  /// Whether agent's node at 1-based path index carries a self-loop.
  bool has_self_loop(AgentId agent, std::size_t index) const;
  std::size_t self_loop_count(AgentId agent) const;
  std::size_t plan_length() const;
  /// E_i written out explicitly (successor edges first, then self-loops).
  std::vector<std::pair<Node, Node>> edges(AgentId agent) const;

 private:
  GraphMode mode_;
  std::vector<Path> paths_;
  std::vector<std::vector<bool>> loops_;  // loops_[i][j - 1] for index j
};

/// Self-loops at index j < |pi_i| when j is permitted and v_j is a delay vertex.
ConstrainedGraph build_cg(const Graph& graph, const Plan& plan,
                          const DelayPermissions& permitted);

/// For consecutive intersecting indices s < t keeps only the CG self-loop at
/// the last eligible index in [s, t - 1], and none from the final
/// intersection onward.
ConstrainedGraph build_icg(const Graph& graph, const Plan& plan,
                           const DelayPermissions& permitted);

struct LiftedSolution {
  Plan plan;
  std::vector<DelayAssignment> delays;
  std::size_t added_soc = 0;
};

/// Projects constrained-graph paths back to the original graph and reads off
/// the per-index repetitions. Throws NotADelayOfOriginal for paths that are
/// not walks of the instance.
LiftedSolution lift_solution(const ConstrainedGraph& instance,
                             std::span<const NodePath> solution);

}  // namespace acid

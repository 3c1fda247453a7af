#include "acid/reduction.hpp"

#include <string>
#include <unordered_map>

namespace acid {

std::string_view to_string(GraphMode mode) {
  switch (mode) {
    case GraphMode::Original: return "og";
    case GraphMode::Constrained: return "cg";
    case GraphMode::ImprovedConstrained: return "icg";
  }
  return "?";
}

std::optional<GraphMode> parse_graph_mode(std::string_view text) {
  if (text == "og") return GraphMode::Original;
  if (text == "cg") return GraphMode::Constrained;
  if (text == "icg") return GraphMode::ImprovedConstrained;
  return std::nullopt;
}

IntersectionProfile intersecting_indices(const Plan& plan) {
  constexpr AgentId kShared = static_cast<AgentId>(-1);
  // vertex -> the single agent visiting it, or kShared
  std::unordered_map<VertexId, AgentId> owner;
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    for (VertexId v : plan.paths[i]) {
      auto [it, inserted] = owner.emplace(v, i);
      if (!inserted && it->second != i) it->second = kShared;
    }
  }
  IntersectionProfile profile;
  profile.indices.resize(plan.agent_count());
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    const Path& path = plan.paths[i];
    for (std::size_t j = 1; j <= path.size(); ++j) {
      if (owner.at(path[j - 1]) == kShared) {
        profile.indices[i].insert(profile.indices[i].end(), j);
      }
    }
  }
  return profile;
}

ConstrainedGraph::ConstrainedGraph(GraphMode mode, std::vector<Path> paths,
                                   std::vector<std::vector<bool>> self_loops)
    : mode_(mode), paths_(std::move(paths)), loops_(std::move(self_loops)) {
  if (loops_.size() != paths_.size()) {
    throw Error(ErrorCode::InvariantViolation, "self-loop table size mismatch");
  }
  for (AgentId i = 0; i < paths_.size(); ++i) {
    if (paths_[i].empty() || loops_[i].size() != paths_[i].size()) {
      throw Error(ErrorCode::InvariantViolation,
                  "agent " + std::to_string(i) + ": malformed constrained path");
    }
    if (loops_[i].back()) {
      throw Error(ErrorCode::InvariantViolation,
                  "agent " + std::to_string(i) + ": self-loop on the goal node");
    }
  }
}

Node ConstrainedGraph::goal(AgentId agent) const {
  const Path& path = paths_.at(agent);
  return {path.back(), static_cast<std::uint32_t>(path.size())};
}

void ConstrainedGraph::successors(AgentId agent, Node node,
                                  std::vector<Node>& out) const {
  const Path& path = paths_.at(agent);
  const std::size_t j = node.layer;
  if (j < 1 || j > path.size() || path[j - 1] != node.vertex) return;
  if (j < path.size()) {
    out.push_back({path[j], static_cast<std::uint32_t>(j + 1)});
  }
  if (loops_[agent][j - 1]) out.push_back(node);
}

bool ConstrainedGraph::has_self_loop(AgentId agent, std::size_t index) const {
  const auto& loops = loops_.at(agent);
  return index >= 1 && index <= loops.size() && loops[index - 1];
}

std::size_t ConstrainedGraph::self_loop_count(AgentId agent) const {
  std::size_t count = 0;
  for (bool loop : loops_.at(agent)) count += loop ? 1 : 0;
  return count;
}

std::size_t ConstrainedGraph::plan_length() const {
  std::size_t length = 0;
  for (const auto& path : paths_) length = std::max(length, path_cost(path));
  return length;
}

std::vector<std::pair<Node, Node>> ConstrainedGraph::edges(AgentId agent) const {
  const Path& path = paths_.at(agent);
  std::vector<std::pair<Node, Node>> result;
  for (std::size_t j = 1; j < path.size(); ++j) {
    result.push_back({{path[j - 1], static_cast<std::uint32_t>(j)},
                      {path[j], static_cast<std::uint32_t>(j + 1)}});
  }
  for (std::size_t j = 1; j <= path.size(); ++j) {
    if (loops_[agent][j - 1]) {
      const Node node{path[j - 1], static_cast<std::uint32_t>(j)};
      result.push_back({node, node});
    }
  }
  return result;
}

namespace {

std::vector<std::vector<bool>> cg_loops(const Graph& graph, const Plan& plan,
                                        const DelayPermissions& permitted) {
  check_plan(plan, &graph);
  if (permitted.size() != plan.agent_count()) {
    throw Error(ErrorCode::InvariantViolation,
                "permitted index sets do not match the number of agents");
  }
  std::vector<std::vector<bool>> loops(plan.agent_count());
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    const Path& path = plan.paths[i];
    loops[i].assign(path.size(), false);
    for (std::size_t j = 1; j < path.size(); ++j) {
      loops[i][j - 1] = permitted[i].contains(j) && graph.is_delay_vertex(path[j - 1]);
    }
  }
  return loops;
}

}  // namespace

ConstrainedGraph build_cg(const Graph& graph, const Plan& plan,
                          const DelayPermissions& permitted) {
  return ConstrainedGraph(GraphMode::Constrained, plan.paths,
                          cg_loops(graph, plan, permitted));
}

ConstrainedGraph build_icg(const Graph& graph, const Plan& plan,
                           const DelayPermissions& permitted) {
  const auto cg = cg_loops(graph, plan, permitted);
  const auto profile = intersecting_indices(plan);
  std::vector<std::vector<bool>> loops(plan.agent_count());
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    loops[i].assign(cg[i].size(), false);
    // A wait at t itself does not postpone the arrival at t, so the segment
    // ending at t is [s, t - 1], with s = 1 before the first intersection.
    std::size_t segment_begin = 1;
    for (std::size_t t : profile.indices[i]) {
      for (std::size_t j = t - 1; j >= segment_begin; --j) {
        if (cg[i][j - 1]) {
          loops[i][j - 1] = true;
          break;
        }
      }
      segment_begin = t;
    }
  }
  return ConstrainedGraph(GraphMode::ImprovedConstrained, plan.paths,
                          std::move(loops));
}

LiftedSolution lift_solution(const ConstrainedGraph& instance,
                             std::span<const NodePath> solution) {
  if (solution.size() != instance.agent_count()) {
    throw Error(ErrorCode::NotADelayOfOriginal,
                "solution has a different number of agents than the instance");
  }
  LiftedSolution lifted;
  std::vector<Path> paths;
  for (AgentId i = 0; i < solution.size(); ++i) {
    const NodePath& walk = solution[i];
    const std::string who = "agent " + std::to_string(i);
    if (walk.empty() || walk.front() != instance.start(i) ||
        walk.back() != instance.goal(i)) {
      throw Error(ErrorCode::NotADelayOfOriginal,
                  who + ": walk does not run from start to goal");
    }
    DelayAssignment delays;
    const Path& original = instance.path(i);
    for (std::size_t step = 0; step + 1 < walk.size(); ++step) {
      const Node from = walk[step];
      const Node to = walk[step + 1];
      if (from == to && instance.has_self_loop(i, from.layer)) {
        delays.add(from.layer);
      } else if (to.layer == from.layer + 1 && to.layer <= original.size() &&
                 original[to.layer - 1] == to.vertex) {
        continue;
      } else {
        throw Error(ErrorCode::NotADelayOfOriginal,
                    who + ": illegal move at timestep " + std::to_string(step));
      }
    }
    lifted.added_soc += delays.total();
    lifted.delays.push_back(std::move(delays));
    paths.push_back(project(walk));
  }
  lifted.plan = Plan::from_paths(std::move(paths));
  return lifted;
}

}  // namespace acid

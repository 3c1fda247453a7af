#include "acid/instance.hpp"

namespace acid {

Path project(const NodePath& path) {
  Path result;
  result.reserve(path.size());
  for (const Node& node : path) result.push_back(node.vertex);
  return result;
}

OriginalGraphInstance::OriginalGraphInstance(const Graph& graph,
                                             std::vector<VertexId> starts,
                                             std::vector<VertexId> goals,
                                             std::vector<std::set<std::size_t>> holds)
    : graph_(graph),
      starts_(std::move(starts)),
      goals_(std::move(goals)),
      holds_(std::move(holds)) {
  if (starts_.size() != goals_.size()) {
    throw Error(ErrorCode::InvariantViolation, "starts and goals differ in size");
  }
  holds_.resize(starts_.size());
  for (AgentId i = 0; i < starts_.size(); ++i) {
    if (starts_[i] >= graph_.vertex_count() || goals_[i] >= graph_.vertex_count()) {
      throw Error(ErrorCode::InvariantViolation,
                  "agent " + std::to_string(i) + " start or goal is not a vertex");
    }
  }
}

std::uint32_t OriginalGraphInstance::next_layer(AgentId agent, std::size_t time) const {
  const auto& holds = holds_[agent];
  if (holds.empty() || time > *holds.rbegin()) return 0;
  return static_cast<std::uint32_t>(time + 1);
}

Node OriginalGraphInstance::start(AgentId agent) const {
  return {starts_.at(agent), next_layer(agent, 0)};
}

bool OriginalGraphInstance::is_goal(AgentId agent, Node node) const {
  return node.vertex == goals_.at(agent);
}

void OriginalGraphInstance::successors(AgentId agent, Node node,
                                       std::vector<Node>& out) const {
  if (node.layer == 0) {
    for (VertexId v : graph_.successors(node.vertex)) out.push_back({v, 0});
    return;
  }
  const std::size_t time = node.layer - 1;
  const std::uint32_t layer = next_layer(agent, time + 1);
  if (holds_[agent].contains(time)) {
    out.push_back({node.vertex, layer});
    return;
  }
  for (VertexId v : graph_.successors(node.vertex)) out.push_back({v, layer});
}

}  // namespace acid

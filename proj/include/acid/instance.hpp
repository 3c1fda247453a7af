#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "acid/mapf.hpp"

namespace acid {

/// A vertex of an Agent-Edge MAPF instance. `vertex` is the location in the
/// underlying graph (what collisions are checked on); `layer` distinguishes
/// copies of that location, e.g. the path step in a constrained graph.
struct Node {
  VertexId vertex = 0;
  std::uint32_t layer = 0;

  friend auto operator<=>(const Node&, const Node&) = default;

  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(layer) << 32) | vertex;
  }
};

using NodePath = std::vector<Node>;

Path project(const NodePath& path);

/// Agent-Edge MAPF instance as seen by a solver: the only graph query is
/// "which nodes can agent i move to from node v". Solvers written against this
/// interface run unchanged on the original graph and on constrained graphs.
class AgentEdgeGraph {
 public:
  virtual ~AgentEdgeGraph() = default;

  virtual std::size_t agent_count() const = 0;
  virtual Node start(AgentId agent) const = 0;
  virtual bool is_goal(AgentId agent, Node node) const = 0;
  /// Appends the successors of `node` under the agent's edge set to `out`.
  virtual void successors(AgentId agent, Node node, std::vector<Node>& out) const = 0;
};

/// The original graph, shared by all agents. Agents may be pinned in place at
/// given relative timesteps (an injected delay the replanner cannot avoid);
/// while such holds are pending, `layer` is 1 + the elapsed time, afterwards 0.
class OriginalGraphInstance final : public AgentEdgeGraph {
 public:
  OriginalGraphInstance(const Graph& graph, std::vector<VertexId> starts,
                        std::vector<VertexId> goals,
                        std::vector<std::set<std::size_t>> holds = {});

  std::size_t agent_count() const override { return starts_.size(); }
  Node start(AgentId agent) const override;
  bool is_goal(AgentId agent, Node node) const override;
  void successors(AgentId agent, Node node, std::vector<Node>& out) const override;

  const Graph& graph() const { return graph_; }
  VertexId goal_vertex(AgentId agent) const { return goals_.at(agent); }

 private:
  std::uint32_t next_layer(AgentId agent, std::size_t time) const;

  const Graph& graph_;
  std::vector<VertexId> starts_;
  std::vector<VertexId> goals_;
  std::vector<std::set<std::size_t>> holds_;
};

}  // namespace acid

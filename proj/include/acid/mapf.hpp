#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "acid/error.hpp"

namespace acid {

using VertexId = std::uint32_t;
using AgentId = std::size_t;

// A path is the sequence of vertices an agent occupies at timesteps 0, 1, ...
using Path = std::vector<VertexId>;

// 1-based path indices, as used by delay assignments and permitted sets.
using IndexSet = std::set<std::size_t>;
using DelayPermissions = std::vector<IndexSet>;

using Edge = std::pair<VertexId, VertexId>;

/// Directed graph over dense vertex ids. A vertex is delay-capable exactly when
/// it carries a self-loop.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidGraph on out-of-range endpoints or duplicate edges.
  Graph(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return out_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  /// Out-neighbours in increasing id order (self-loop included when present).
  std::span<const VertexId> successors(VertexId v) const { return out_.at(v); }
  bool has_edge(VertexId from, VertexId to) const;
  bool is_delay_vertex(VertexId v) const { return has_edge(v, v); }
  std::vector<VertexId> delay_vertices() const;
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<VertexId>> out_;
  std::size_t edge_count_ = 0;
};

bool validate_path(const Graph& graph, const Path& path);

struct Plan {
  std::vector<Path> paths;
  std::vector<VertexId> sources;
  std::vector<VertexId> goals;

  /// Builds a plan whose sources and goals are the path endpoints.
  static Plan from_paths(std::vector<Path> paths);

  std::size_t agent_count() const { return paths.size(); }

  friend bool operator==(const Plan&, const Plan&) = default;
};

/// Checks n >= 1, endpoint agreement and (when a graph is given) path validity.
/// Throws InvariantViolation naming the broken invariant.
void check_plan(const Plan& plan, const Graph* graph = nullptr);

enum class TailSemantics { StayAtGoal, DisappearAtGoal };

std::string_view to_string(TailSemantics semantics);
std::optional<TailSemantics> parse_tail_semantics(std::string_view text);

enum class ConflictKind { Vertex, Edge };

// For an edge conflict, `from -> to` is the move of `first` between timestep
// and timestep + 1; `second` makes the reverse move. For a vertex conflict,
// `from == to` is the shared vertex.
struct Conflict {
  ConflictKind kind = ConflictKind::Vertex;
  AgentId first = 0;
  AgentId second = 0;
  std::size_t timestep = 0;
  VertexId from = 0;
  VertexId to = 0;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

/// Vertex the agent occupies at `t` under the given tail semantics, or nullopt
/// when it has disappeared.
std::optional<VertexId> position_at(const Path& path, std::size_t t,
                                    TailSemantics semantics);

/// Collision detection. Results are ordered by (timestep, agent pair, Vertex
/// before Edge).
std::vector<Conflict> find_conflicts(std::span<const Path> paths,
                                     TailSemantics semantics,
                                     bool first_only = false);
std::vector<Conflict> find_conflicts(const Plan& plan, TailSemantics semantics,
                                     bool first_only = false);
bool paths_collide(const Path& a, const Path& b, TailSemantics semantics);

/// Length of a path in edges.
inline std::size_t path_cost(const Path& path) {
  return path.empty() ? 0 : path.size() - 1;
}
std::size_t sum_of_costs(std::span<const Path> paths);
std::size_t sum_of_costs(const Plan& plan);
std::size_t plan_length(const Plan& plan);

/// Per-index repetition counts k_i realizing a d-delay of one path.
class DelayAssignment {
 public:
  DelayAssignment() = default;
  DelayAssignment(std::initializer_list<std::pair<const std::size_t, std::size_t>> init);

  void add(std::size_t index, std::size_t count = 1);
  std::size_t at(std::size_t index) const;
  std::size_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  const std::map<std::size_t, std::size_t>& counts() const { return counts_; }

  friend bool operator==(const DelayAssignment&, const DelayAssignment&) = default;

 private:
  std::map<std::size_t, std::size_t> counts_;
  std::size_t total_ = 0;
};

/// Every index 1..|vertices| of every path.
DelayPermissions all_indices(const Plan& plan);

/// Returns v_1 v_1^{k_1} ... v_m v_m^{k_m}. Throws DelayNotPermitted when a
/// repetition falls outside `permitted` or on a vertex without a self-loop.
Path apply_delays(const Graph& graph, const Path& path, const IndexSet& permitted,
                  const DelayAssignment& delays);
Plan apply_delays(const Graph& graph, const Plan& plan,
                  const DelayPermissions& permitted,
                  std::span<const DelayAssignment> delays);

}  // namespace acid

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "acid/instance.hpp"
#include "acid/mapf.hpp"

namespace acid {

enum class ConstraintKind { VertexAt, EdgeAt };

// VertexAt: agent may not occupy `from` at `timestep`.
// EdgeAt: agent may not move from -> to between `timestep` and `timestep + 1`.
struct Constraint {
  AgentId agent = 0;
  ConstraintKind kind = ConstraintKind::VertexAt;
  VertexId from = 0;
  VertexId to = 0;
  std::size_t timestep = 0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Per-agent lookup of forbidden space-time cells. Checks act on the projected
/// vertex of a node.
class ConstraintTable {
 public:
  ConstraintTable() = default;
  explicit ConstraintTable(std::span<const Constraint> constraints);

  void add(const Constraint& constraint);
  /// Forbids `v` at every timestep >= t.
  void block_from(VertexId v, std::size_t t);

  bool vertex_blocked(VertexId v, std::size_t t) const;
  bool edge_blocked(VertexId from, VertexId to, std::size_t t) const;
  /// Whether an agent that arrives at `v` at time t may stay there forever.
  bool can_rest(VertexId v, std::size_t t) const;
  /// First timestep from which no constraint applies any more (0 when empty).
  std::size_t latest() const { return latest_; }

 private:
  std::unordered_set<std::uint64_t> vertices_;
  std::set<std::tuple<VertexId, VertexId, std::size_t>> edges_;
  std::unordered_map<VertexId, std::size_t> last_vertex_time_;
  std::unordered_map<VertexId, std::size_t> blocked_from_;
  std::size_t latest_ = 0;
};

/// Exact distance-to-goal over the agent's reachable nodes, computed from
/// successor queries only.
class Heuristic {
 public:
  Heuristic(const AgentEdgeGraph& instance, AgentId agent);
  /// nullopt when no goal node is reachable from `node`.
  std::optional<std::uint32_t> operator()(Node node) const;

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> distance_;
};

using Clock = std::chrono::steady_clock;

struct LowLevelResult {
  enum class Status { Found, NoPath, Timeout };
  Status status = Status::NoPath;
  NodePath path;
  std::size_t expansions = 0;
};

/// Space-time A* from start to a goal node. States beyond `horizon_cap` are
/// never generated. Under StayAtGoal the agent only finishes where it may rest
/// for good. Ties prefer deeper states, then lower vertex id, then non-wait.
LowLevelResult low_level_search(const AgentEdgeGraph& instance, AgentId agent,
                                const ConstraintTable& constraints,
                                TailSemantics semantics, std::size_t horizon_cap,
                                const Heuristic* heuristic = nullptr,
                                std::optional<Clock::time_point> deadline = std::nullopt);

enum class SolveStatus { Solved, Timeout, Infeasible };

std::string_view to_string(SolveStatus status);

struct SolveStats {
  std::size_t expansions = 0;  // high-level nodes (CBS) or agents planned
  std::size_t generated = 0;
  std::size_t low_level_calls = 0;
  std::size_t low_level_expansions = 0;
  double wall_ms = 0;
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<NodePath> paths;
  std::size_t soc = 0;
  SolveStats stats;

  std::vector<Path> projected() const;
};

struct SolveOptions {
  TailSemantics semantics = TailSemantics::StayAtGoal;
  double time_limit_s = 60.0;
  /// Longest path (in timesteps) the low level may produce; must be positive.
  std::size_t horizon = 0;
};

/// l(P) + d(n - 1) when the number of injected delays d is known, otherwise
/// l(P) + (n - 1)||P||.
std::size_t default_horizon(const Plan& plan, std::optional<std::size_t> injected = std::nullopt);

Solution cbs_solve(const AgentEdgeGraph& instance, const SolveOptions& options);

/// Plans agents one at a time in `order`, each avoiding all earlier paths.
Solution prioritized_solve(const AgentEdgeGraph& instance, std::span<const AgentId> order,
                           const SolveOptions& options);

}  // namespace acid

#include <vector>

#include "acid/solver.hpp"

namespace acid {

Solution prioritized_solve(const AgentEdgeGraph& instance, std::span<const AgentId> order,
                           const SolveOptions& options) {
  const auto begin = Clock::now();
  const auto deadline =
      begin + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(options.time_limit_s));
  const std::size_t n = instance.agent_count();
  {
    std::vector<bool> seen(n, false);
    if (order.size() != n) {
      throw Error(ErrorCode::InvariantViolation, "priority order must list every agent once");
    }
    for (AgentId a : order) {
      if (a >= n || seen[a]) {
        throw Error(ErrorCode::InvariantViolation, "priority order must list every agent once");
      }
      seen[a] = true;
    }
  }

  Solution solution;
  solution.paths.resize(n);
  auto finish = [&](SolveStatus status) {
    solution.status = status;
    solution.stats.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
    if (status != SolveStatus::Solved) {
      solution.paths.clear();
      solution.soc = 0;
    }
    return solution;
  };

  // Reservations left by the agents planned so far.
  ConstraintTable reserved;
  for (AgentId agent : order) {
    if (Clock::now() > deadline) return finish(SolveStatus::Timeout);
    ++solution.stats.expansions;
    ++solution.stats.low_level_calls;
    const Heuristic heuristic(instance, agent);
    auto found = low_level_search(instance, agent, reserved, options.semantics,
                                  options.horizon, &heuristic, deadline);
    solution.stats.low_level_expansions += found.expansions;
    if (found.status == LowLevelResult::Status::Timeout) return finish(SolveStatus::Timeout);
    if (found.status == LowLevelResult::Status::NoPath) return finish(SolveStatus::Infeasible);

    const Path path = project(found.path);
    for (std::size_t t = 0; t < path.size(); ++t) {
      reserved.add({agent, ConstraintKind::VertexAt, path[t], path[t], t});
      if (t + 1 < path.size() && path[t] != path[t + 1]) {
        reserved.add({agent, ConstraintKind::EdgeAt, path[t + 1], path[t], t});
      }
    }
    if (options.semantics == TailSemantics::StayAtGoal) {
      reserved.block_from(path.back(), path.size() - 1);
    }
    solution.soc += path_cost(path);
    solution.paths[agent] = std::move(found.path);
  }
  return finish(SolveStatus::Solved);
}

}  // namespace acid

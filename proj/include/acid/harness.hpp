#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acid/io.hpp"
#include "acid/mapf.hpp"
#include "acid/reduction.hpp"
#include "acid/solver.hpp"

namespace acid {

enum class SolverKind { Cbs, Prioritized };

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver_kind(std::string_view text);

using Rng = std::mt19937_64;

struct DelayedPlan {
  Plan plan;
  std::vector<InjectionRecord> records;
};

/// Samples (agent, step k) uniformly with 0 < k < m_i and a delay vertex at
/// step k, repeats that vertex once, and accepts when the result collides at
/// some k < t < m_i. nullopt after 10 n l(P) rejected samples.
std::optional<DelayedPlan> inject_collision_inducing_delay(const Graph& graph, const Plan& plan,
                                                           TailSemantics semantics, Rng& rng);

/// `count` accepted single injections drawn on the same plan, distinct agents
/// first, applied together. nullopt when not enough samples are accepted or the
/// combined plan does not collide.
std::optional<DelayedPlan> inject_multiple_delays(const Graph& graph, const Plan& plan,
                                                  std::size_t count, TailSemantics semantics,
                                                  Rng& rng);

/// The timestep the repair starts from: the earliest injected step (0 without
/// injections).
std::size_t repair_time(std::span<const InjectionRecord> injections);

/// Indices p >= repair_time + 1 of every path: waits are only possible from
/// the current timestep on.
DelayPermissions future_permissions(const Plan& delayed,
                                    std::span<const InjectionRecord> injections);

struct HaltAllResult {
  Plan plan;
  std::vector<DelayAssignment> delays;
  std::size_t added_soc = 0;
};

/// Every injection at step k pauses all other agents still moving after k at
/// their step-k vertex, which restores the undelayed plan shifted in time.
/// Throws DelayNotPermitted when a needed wait is not permitted.
HaltAllResult halt_all_repair(const Graph& graph, const Plan& delayed,
                              std::span<const InjectionRecord> injections,
                              const DelayPermissions& permitted,
                              TailSemantics semantics = TailSemantics::StayAtGoal);

struct RepairOptions {
  GraphMode mode = GraphMode::Constrained;
  SolverKind solver = SolverKind::Cbs;
  TailSemantics semantics = TailSemantics::StayAtGoal;
  double time_limit_s = 60.0;
  /// Empty: future_permissions of the injections.
  DelayPermissions permitted;
};

struct RepairResult {
  SolveStatus status = SolveStatus::Infeasible;
  Plan repaired;
  std::vector<DelayAssignment> delays;  // CG and ICG only
  long long added_soc = 0;               // SOC(repaired) - SOC(delayed)
  SolveStats stats;
  double build_ms = 0;
};

/// Repairs a delayed plan on the chosen graph. CG and ICG solve for delays on
/// the whole plan; OG replans every agent from its position at the repair time
/// towards its goal, with the injected pauses kept.
RepairResult repair(const Graph& graph, const Plan& delayed,
                    std::span<const InjectionRecord> injections, const RepairOptions& options);

/// Prioritized planning on the original graph from scenario endpoints, trying
/// the identity order first and then a few shuffled ones.
std::optional<Plan> plan_seed(const Graph& graph, std::span<const VertexId> starts,
                              std::span<const VertexId> goals, TailSemantics semantics,
                              double time_limit_s, Rng& rng);

struct ExperimentConfig {
  std::filesystem::path map_path;
  std::filesystem::path scenario_path;
  std::vector<std::size_t> agent_counts;
  std::size_t delays_to_inject = 1;
  std::size_t instances = 1;
  std::size_t iterations = 10;
  double time_limit_s = 180.0;
  double seed_time_limit_s = 60.0;
  std::uint64_t seed = 0;
  std::vector<GraphMode> modes{GraphMode::Original, GraphMode::Constrained,
                               GraphMode::ImprovedConstrained};
  std::vector<SolverKind> solvers{SolverKind::Cbs};
  TailSemantics semantics = TailSemantics::StayAtGoal;
  std::size_t workers = 1;
  /// When set, the delayed plan of every iteration is written there.
  std::optional<std::filesystem::path> plan_dir;
};

/// Reads a JSON config; relative paths are resolved against `base_dir`.
/// Throws InvariantViolation naming the offending field.
ExperimentConfig read_experiment_config(std::string_view text,
                                        const std::filesystem::path& base_dir);

using Logger = std::function<void(const std::string&)>;

/// One row per (agent count, instance, iteration, mode, solver). Iterations
/// without a seed plan or without an accepted injection yield no rows and are
/// logged. Rows come out in task order whatever the worker count.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& config,
                                       const Logger& log = {});

}  // namespace acid

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <ostream>

#include "acid/hardness.hpp"
#include "acid/harness.hpp"
#include "acid/io.hpp"
#include "acid/oracle.hpp"

namespace acid {

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kTimeout = 2;
constexpr int kInfeasible = 3;
constexpr int kConflicts = 4;

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return kOk;
    case SolveStatus::Timeout: return kTimeout;
    case SolveStatus::Infeasible: return kInfeasible;
  }
  return kInputError;
}

struct Shared {
  std::string semantics;
  double time_limit = 60.0;
  std::uint64_t seed = 0;
  std::string graph = "cg";
  std::string solver = "cbs";
  std::string out;
};

TailSemantics pick_semantics(const Shared& shared, TailSemantics fallback) {
  if (shared.semantics.empty()) return fallback;
  return *parse_tail_semantics(shared.semantics);
}

void print_stats(std::ostream& out, const SolveStats& stats) {
  out << "expansions: " << stats.expansions << "\n"
      << "low_level_calls: " << stats.low_level_calls << "\n"
      << std::fixed << std::setprecision(3) << "wall_ms: " << stats.wall_ms << "\n";
}

int cmd_repair(const std::string& plan_path, const Shared& shared, std::ostream& out) {
  const PlanFile input = read_plan(read_text_file(plan_path));
  RepairOptions options;
  options.mode = *parse_graph_mode(shared.graph);
  options.solver = *parse_solver_kind(shared.solver);
  options.semantics = pick_semantics(shared, input.semantics);
  options.time_limit_s = shared.time_limit;
  options.permitted = input.injections.empty() ? input.effective_permissions() : input.permitted;
  const RepairResult result = repair(input.graph, input.plan, input.injections, options);

  out << "status: " << to_string(result.status) << "\n";
  if (result.status == SolveStatus::Solved) {
    out << "added_soc: " << result.added_soc << "\n"
        << "soc: " << sum_of_costs(result.repaired) << "\n";
    if (!shared.out.empty()) {
      PlanFile file{input.graph, result.repaired, options.semantics, {}, result.delays, {}};
      write_text_file(shared.out, write_plan(file));
      out << "wrote: " << shared.out << "\n";
    }
  }
  print_stats(out, result.stats);
  return exit_code(result.status);
}

int cmd_solve(const std::string& map_path, const std::string& scen_path, std::size_t agents,
              const Shared& shared, std::ostream& out) {
  const GridMap map = parse_map(read_text_file(map_path));
  const auto entries = parse_scenario(read_text_file(scen_path));
  check_scenario(map, entries);
  if (entries.size() < agents) {
    throw Error(ErrorCode::InvariantViolation,
                "scenario has " + std::to_string(entries.size()) + " entries, " +
                    std::to_string(agents) + " requested");
  }
  const GridGraph grid = grid_to_graph(map, DelayPolicy::AllVertices);
  std::vector<VertexId> starts, goals;
  for (std::size_t k = 0; k < agents; ++k) {
    starts.push_back(*grid.vertex_at(entries[k].start));
    goals.push_back(*grid.vertex_at(entries[k].goal));
  }
  const TailSemantics semantics = pick_semantics(shared, TailSemantics::StayAtGoal);
  std::optional<Plan> plan;
  if (shared.solver == "cbs") {
    const OriginalGraphInstance instance(grid.graph, starts, goals);
    SolveOptions options;
    options.semantics = semantics;
    options.time_limit_s = shared.time_limit;
    options.horizon = 2 * grid.graph.vertex_count() + agents;
    const Solution solution = cbs_solve(instance, options);
    print_stats(out, solution.stats);
    if (solution.status != SolveStatus::Solved) {
      out << "status: " << to_string(solution.status) << "\n";
      return exit_code(solution.status);
    }
    plan = Plan::from_paths(solution.projected());
  } else {
    Rng rng(shared.seed);
    plan = plan_seed(grid.graph, starts, goals, semantics, shared.time_limit, rng);
    if (!plan) {
      out << "status: infeasible\n";
      return kInfeasible;
    }
  }
  out << "status: solved\nsoc: " << sum_of_costs(*plan) << "\n";
  if (!shared.out.empty()) {
    write_text_file(shared.out, write_plan({grid.graph, *plan, semantics, {}, {}, {}}));
    out << "wrote: " << shared.out << "\n";
  }
  return kOk;
}

int cmd_inject(const std::string& plan_path, std::size_t count, const Shared& shared,
               std::ostream& out) {
  const PlanFile input = read_plan(read_text_file(plan_path));
  const TailSemantics semantics = pick_semantics(shared, input.semantics);
  if (!find_conflicts(input.plan, semantics, true).empty()) {
    throw Error(ErrorCode::InvariantViolation, "input plan already collides");
  }
  Rng rng(shared.seed);
  const auto injected = inject_multiple_delays(input.graph, input.plan, count, semantics, rng);
  if (!injected) {
    out << "no collision-inducing delay found\n";
    return kInfeasible;
  }
  for (const auto& r : injected->records) {
    out << "injected: agent " << r.agent << " step " << r.step << " conflict_step "
        << r.conflict_step << "\n";
  }
  out << "conflicts: " << find_conflicts(injected->plan, semantics).size() << "\n";
  if (!shared.out.empty()) {
    PlanFile file{input.graph, injected->plan, semantics, {}, {}, injected->records};
    write_text_file(shared.out, write_plan(file));
    out << "wrote: " << shared.out << "\n";
  }
  return kOk;
}

int cmd_bench(const std::string& config_path, std::size_t workers, const Shared& shared,
              std::ostream& out, std::ostream& err) {
  ExperimentConfig config = read_experiment_config(
      read_text_file(config_path), std::filesystem::path(config_path).parent_path());
  if (workers > 0) config.workers = workers;
  const auto rows = run_experiment(config, [&](const std::string& line) { err << line << "\n"; });
  std::size_t solved = 0;
  for (const auto& row : rows) solved += row.status == SolveStatus::Solved ? 1 : 0;
  out << "rows: " << rows.size() << "\nsolved: " << solved << "\n";
  if (!shared.out.empty()) {
    write_text_file(shared.out, write_metrics_csv(rows));
    out << "wrote: " << shared.out << "\n";
  }
  return kOk;
}

UndirectedGraph read_undirected(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
    return UndirectedGraph(doc.at("vertex_count").get<std::size_t>(),
                           doc.at("edges").get<std::vector<Edge>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvariantViolation,
                "graph file needs 'vertex_count' and 'edges': " + std::string(e.what()));
  }
}

int cmd_reduce(const std::string& graph_path, std::size_t threshold, bool start_only,
               const Shared& shared, std::ostream& out) {
  const UndirectedGraph graph = read_undirected(graph_path);
  const ReductionOutput reduction = msc_to_acid(graph, threshold, {start_only});
  out << "agents: " << reduction.plan.agent_count() << "\n"
      << "blocks: " << reduction.block_count << "\n"
      << "path_vertices: " << reduction.plan.paths.front().size() << "\n"
      << "budget: " << reduction.budget << "\n";
  if (!shared.out.empty()) {
    PlanFile file{reduction.graph, reduction.plan, reduction.semantics,
                  reduction.permitted, {}, {}};
    write_text_file(shared.out, write_plan(file));
    out << "wrote: " << shared.out << "\n";
  }
  return kOk;
}

int cmd_oracle(const std::string& plan_path, std::optional<std::size_t> max_budget,
               std::size_t max_slots, const Shared& shared, std::ostream& out) {
  const PlanFile input = read_plan(read_text_file(plan_path));
  AcidOracleOptions options;
  options.max_budget = max_budget;
  options.max_slots = max_slots;
  const auto result = brute_force_acid(input.graph, input.plan, input.effective_permissions(),
                                       pick_semantics(shared, input.semantics), options);
  out << "states: " << result.states << "\n";
  if (!result.solvable) {
    out << "unsolvable\n";
    return kInfeasible;
  }
  out << "min_delay: " << result.min_delay << "\n";
  for (AgentId i = 0; i < result.witness.size(); ++i) {
    for (const auto& [index, count] : result.witness[i].counts()) {
      out << "wait: agent " << i << " index " << index << " count " << count << "\n";
    }
  }
  return kOk;
}

int cmd_validate(const std::string& plan_path, const Shared& shared, std::ostream& out) {
  const PlanFile input = read_plan(read_text_file(plan_path));
  const auto conflicts = find_conflicts(input.plan, pick_semantics(shared, input.semantics));
  out << "agents: " << input.plan.agent_count() << "\n"
      << "soc: " << sum_of_costs(input.plan) << "\n"
      << "conflicts: " << conflicts.size() << "\n";
  for (const auto& c : conflicts) {
    out << (c.kind == ConflictKind::Vertex ? "vertex" : "edge") << " agents " << c.first << ","
        << c.second << " timestep " << c.timestep << " at " << c.from;
    if (c.kind == ConflictKind::Edge) out << "->" << c.to;
    out << "\n";
  }
  return conflicts.empty() ? kOk : kConflicts;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plan repair by delay introduction for multi-agent path finding", "acid"};
  app.require_subcommand(1, 1);

  Shared shared;
  const auto semantics_check = CLI::IsMember({"stay", "disappear"});
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--semantics", shared.semantics, "stay or disappear (default: from file)")
        ->check(semantics_check);
    cmd->add_option("--out", shared.out, "output file");
  };

  std::string plan_path, map_path, scen_path, config_path, graph_path;
  std::size_t count = 1, agents = 1, threshold = 0, workers = 0, max_slots = 256;
  std::optional<std::size_t> max_budget;
  bool start_only = false;

  auto* repair_cmd = app.add_subcommand("repair", "repair a delayed plan");
  repair_cmd->add_option("plan", plan_path, "plan file")->required();
  repair_cmd->add_option("--graph", shared.graph, "og, cg or icg")
      ->check(CLI::IsMember({"og", "cg", "icg"}));
  repair_cmd->add_option("--solver", shared.solver, "cbs or prioritized")
      ->check(CLI::IsMember({"cbs", "prioritized"}));
  repair_cmd->add_option("--time-limit", shared.time_limit, "seconds")->check(CLI::PositiveNumber);
  add_common(repair_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "plan a MAPF instance from a map and scenario");
  solve_cmd->add_option("--map", map_path, ".map file")->required();
  solve_cmd->add_option("--scen", scen_path, ".scen file")->required();
  solve_cmd->add_option("--agents", agents, "first N scenario entries")->required()
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--solver", shared.solver, "cbs or prioritized")
      ->check(CLI::IsMember({"cbs", "prioritized"}));
  solve_cmd->add_option("--time-limit", shared.time_limit, "seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", shared.seed, "seed for reordering attempts");
  add_common(solve_cmd);

  auto* inject_cmd = app.add_subcommand("inject", "inject collision-inducing delays");
  inject_cmd->add_option("plan", plan_path, "plan file")->required();
  inject_cmd->add_option("--count", count, "number of delays")->check(CLI::PositiveNumber);
  inject_cmd->add_option("--seed", shared.seed, "random seed");
  add_common(inject_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "run an experiment sweep");
  bench_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  bench_cmd->add_option("--workers", workers, "override worker count");
  bench_cmd->add_option("--out", shared.out, "metrics CSV");

  auto* reduce_cmd = app.add_subcommand("reduce-msc", "build the ACID instance of a sum coloring problem");
  reduce_cmd->add_option("graph", graph_path, "graph file (JSON vertex_count, edges)")->required();
  reduce_cmd->add_option("--threshold", threshold, "coloring sum threshold C")->required();
  reduce_cmd->add_flag("--start-only", start_only, "permit waits at start vertices only");
  reduce_cmd->add_option("--out", shared.out, "plan file");

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive minimum-delay search");
  oracle_cmd->add_option("plan", plan_path, "plan file")->required();
  oracle_cmd->add_option("--max-budget", max_budget, "largest budget to try");
  oracle_cmd->add_option("--max-slots", max_slots, "guard on usable delay slots");
  oracle_cmd->add_option("--semantics", shared.semantics, "stay or disappear")->check(semantics_check);

  auto* validate_cmd = app.add_subcommand("validate", "list conflicts and SOC of a plan");
  validate_cmd->add_option("plan", plan_path, "plan file")->required();
  validate_cmd->add_option("--semantics", shared.semantics, "stay or disappear")->check(semantics_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }

  try {
    if (*repair_cmd) return cmd_repair(plan_path, shared, out);
    if (*solve_cmd) return cmd_solve(map_path, scen_path, agents, shared, out);
    if (*inject_cmd) return cmd_inject(plan_path, count, shared, out);
    if (*bench_cmd) return cmd_bench(config_path, workers, shared, out, err);
    if (*reduce_cmd) return cmd_reduce(graph_path, threshold, start_only, shared, out);
    if (*oracle_cmd) return cmd_oracle(plan_path, max_budget, max_slots, shared, out);
    if (*validate_cmd) return cmd_validate(plan_path, shared, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace acid

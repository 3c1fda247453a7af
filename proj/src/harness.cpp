#include "acid/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <json.hpp>

namespace acid {

std::string_view to_string(SolverKind kind) {
  return kind == SolverKind::Cbs ? "cbs" : "prioritized";
}

std::optional<SolverKind> parse_solver_kind(std::string_view text) {
  if (text == "cbs") return SolverKind::Cbs;
  if (text == "prioritized") return SolverKind::Prioritized;
  return std::nullopt;
}

namespace {

double ms_since(Clock::time_point begin) {
  return std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
}

// One draw of (agent, k); returns the record when the single repetition
// collides inside (k, m_i).
std::optional<InjectionRecord> draw(const Graph& graph, const Plan& plan,
                                    std::span<const AgentId> movable, TailSemantics semantics,
                                    Rng& rng) {
  const AgentId agent =
      movable[std::uniform_int_distribution<std::size_t>(0, movable.size() - 1)(rng)];
  const Path& path = plan.paths[agent];
  const std::size_t m = path_cost(path);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, m - 1)(rng);
  if (!graph.is_delay_vertex(path[k])) return std::nullopt;

  std::vector<Path> paths = plan.paths;
  paths[agent].insert(paths[agent].begin() + static_cast<std::ptrdiff_t>(k), path[k]);
  for (const Conflict& c : find_conflicts(std::span<const Path>(paths), semantics)) {
    if (c.timestep > k && c.timestep < m) return InjectionRecord{agent, k, 1, c.timestep};
  }
  return std::nullopt;
}

Plan apply_injections(const Plan& plan, std::span<const InjectionRecord> records) {
  Plan delayed = plan;
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    std::vector<std::size_t> steps;
    for (const auto& r : records) {
      if (r.agent == i) steps.insert(steps.end(), r.length, r.step);
    }
    if (steps.empty()) continue;
    Path path;
    for (std::size_t x = 0; x < plan.paths[i].size(); ++x) {
      const auto copies = 1 + std::count(steps.begin(), steps.end(), x);
      path.insert(path.end(), static_cast<std::size_t>(copies), plan.paths[i][x]);
    }
    delayed.paths[i] = std::move(path);
  }
  return delayed;
}

}  // namespace

std::optional<DelayedPlan> inject_multiple_delays(const Graph& graph, const Plan& plan,
                                                  std::size_t count, TailSemantics semantics,
                                                  Rng& rng) {
  check_plan(plan, &graph);
  std::vector<AgentId> movable;
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    if (path_cost(plan.paths[i]) >= 2) movable.push_back(i);
  }
  if (movable.empty() || count == 0) return std::nullopt;

  const std::size_t budget = 10 * plan.agent_count() * std::max<std::size_t>(1, plan_length(plan));
  std::vector<InjectionRecord> records;
  std::set<AgentId> used;
  std::set<std::pair<AgentId, std::size_t>> taken;
  for (bool distinct : {true, false}) {
    for (std::size_t attempt = 0; attempt < budget && records.size() < count; ++attempt) {
      auto record = draw(graph, plan, movable, semantics, rng);
      if (!record) continue;
      if (distinct && used.contains(record->agent)) continue;
      if (!taken.insert({record->agent, record->step}).second) continue;
      used.insert(record->agent);
      records.push_back(*record);
    }
    if (records.size() == count) break;
  }
  if (records.size() < count) return std::nullopt;

  DelayedPlan out{apply_injections(plan, records), records};
  if (find_conflicts(out.plan, semantics, true).empty()) return std::nullopt;
  return out;
}

std::optional<DelayedPlan> inject_collision_inducing_delay(const Graph& graph, const Plan& plan,
                                                           TailSemantics semantics, Rng& rng) {
  return inject_multiple_delays(graph, plan, 1, semantics, rng);
}

std::size_t repair_time(std::span<const InjectionRecord> injections) {
  std::size_t t0 = injections.empty() ? 0 : injections.front().step;
  for (const auto& r : injections) t0 = std::min(t0, r.step);
  return t0;
}

DelayPermissions future_permissions(const Plan& delayed,
                                    std::span<const InjectionRecord> injections) {
  const std::size_t t0 = repair_time(injections);
  DelayPermissions permitted(delayed.agent_count());
  for (AgentId i = 0; i < delayed.agent_count(); ++i) {
    for (std::size_t p = t0 + 1; p <= delayed.paths[i].size(); ++p) {
      permitted[i].insert(permitted[i].end(), p);
    }
  }
  return permitted;
}

HaltAllResult halt_all_repair(const Graph& graph, const Plan& delayed,
                              std::span<const InjectionRecord> injections,
                              const DelayPermissions& permitted, TailSemantics semantics) {
  const std::size_t n = delayed.agent_count();
  std::vector<std::vector<std::size_t>> own(n);  // injected old steps per agent
  for (const auto& r : injections) {
    if (r.agent >= n) throw Error(ErrorCode::InvariantViolation, "injection names no agent");
    own[r.agent].insert(own[r.agent].end(), r.length, r.step);
  }
  HaltAllResult result;
  result.delays.resize(n);
  for (const auto& r : injections) {
    for (AgentId b = 0; b < n; ++b) {
      if (b == r.agent) continue;
      const std::size_t old_length = delayed.paths[b].size() - own[b].size();
      if (old_length <= r.step + 1) continue;  // already resting at its goal
      const auto mine = static_cast<std::size_t>(std::count(own[b].begin(), own[b].end(), r.step));
      if (mine >= r.length) continue;
      const auto earlier = static_cast<std::size_t>(std::count_if(
          own[b].begin(), own[b].end(), [&](std::size_t s) { return s < r.step; }));
      result.delays[b].add(r.step + 1 + earlier, r.length - mine);
    }
  }
  result.plan = apply_delays(graph, delayed, permitted, result.delays);
  for (const auto& d : result.delays) result.added_soc += d.total();
  if (!find_conflicts(result.plan, semantics, true).empty()) {
    throw Error(ErrorCode::InvariantViolation,
                "halting every agent did not restore a collision-free plan");
  }
  return result;
}

namespace {

Solution run_solver(const AgentEdgeGraph& instance, SolverKind kind, const SolveOptions& options,
                    std::span<const AgentId> order) {
  if (kind == SolverKind::Cbs) return cbs_solve(instance, options);
  return prioritized_solve(instance, order, options);
}

std::vector<AgentId> identity_order(std::size_t n) {
  std::vector<AgentId> order(n);
  std::iota(order.begin(), order.end(), AgentId{0});
  return order;
}

}  // namespace

RepairResult repair(const Graph& graph, const Plan& delayed,
                    std::span<const InjectionRecord> injections, const RepairOptions& options) {
  check_plan(delayed, &graph);
  const std::size_t n = delayed.agent_count();
  const std::size_t t0 = repair_time(injections);
  std::size_t d = 0;
  for (const auto& r : injections) d += r.length;

  SolveOptions solve;
  solve.semantics = options.semantics;
  solve.time_limit_s = options.time_limit_s;

  RepairResult result;
  if (options.mode != GraphMode::Original) {
    const DelayPermissions permitted = options.permitted.empty()
                                           ? future_permissions(delayed, injections)
                                           : options.permitted;
    const auto begin = Clock::now();
    const ConstrainedGraph instance = options.mode == GraphMode::Constrained
                                          ? build_cg(graph, delayed, permitted)
                                          : build_icg(graph, delayed, permitted);
    result.build_ms = ms_since(begin);
    solve.horizon = injections.empty() ? default_horizon(delayed) : default_horizon(delayed, d);
    const Solution solution = run_solver(instance, options.solver, solve, identity_order(n));
    result.status = solution.status;
    result.stats = solution.stats;
    if (solution.status == SolveStatus::Solved) {
      LiftedSolution lifted = lift_solution(instance, solution.paths);
      result.repaired = std::move(lifted.plan);
      result.delays = std::move(lifted.delays);
      result.added_soc = static_cast<long long>(lifted.added_soc);
    }
  } else {
    const auto begin = Clock::now();
    std::vector<AgentId> participants;
    std::vector<VertexId> starts, goals;
    std::vector<std::set<std::size_t>> holds;
    std::size_t suffix_total = 0;
    for (AgentId i = 0; i < n; ++i) {
      const Path& path = delayed.paths[i];
      if (options.semantics == TailSemantics::DisappearAtGoal && path.size() <= t0) continue;
      participants.push_back(i);
      starts.push_back(*position_at(path, t0, TailSemantics::StayAtGoal));
      goals.push_back(path.back());
      suffix_total += path.size() > t0 + 1 ? path.size() - 1 - t0 : 0;
      std::vector<std::size_t> steps;
      for (const auto& r : injections) {
        if (r.agent == i) steps.insert(steps.end(), r.length, r.step);
      }
      std::sort(steps.begin(), steps.end());
      std::set<std::size_t> agent_holds;
      for (std::size_t q = 0; q < steps.size(); ++q) {
        // q earlier repetitions shift this one by q timesteps in the delayed plan.
        agent_holds.insert(steps[q] + q - t0);
      }
      holds.push_back(std::move(agent_holds));
    }
    const OriginalGraphInstance instance(graph, starts, goals, holds);
    result.build_ms = ms_since(begin);
    solve.horizon = injections.empty()
                        ? std::max<std::size_t>(1, n * sum_of_costs(delayed))
                        : std::max<std::size_t>(1, suffix_total + d * (n - 1));
    const Solution solution =
        run_solver(instance, options.solver, solve, identity_order(participants.size()));
    result.status = solution.status;
    result.stats = solution.stats;
    if (solution.status == SolveStatus::Solved) {
      result.repaired = delayed;
      for (std::size_t q = 0; q < participants.size(); ++q) {
        const AgentId i = participants[q];
        const Path tail = project(solution.paths[q]);
        const Path& old = delayed.paths[i];
        if (tail.size() == 1 && old.size() <= t0 + 1) continue;  // stayed parked
        Path path;
        for (std::size_t t = 0; t < t0; ++t) {
          path.push_back(*position_at(old, t, TailSemantics::StayAtGoal));
        }
        path.insert(path.end(), tail.begin(), tail.end());
        result.repaired.paths[i] = std::move(path);
      }
      result.added_soc = static_cast<long long>(sum_of_costs(result.repaired)) -
                         static_cast<long long>(sum_of_costs(delayed));
    }
  }
  if (result.status == SolveStatus::Solved) {
    check_plan(result.repaired, &graph);
    if (!find_conflicts(result.repaired, options.semantics, true).empty()) {
      throw Error(ErrorCode::InvariantViolation, "repaired plan still collides");
    }
  }
  return result;
}

std::optional<Plan> plan_seed(const Graph& graph, std::span<const VertexId> starts,
                              std::span<const VertexId> goals, TailSemantics semantics,
                              double time_limit_s, Rng& rng) {
  const OriginalGraphInstance instance(graph, {starts.begin(), starts.end()},
                                       {goals.begin(), goals.end()});
  SolveOptions options;
  options.semantics = semantics;
  options.time_limit_s = time_limit_s;
  options.horizon = 2 * graph.vertex_count() + starts.size();
  std::vector<AgentId> order = identity_order(starts.size());
  constexpr int kAttempts = 5;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    if (attempt > 0) std::shuffle(order.begin(), order.end(), rng);
    const Solution solution = prioritized_solve(instance, order, options);
    if (solution.status == SolveStatus::Solved) return Plan::from_paths(solution.projected());
  }
  return std::nullopt;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvariantViolation, "config field '" + field + "': " + why);
}

template <typename T>
T config_value(const json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    bad_config(key, doc.contains(key) ? "has the wrong type" : "missing");
  }
}

Rng make_rng(std::uint64_t master, std::size_t a, std::size_t b, std::size_t c) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(c)};
  return Rng(seq);
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) fn(k);
    });
  }
  for (auto& t : pool) t.join();
}

constexpr std::size_t kSeedStream = 0xFFFFFFFF;

}  // namespace

ExperimentConfig read_experiment_config(std::string_view text,
                                        const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad_config("(root)", "must be an object");
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  ExperimentConfig config;
  config.map_path = resolve(config_value<std::string>(doc, "map"));
  config.scenario_path = resolve(config_value<std::string>(doc, "scenario"));
  config.agent_counts = config_value<std::vector<std::size_t>>(doc, "agent_counts");
  if (config.agent_counts.empty()) bad_config("agent_counts", "must not be empty");
  if (doc.contains("delays_to_inject")) {
    config.delays_to_inject = config_value<std::size_t>(doc, "delays_to_inject");
  }
  if (config.delays_to_inject < 1) bad_config("delays_to_inject", "must be at least 1");
  if (doc.contains("instances")) config.instances = config_value<std::size_t>(doc, "instances");
  if (doc.contains("iterations")) config.iterations = config_value<std::size_t>(doc, "iterations");
  if (doc.contains("time_limit")) config.time_limit_s = config_value<double>(doc, "time_limit");
  if (!(config.time_limit_s > 0)) bad_config("time_limit", "must be positive");
  if (doc.contains("seed_time_limit")) {
    config.seed_time_limit_s = config_value<double>(doc, "seed_time_limit");
  }
  if (doc.contains("seed")) config.seed = config_value<std::uint64_t>(doc, "seed");
  if (doc.contains("modes")) {
    config.modes.clear();
    for (const auto& m : config_value<std::vector<std::string>>(doc, "modes")) {
      auto mode = parse_graph_mode(m);
      if (!mode) bad_config("modes", "unknown graph mode '" + m + "'");
      config.modes.push_back(*mode);
    }
  }
  if (doc.contains("solvers")) {
    config.solvers.clear();
    for (const auto& s : config_value<std::vector<std::string>>(doc, "solvers")) {
      auto kind = parse_solver_kind(s);
      if (!kind) bad_config("solvers", "unknown solver '" + s + "'");
      config.solvers.push_back(*kind);
    }
  }
  if (doc.contains("semantics")) {
    auto semantics = parse_tail_semantics(config_value<std::string>(doc, "semantics"));
    if (!semantics) bad_config("semantics", "must be 'stay' or 'disappear'");
    config.semantics = *semantics;
  }
  if (doc.contains("workers")) config.workers = config_value<std::size_t>(doc, "workers");
  if (doc.contains("plan_dir")) config.plan_dir = resolve(config_value<std::string>(doc, "plan_dir"));
  return config;
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& config, const Logger& log) {
  if (config.delays_to_inject < 1 || !(config.time_limit_s > 0)) {
    throw Error(ErrorCode::InvariantViolation, "delays_to_inject >= 1 and time_limit > 0 required");
  }
  const GridMap map = parse_map(read_text_file(config.map_path));
  const auto entries = parse_scenario(read_text_file(config.scenario_path));
  check_scenario(map, entries);
  const GridGraph grid = grid_to_graph(map, DelayPolicy::AllVertices);
  const std::string map_name = config.map_path.stem().string();

  std::mutex log_mutex;
  auto note = [&](const std::string& line) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    log(line);
  };

  struct SeedTask {
    std::size_t n;
    std::size_t instance;
    std::optional<Plan> plan;
  };
  std::vector<SeedTask> seeds;
  for (std::size_t n : config.agent_counts) {
    for (std::size_t inst = 0; inst < config.instances; ++inst) seeds.push_back({n, inst, {}});
  }
  parallel_for(seeds.size(), config.workers, [&](std::size_t k) {
    SeedTask& task = seeds[k];
    Rng rng = make_rng(config.seed, task.instance, task.n, kSeedStream);
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<VertexId> starts, goals;
    std::set<VertexId> used_starts, used_goals;
    for (std::size_t e : order) {
      if (starts.size() == task.n) break;
      const VertexId s = *grid.vertex_at(entries[e].start);
      const VertexId g = *grid.vertex_at(entries[e].goal);
      if (used_starts.contains(s) || used_goals.contains(g)) continue;
      used_starts.insert(s);
      used_goals.insert(g);
      starts.push_back(s);
      goals.push_back(g);
    }
    if (starts.size() < task.n) {
      note("n=" + std::to_string(task.n) + " instance " + std::to_string(task.instance) +
           ": scenario has too few distinct entries");
      return;
    }
    task.plan = plan_seed(grid.graph, starts, goals, config.semantics, config.seed_time_limit_s, rng);
    if (!task.plan) {
      note("n=" + std::to_string(task.n) + " instance " + std::to_string(task.instance) +
           ": no seed plan");
    }
  });

  struct IterationTask {
    const SeedTask* seed;
    std::size_t iteration;
    std::vector<MetricsRow> rows;
  };
  std::vector<IterationTask> tasks;
  for (const auto& seed : seeds) {
    if (!seed.plan) continue;
    for (std::size_t it = 0; it < config.iterations; ++it) tasks.push_back({&seed, it, {}});
  }
  parallel_for(tasks.size(), config.workers, [&](std::size_t k) {
    IterationTask& task = tasks[k];
    const SeedTask& seed = *task.seed;
    const std::string where = "n=" + std::to_string(seed.n) + " instance " +
                              std::to_string(seed.instance) + " iteration " +
                              std::to_string(task.iteration);
    Rng rng = make_rng(config.seed, seed.instance, seed.n, task.iteration);
    const auto injected = inject_multiple_delays(grid.graph, *seed.plan, config.delays_to_inject,
                                                 config.semantics, rng);
    if (!injected) {
      note(where + ": no collision-inducing delay found");
      return;
    }
    if (config.plan_dir) {
      PlanFile file{grid.graph, injected->plan, config.semantics, {}, {}, injected->records};
      write_text_file(*config.plan_dir / ("plan_n" + std::to_string(seed.n) + "_i" +
                                          std::to_string(seed.instance) + "_it" +
                                          std::to_string(task.iteration) + ".json"),
                      write_plan(file));
    }
    const std::size_t conflicts = find_conflicts(injected->plan, config.semantics).size();
    for (GraphMode mode : config.modes) {
      for (SolverKind solver : config.solvers) {
        MetricsRow row;
        row.map = map_name;
        row.instance = seed.instance;
        row.n_agents = seed.n;
        row.iteration = task.iteration;
        row.seed = config.seed;
        row.graph_mode = mode;
        row.solver = std::string(to_string(solver));
        row.delays_injected = injected->records.size();
        row.conflicts_at_injection = conflicts;
        RepairOptions options;
        options.mode = mode;
        options.solver = solver;
        options.semantics = config.semantics;
        options.time_limit_s = config.time_limit_s;
        try {
          const RepairResult result = repair(grid.graph, injected->plan, injected->records, options);
          row.status = result.status;
          row.wall_ms = result.stats.wall_ms;
          row.build_ms = result.build_ms;
          row.added_soc = result.added_soc;
          row.expansions = result.stats.expansions;
        } catch (const Error& e) {
          row.status = SolveStatus::Infeasible;
          note(where + " " + std::string(to_string(mode)) + "/" + row.solver + ": " + e.what());
        }
        task.rows.push_back(std::move(row));
      }
    }
  });

  std::vector<MetricsRow> rows;
  for (auto& task : tasks) {
    for (auto& row : task.rows) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace acid

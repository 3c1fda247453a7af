#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acid/mapf.hpp"
#include "acid/reduction.hpp"
#include "acid/solver.hpp"

namespace acid {

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct GridMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<bool> passable;  // row-major

  bool is_passable(Cell cell) const {
    return cell.row < height && cell.col < width && passable[cell.row * width + cell.col];
  }
  std::size_t passable_count() const;
  friend bool operator==(const GridMap&, const GridMap&) = default;
};

/// MovingAI `.map`: `type octile`, `height H`, `width W`, `map`, then H rows.
/// `.` and `G` are passable; `@ O T S W` are blocked.
GridMap parse_map(std::string_view text);
std::string render_map(const GridMap& map);

enum class DelayPolicy { AllVertices, SubsetList };

struct GridGraph {
  Graph graph;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Cell> cell_of;                        // vertex -> cell
  std::vector<std::optional<VertexId>> vertex_of;   // row-major cell -> vertex

  std::optional<VertexId> vertex_at(Cell cell) const;
};

/// One vertex per passable cell (row-major order), both directions between
/// 4-connected neighbours, self-loops on every cell (AllVertices) or on the
/// listed cells (SubsetList). Throws SubsetOutOfBounds for listed cells that are
/// outside the map or blocked.
GridGraph grid_to_graph(const GridMap& map, DelayPolicy policy,
                        std::span<const Cell> subset = {});

struct ScenarioEntry {
  std::size_t bucket = 0;
  std::string map_name;
  std::size_t map_width = 0;
  std::size_t map_height = 0;
  Cell start;
  Cell goal;
  double optimal_length_hint = 0;
};

/// MovingAI `.scen` version 1. Coordinates in the file are (x = col, y = row).
std::vector<ScenarioEntry> parse_scenario(std::string_view text);

/// Throws InvariantViolation naming the first entry whose start or goal is
/// blocked or out of bounds.
void check_scenario(const GridMap& map, std::span<const ScenarioEntry> entries);

struct InjectionRecord {
  AgentId agent = 0;
  std::size_t step = 0;  // 0-based index into the undelayed path
  std::size_t length = 1;
  std::size_t conflict_step = 0;
  friend bool operator==(const InjectionRecord&, const InjectionRecord&) = default;
};

/// Everything a plan file carries. `permitted` empty means every index.
struct PlanFile {
  Graph graph;
  Plan plan;
  TailSemantics semantics = TailSemantics::StayAtGoal;
  DelayPermissions permitted;
  std::vector<DelayAssignment> delays;  // empty or one per agent
  std::vector<InjectionRecord> injections;

  DelayPermissions effective_permissions() const;
};

/// JSON with "format": "acid-plan" and "version": 1.
std::string write_plan(const PlanFile& file);
/// Throws SchemaVersionMismatch or InvariantViolation.
PlanFile read_plan(std::string_view text);

struct MetricsRow {
  std::string map;
  std::size_t instance = 0;
  std::size_t n_agents = 0;
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
  GraphMode graph_mode = GraphMode::Constrained;
  std::string solver;
  SolveStatus status = SolveStatus::Infeasible;
  double wall_ms = 0;
  double build_ms = 0;
  long long added_soc = 0;  // may be negative for OG replanning
  std::size_t delays_injected = 0;
  std::size_t conflicts_at_injection = 0;
  std::size_t expansions = 0;
};

/// Columns, in order: map, instance, n_agents, iteration, seed, graph_mode,
/// solver, success, status, wall_ms, build_ms, added_soc, delays_injected,
/// conflicts_at_injection, expansions. added_soc is blank unless solved.
std::string metrics_header();
std::string write_metrics_csv(std::span<const MetricsRow> rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace acid

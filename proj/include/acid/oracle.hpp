#pragma once

#include <optional>
#include <vector>

#include "acid/mapf.hpp"

namespace acid {

/// Simple undirected graph; edges are stored with the smaller endpoint first.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  /// Throws InvalidGraph on self-edges, duplicates or out-of-range endpoints.
  UndirectedGraph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool adjacent(VertexId u, VertexId v) const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
};

struct AcidOracleOptions {
  /// Upper end of the budget search; the (n - 1)||P|| bound is used when
  /// absent, and the smaller of the two when present.
  std::optional<std::size_t> max_budget;
  /// Guard on the number of delay slots (permitted indices usable for a wait).
  std::size_t max_slots = 24;
  /// Guard on the number of distinct search states.
  std::size_t max_states = 2'000'000;
};

struct AcidOracleResult {
  bool solvable = false;
  std::size_t min_delay = 0;
  std::vector<DelayAssignment> witness;
  std::size_t states = 0;
};

/// Exhaustive ACID solver for small instances. Every distribution of repetitions
/// over the permitted indices is visited in timestep order, trying budgets
/// 0, 1, 2, ... until one admits a collision-free plan. Throws InstanceTooLarge
/// when a guard trips.
AcidOracleResult brute_force_acid(const Graph& graph, const Plan& plan,
                                  const DelayPermissions& permitted,
                                  TailSemantics semantics,
                                  const AcidOracleOptions& options = {});

struct ColoringResult {
  std::size_t min_sum = 0;
  std::vector<std::size_t> coloring;
};

/// Minimum-sum proper coloring with colors 0..n-1. Guard: n <= 10.
ColoringResult brute_force_msc(const UndirectedGraph& graph);

bool is_proper_coloring(const UndirectedGraph& graph, const std::vector<std::size_t>& coloring);

}  // namespace acid

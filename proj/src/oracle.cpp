#include "acid/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <unordered_map>

namespace acid {

UndirectedGraph::UndirectedGraph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count) {
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count) {
      throw Error(ErrorCode::InvalidGraph, "edge endpoint out of range");
    }
    if (u == v) throw Error(ErrorCode::InvalidGraph, "self-edge at vertex " + std::to_string(u));
    if (adjacent(u, v)) {
      throw Error(ErrorCode::InvalidGraph,
                  "duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
}

bool UndirectedGraph::adjacent(VertexId u, VertexId v) const {
  const Edge key{std::min(u, v), std::max(u, v)};
  return std::find(edges_.begin(), edges_.end(), key) != edges_.end();
}

namespace {

struct IndexHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = v.size();
    for (std::uint32_t x : v) h = h * 0x100000001B3ULL ^ x;
    return h;
  }
};

// Depth-first walk over the joint path indices. At each timestep a subset of
// the unfinished agents repeats its current vertex; every other unfinished
// agent advances. Whether a configuration can still be completed depends only
// on the index vector, so failures are memoized with the budget they had.
class DelaySearch {
 public:
  DelaySearch(const Plan& plan, TailSemantics semantics,
              std::vector<std::vector<bool>> waitable, std::size_t max_states)
      : paths_(plan.paths),
        semantics_(semantics),
        waitable_(std::move(waitable)),
        max_states_(max_states) {}

  bool run(std::vector<std::uint32_t>& idx, std::size_t remaining) {
    std::vector<AgentId> unfinished;
    for (AgentId i = 0; i < idx.size(); ++i) {
      if (idx[i] + 1 < paths_[i].size()) unfinished.push_back(i);
    }
    if (unfinished.empty()) return true;
    if (auto it = failed_.find(idx); it != failed_.end() && it->second >= remaining) {
      return false;
    }

    std::vector<AgentId> candidates;
    for (AgentId i : unfinished) {
      if (waitable_[i][idx[i]]) candidates.push_back(i);
    }
    const std::size_t limit = std::min(remaining, candidates.size());
    std::vector<std::uint32_t> next(idx.size());
    for (std::size_t k = 0; k <= limit; ++k) {
      if (k == unfinished.size()) break;  // everybody waiting changes nothing
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << candidates.size()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        next = idx;
        std::vector<bool> waits(idx.size(), false);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
          if (mask >> c & 1) waits[candidates[c]] = true;
        }
        for (AgentId i : unfinished) {
          if (!waits[i]) ++next[i];
        }
        if (!step_is_safe(idx, next, unfinished)) continue;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
          if (mask >> c & 1) trail.emplace_back(candidates[c], idx[candidates[c]] + 1);
        }
        if (run(next, remaining - k)) return true;
        trail.resize(trail.size() - k);
      }
    }

    auto [it, inserted] = failed_.emplace(idx, remaining);
    if (!inserted) it->second = std::max(it->second, remaining);
    if (failed_.size() > max_states_) {
      throw Error(ErrorCode::InstanceTooLarge,
                  "search exceeded " + std::to_string(max_states_) + " states");
    }
    return false;
  }

  std::size_t states() const { return failed_.size(); }

  // (agent, 1-based index) for every repetition on the current branch
  std::vector<std::pair<AgentId, std::size_t>> trail;

 private:
  bool step_is_safe(const std::vector<std::uint32_t>& before,
                    const std::vector<std::uint32_t>& after,
                    const std::vector<AgentId>& unfinished) const {
    const bool stay = semantics_ == TailSemantics::StayAtGoal;
    std::vector<VertexId> occupied;
    for (AgentId i = 0; i < after.size(); ++i) {
      const bool done_before = before[i] + 1 >= paths_[i].size();
      if (done_before && !stay) continue;
      occupied.push_back(paths_[i][after[i]]);
    }
    std::sort(occupied.begin(), occupied.end());
    if (std::adjacent_find(occupied.begin(), occupied.end()) != occupied.end()) return false;

    for (std::size_t a = 0; a < unfinished.size(); ++a) {
      const AgentId i = unfinished[a];
      const VertexId from_i = paths_[i][before[i]];
      const VertexId to_i = paths_[i][after[i]];
      if (from_i == to_i) continue;
      for (std::size_t b = a + 1; b < unfinished.size(); ++b) {
        const AgentId j = unfinished[b];
        if (paths_[j][before[j]] == to_i && paths_[j][after[j]] == from_i) return false;
      }
    }
    return true;
  }

  const std::vector<Path>& paths_;
  TailSemantics semantics_;
  std::vector<std::vector<bool>> waitable_;
  std::size_t max_states_;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, IndexHash> failed_;
};

}  // namespace

AcidOracleResult brute_force_acid(const Graph& graph, const Plan& plan,
                                  const DelayPermissions& permitted,
                                  TailSemantics semantics,
                                  const AcidOracleOptions& options) {
  check_plan(plan, &graph);
  const std::size_t n = plan.agent_count();
  if (permitted.size() != n) {
    throw Error(ErrorCode::InvariantViolation,
                "permitted index sets do not match the number of agents");
  }
  if (n > 20) throw Error(ErrorCode::InstanceTooLarge, "too many agents for the oracle");

  // A repetition at the final index never changes any position, so only
  // earlier indices count as slots.
  std::size_t slots = 0;
  std::vector<std::vector<bool>> waitable(n);
  for (AgentId i = 0; i < n; ++i) {
    const Path& path = plan.paths[i];
    waitable[i].assign(path.size(), false);
    for (std::size_t j = 1; j < path.size(); ++j) {
      if (permitted[i].contains(j) && graph.is_delay_vertex(path[j - 1])) {
        waitable[i][j - 1] = true;
        ++slots;
      }
    }
  }
  if (slots > options.max_slots) {
    throw Error(ErrorCode::InstanceTooLarge,
                std::to_string(slots) + " delay slots exceed the guard of " +
                    std::to_string(options.max_slots));
  }

  AcidOracleResult result;
  result.witness.assign(n, DelayAssignment{});
  // Collisions at timestep 0 cannot be repaired by waiting.
  {
    std::vector<VertexId> starts;
    for (const auto& path : plan.paths) starts.push_back(path.front());
    std::sort(starts.begin(), starts.end());
    if (std::adjacent_find(starts.begin(), starts.end()) != starts.end()) return result;
  }

  std::size_t budget = (n - 1) * sum_of_costs(plan);
  if (options.max_budget) budget = std::min(budget, *options.max_budget);

  DelaySearch search(plan, semantics, std::move(waitable), options.max_states);
  std::vector<std::uint32_t> origin(n, 0);
  // One pass at the full budget settles solvability before deepening.
  if (!search.run(origin, budget)) {
    result.states = search.states();
    return result;
  }
  for (std::size_t d = 0; d <= budget; ++d) {
    search.trail.clear();
    if (!search.run(origin, d)) continue;
    result.solvable = true;
    result.min_delay = d;
    for (auto [agent, index] : search.trail) result.witness[agent].add(index);
    break;
  }
  result.states = search.states();

  const Plan repaired = apply_delays(graph, plan, permitted, result.witness);
  if (!find_conflicts(repaired, semantics, true).empty()) {
    throw Error(ErrorCode::InvariantViolation, "oracle witness collides");
  }
  return result;
}

bool is_proper_coloring(const UndirectedGraph& graph,
                        const std::vector<std::size_t>& coloring) {
  if (coloring.size() != graph.vertex_count()) return false;
  return std::none_of(graph.edges().begin(), graph.edges().end(), [&](const Edge& e) {
    return coloring[e.first] == coloring[e.second];
  });
}

namespace {

void color_from(const UndirectedGraph& graph, const std::vector<std::vector<VertexId>>& earlier,
                std::size_t v, std::size_t sum, std::vector<std::size_t>& current,
                ColoringResult& best) {
  const std::size_t n = graph.vertex_count();
  if (v == n) {
    if (sum < best.min_sum) {
      best.min_sum = sum;
      best.coloring = current;
    }
    return;
  }
  for (std::size_t c = 0; c < n && sum + c < best.min_sum; ++c) {
    const bool clash = std::any_of(earlier[v].begin(), earlier[v].end(),
                                   [&](VertexId u) { return current[u] == c; });
    if (clash) continue;
    current[v] = c;
    color_from(graph, earlier, v + 1, sum + c, current, best);
  }
}

}  // namespace

ColoringResult brute_force_msc(const UndirectedGraph& graph) {
  const std::size_t n = graph.vertex_count();
  if (n > 10) {
    throw Error(ErrorCode::InstanceTooLarge, "coloring oracle accepts at most 10 vertices");
  }
  std::vector<std::vector<VertexId>> earlier(n);
  for (auto [u, v] : graph.edges()) earlier[std::max(u, v)].push_back(std::min(u, v));

  ColoringResult best;
  best.min_sum = n * n + 1;  // above any coloring with colors < n
  std::vector<std::size_t> current(n, 0);
  color_from(graph, earlier, 0, 0, current, best);
  return best;
}

}  // namespace acid

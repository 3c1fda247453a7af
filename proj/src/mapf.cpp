#include "acid/mapf.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <tuple>

namespace acid {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::DelayNotPermitted: return "DelayNotPermitted";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownCellChar: return "UnknownCellChar";
    case ErrorCode::SubsetOutOfBounds: return "SubsetOutOfBounds";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::NotADelayOfOriginal: return "NotADelayOfOriginal";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::ThresholdTooLarge: return "ThresholdTooLarge";
    case ErrorCode::ColoringImproper: return "ColoringImproper";
    case ErrorCode::FileUnreadable: return "FileUnreadable";
  }
  return "Unknown";
}

Graph::Graph(std::size_t vertex_count, std::span<const Edge> edges)
    : out_(vertex_count) {
  for (const auto& [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count) {
      std::ostringstream msg;
      msg << "edge (" << u << "," << v << ") has an endpoint >= vertex_count "
          << vertex_count;
      throw Error(ErrorCode::InvalidGraph, msg.str());
    }
    out_[u].push_back(v);
  }
  for (VertexId u = 0; u < out_.size(); ++u) {
    auto& succ = out_[u];
    std::sort(succ.begin(), succ.end());
    if (std::adjacent_find(succ.begin(), succ.end()) != succ.end()) {
      throw Error(ErrorCode::InvalidGraph,
                  "duplicate edge out of vertex " + std::to_string(u));
    }
    edge_count_ += succ.size();
  }
}

bool Graph::has_edge(VertexId from, VertexId to) const {
  if (from >= out_.size()) return false;
  const auto& succ = out_[from];
  return std::binary_search(succ.begin(), succ.end(), to);
}

std::vector<VertexId> Graph::delay_vertices() const {
  std::vector<VertexId> result;
  for (VertexId v = 0; v < out_.size(); ++v) {
    if (is_delay_vertex(v)) result.push_back(v);
  }
  return result;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count_);
  for (VertexId u = 0; u < out_.size(); ++u) {
    for (VertexId v : out_[u]) result.emplace_back(u, v);
  }
  return result;
}

bool validate_path(const Graph& graph, const Path& path) {
  if (path.empty()) return false;
  if (path.front() >= graph.vertex_count()) return false;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (!graph.has_edge(path[k], path[k + 1])) return false;
  }
  return true;
}

Plan Plan::from_paths(std::vector<Path> paths) {
  Plan plan;
  for (const auto& path : paths) {
    plan.sources.push_back(path.empty() ? 0 : path.front());
    plan.goals.push_back(path.empty() ? 0 : path.back());
  }
  plan.paths = std::move(paths);
  return plan;
}

void check_plan(const Plan& plan, const Graph* graph) {
  const std::size_t n = plan.paths.size();
  if (n == 0) {
    throw Error(ErrorCode::InvariantViolation, "plan has no agents (n >= 1)");
  }
  if (plan.sources.size() != n || plan.goals.size() != n) {
    throw Error(ErrorCode::InvariantViolation,
                "sources/goals size differs from the number of paths");
  }
  for (AgentId i = 0; i < n; ++i) {
    const Path& path = plan.paths[i];
    const std::string who = "agent " + std::to_string(i);
    if (path.empty()) {
      throw Error(ErrorCode::InvariantViolation, who + ": path is empty");
    }
    if (path.front() != plan.sources[i]) {
      throw Error(ErrorCode::InvariantViolation,
                  who + ": path does not start at its source");
    }
    if (path.back() != plan.goals[i]) {
      throw Error(ErrorCode::InvariantViolation,
                  who + ": path does not end at its goal");
    }
    if (graph != nullptr && !validate_path(*graph, path)) {
      throw Error(ErrorCode::InvariantViolation,
                  who + ": path uses an edge missing from the graph");
    }
  }
}

std::string_view to_string(TailSemantics semantics) {
  return semantics == TailSemantics::StayAtGoal ? "stay" : "disappear";
}

std::optional<TailSemantics> parse_tail_semantics(std::string_view text) {
  if (text == "stay") return TailSemantics::StayAtGoal;
  if (text == "disappear") return TailSemantics::DisappearAtGoal;
  return std::nullopt;
}

std::optional<VertexId> position_at(const Path& path, std::size_t t,
                                    TailSemantics semantics) {
  if (t < path.size()) return path[t];
  if (semantics == TailSemantics::StayAtGoal && !path.empty()) return path.back();
  return std::nullopt;
}

namespace {

bool conflict_less(const Conflict& a, const Conflict& b) {
  return std::tuple(a.timestep, a.first, a.second, a.kind, a.from, a.to) <
         std::tuple(b.timestep, b.first, b.second, b.kind, b.from, b.to);
}

std::uint64_t edge_key(VertexId from, VertexId to) {
  return (static_cast<std::uint64_t>(from) << 32) | to;
}

}  // namespace

std::vector<Conflict> find_conflicts(std::span<const Path> paths,
                                     TailSemantics semantics, bool first_only) {
  std::size_t horizon = 0;
  for (const auto& path : paths) horizon = std::max(horizon, path.size());

  std::vector<Conflict> result;
  // (vertex or edge key, agent), sorted per timestep.
  std::vector<std::pair<std::uint64_t, AgentId>> occupants, moves;
  std::vector<Conflict> at_t;
  for (std::size_t t = 0; t < horizon; ++t) {
    occupants.clear();
    moves.clear();
    at_t.clear();
    for (AgentId i = 0; i < paths.size(); ++i) {
      const auto here = position_at(paths[i], t, semantics);
      if (!here) continue;
      occupants.emplace_back(*here, i);
      if (t + 1 < horizon) {
        const auto next = position_at(paths[i], t + 1, semantics);
        if (next && *next != *here) moves.emplace_back(edge_key(*here, *next), i);
      }
    }
    std::sort(occupants.begin(), occupants.end());
    for (std::size_t a = 0; a < occupants.size(); ++a) {
      for (std::size_t b = a + 1; b < occupants.size() && occupants[b].first == occupants[a].first; ++b) {
        const auto v = static_cast<VertexId>(occupants[a].first);
        at_t.push_back({ConflictKind::Vertex, occupants[a].second, occupants[b].second, t, v, v});
      }
    }
    std::sort(moves.begin(), moves.end());
    for (const auto& [key, i] : moves) {
      const auto here = static_cast<VertexId>(key >> 32);
      const auto next = static_cast<VertexId>(key & 0xffffffffu);
      auto it = std::lower_bound(moves.begin(), moves.end(), std::make_pair(edge_key(next, here), AgentId{0}));
      for (; it != moves.end() && it->first == edge_key(next, here) && it->second < i; ++it) {
        at_t.push_back({ConflictKind::Edge, it->second, i, t, next, here});
      }
    }
    if (at_t.empty()) continue;
    std::sort(at_t.begin(), at_t.end(), conflict_less);
    if (first_only) {
      result.push_back(at_t.front());
      return result;
    }
    result.insert(result.end(), at_t.begin(), at_t.end());
  }
  return result;
}

std::vector<Conflict> find_conflicts(const Plan& plan, TailSemantics semantics,
                                     bool first_only) {
  return find_conflicts(std::span<const Path>(plan.paths), semantics, first_only);
}

bool paths_collide(const Path& a, const Path& b, TailSemantics semantics) {
  const std::size_t horizon = std::max(a.size(), b.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto pa = position_at(a, t, semantics);
    const auto pb = position_at(b, t, semantics);
    if (!pa || !pb) {
      // One of the agents is gone for good.
      return false;
    }
    if (*pa == *pb) return true;
    if (t + 1 < horizon) {
      const auto na = position_at(a, t + 1, semantics);
      const auto nb = position_at(b, t + 1, semantics);
      if (na && nb && *pa != *na && *pa == *nb && *pb == *na) return true;
    }
  }
  return false;
}

std::size_t sum_of_costs(std::span<const Path> paths) {
  std::size_t total = 0;
  for (const auto& path : paths) total += path_cost(path);
  return total;
}

std::size_t sum_of_costs(const Plan& plan) {
  return sum_of_costs(std::span<const Path>(plan.paths));
}

std::size_t plan_length(const Plan& plan) {
  std::size_t length = 0;
  for (const auto& path : plan.paths) length = std::max(length, path_cost(path));
  return length;
}

DelayAssignment::DelayAssignment(
    std::initializer_list<std::pair<const std::size_t, std::size_t>> init) {
  for (const auto& [index, count] : init) add(index, count);
}

void DelayAssignment::add(std::size_t index, std::size_t count) {
  if (count == 0) return;
  counts_[index] += count;
  total_ += count;
}

std::size_t DelayAssignment::at(std::size_t index) const {
  auto it = counts_.find(index);
  return it == counts_.end() ? 0 : it->second;
}

DelayPermissions all_indices(const Plan& plan) {
  DelayPermissions result(plan.agent_count());
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    for (std::size_t j = 1; j <= plan.paths[i].size(); ++j) {
      result[i].insert(result[i].end(), j);
    }
  }
  return result;
}

Path apply_delays(const Graph& graph, const Path& path, const IndexSet& permitted,
                  const DelayAssignment& delays) {
  for (const auto& [index, count] : delays.counts()) {
    if (count == 0) continue;
    if (index < 1 || index > path.size() || !permitted.contains(index) ||
        !graph.is_delay_vertex(path[index - 1])) {
      throw Error(ErrorCode::DelayNotPermitted,
                  "repetition at path index " + std::to_string(index));
    }
  }
  Path result;
  result.reserve(path.size() + delays.total());
  for (std::size_t j = 1; j <= path.size(); ++j) {
    result.insert(result.end(), 1 + delays.at(j), path[j - 1]);
  }
  return result;
}

Plan apply_delays(const Graph& graph, const Plan& plan,
                  const DelayPermissions& permitted,
                  std::span<const DelayAssignment> delays) {
  if (permitted.size() != plan.agent_count() || delays.size() != plan.agent_count()) {
    throw Error(ErrorCode::InvariantViolation,
                "delay assignment count differs from the number of agents");
  }
  Plan result = plan;
  for (AgentId i = 0; i < plan.agent_count(); ++i) {
    result.paths[i] = apply_delays(graph, plan.paths[i], permitted[i], delays[i]);
  }
  return result;
}

}  // namespace acid

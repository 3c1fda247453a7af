#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>

#include "acid/solver.hpp"

namespace acid {

namespace {

std::uint64_t cell_key(VertexId v, std::size_t t) {
  return (static_cast<std::uint64_t>(t) << 32) | v;
}

}  // namespace

ConstraintTable::ConstraintTable(std::span<const Constraint> constraints) {
  for (const auto& c : constraints) add(c);
}

void ConstraintTable::add(const Constraint& c) {
  latest_ = std::max(latest_, c.timestep + 1);
  if (c.kind == ConstraintKind::VertexAt) {
    vertices_.insert(cell_key(c.from, c.timestep));
    auto [it, inserted] = last_vertex_time_.emplace(c.from, c.timestep);
    if (!inserted) it->second = std::max(it->second, c.timestep);
  } else {
    edges_.emplace(c.from, c.to, c.timestep);
  }
}

void ConstraintTable::block_from(VertexId v, std::size_t t) {
  latest_ = std::max(latest_, t + 1);
  auto [it, inserted] = blocked_from_.emplace(v, t);
  if (!inserted) it->second = std::min(it->second, t);
}

bool ConstraintTable::vertex_blocked(VertexId v, std::size_t t) const {
  if (auto it = blocked_from_.find(v); it != blocked_from_.end() && t >= it->second) {
    return true;
  }
  return vertices_.contains(cell_key(v, t));
}

bool ConstraintTable::edge_blocked(VertexId from, VertexId to, std::size_t t) const {
  return edges_.contains({from, to, t});
}

bool ConstraintTable::can_rest(VertexId v, std::size_t t) const {
  if (blocked_from_.contains(v)) return false;
  auto it = last_vertex_time_.find(v);
  return it == last_vertex_time_.end() || t > it->second;
}

Heuristic::Heuristic(const AgentEdgeGraph& instance, AgentId agent) {
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> reverse;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> goals;
  std::deque<Node> frontier;
  std::vector<Node> next;

  const Node start = instance.start(agent);
  frontier.push_back(start);
  seen.insert(start.key());
  while (!frontier.empty()) {
    const Node node = frontier.front();
    frontier.pop_front();
    if (instance.is_goal(agent, node)) goals.push_back(node.key());
    next.clear();
    instance.successors(agent, node, next);
    for (const Node& succ : next) {
      reverse[succ.key()].push_back(node.key());
      if (seen.insert(succ.key()).second) frontier.push_back(succ);
    }
  }

  std::deque<std::uint64_t> queue;
  for (std::uint64_t g : goals) {
    distance_.emplace(g, 0);
    queue.push_back(g);
  }
  while (!queue.empty()) {
    const std::uint64_t key = queue.front();
    queue.pop_front();
    const std::uint32_t d = distance_.at(key);
    auto it = reverse.find(key);
    if (it == reverse.end()) continue;
    for (std::uint64_t pred : it->second) {
      if (distance_.emplace(pred, d + 1).second) queue.push_back(pred);
    }
  }
}

std::optional<std::uint32_t> Heuristic::operator()(Node node) const {
  auto it = distance_.find(node.key());
  if (it == distance_.end()) return std::nullopt;
  return it->second;
}

namespace {

struct State {
  Node node;
  std::size_t t;
  std::size_t parent;
};

struct Entry {
  std::size_t f;
  std::size_t g;
  VertexId vertex;
  bool wait;
  std::size_t seq;
  std::size_t state;
};

struct EntryAfter {
  bool operator()(const Entry& a, const Entry& b) const {
    // true when a should be popped after b
    return std::tuple(a.f, b.g, a.vertex, a.wait, a.seq) >
           std::tuple(b.f, a.g, b.vertex, b.wait, b.seq);
  }
};

struct VisitKey {
  std::uint64_t node;
  std::size_t t;
  friend bool operator==(const VisitKey&, const VisitKey&) = default;
};

struct VisitHash {
  std::size_t operator()(const VisitKey& k) const {
    return std::hash<std::uint64_t>()(k.node * 0x9E3779B97F4A7C15ULL ^ k.t);
  }
};

}  // namespace

LowLevelResult low_level_search(const AgentEdgeGraph& instance, AgentId agent,
                                const ConstraintTable& constraints,
                                TailSemantics semantics, std::size_t horizon_cap,
                                const Heuristic* heuristic,
                                std::optional<Clock::time_point> deadline) {
  if (horizon_cap == 0) {
    throw Error(ErrorCode::InvariantViolation, "horizon must be positive");
  }
  std::optional<Heuristic> own;
  if (heuristic == nullptr) {
    own.emplace(instance, agent);
    heuristic = &*own;
  }

  LowLevelResult result;
  const Node start = instance.start(agent);
  const auto h0 = (*heuristic)(start);
  if (!h0 || *h0 > horizon_cap || constraints.vertex_blocked(start.vertex, 0)) {
    return result;
  }

  // Beyond the last constrained timestep all times look alike, so visits are
  // keyed on the clamped time; later arrivals are dominated.
  const std::size_t settle = constraints.latest() + 1;
  auto clamp = [&](std::size_t t) { return std::min(t, settle); };

  std::vector<State> states;
  std::priority_queue<Entry, std::vector<Entry>, EntryAfter> open;
  std::unordered_set<VisitKey, VisitHash> closed;
  std::size_t seq = 0;

  states.push_back({start, 0, static_cast<std::size_t>(-1)});
  open.push({*h0, 0, start.vertex, false, seq++, 0});

  std::vector<Node> next;
  while (!open.empty()) {
    const Entry entry = open.top();
    open.pop();
    const State state = states[entry.state];
    if (!closed.insert({state.node.key(), clamp(state.t)}).second) continue;
    ++result.expansions;
    if (deadline && (result.expansions & 255) == 0 && Clock::now() > *deadline) {
      result.status = LowLevelResult::Status::Timeout;
      return result;
    }

    if (instance.is_goal(agent, state.node) &&
        (semantics == TailSemantics::DisappearAtGoal ||
         constraints.can_rest(state.node.vertex, state.t))) {
      for (std::size_t s = entry.state; s != static_cast<std::size_t>(-1);
           s = states[s].parent) {
        result.path.push_back(states[s].node);
      }
      std::reverse(result.path.begin(), result.path.end());
      result.status = LowLevelResult::Status::Found;
      return result;
    }
    if (state.t >= horizon_cap) continue;

    next.clear();
    instance.successors(agent, state.node, next);
    const std::size_t t1 = state.t + 1;
    for (const Node& succ : next) {
      if (closed.contains({succ.key(), clamp(t1)})) continue;
      if (constraints.vertex_blocked(succ.vertex, t1)) continue;
      if (constraints.edge_blocked(state.node.vertex, succ.vertex, state.t)) continue;
      const auto h = (*heuristic)(succ);
      if (!h || t1 + *h > horizon_cap) continue;
      states.push_back({succ, t1, entry.state});
      open.push({t1 + *h, t1, succ.vertex, succ.vertex == state.node.vertex, seq++,
                 states.size() - 1});
    }
  }
  return result;
}

}  // namespace acid

#include <algorithm>
#include <limits>
#include <memory>
#include <queue>
#include <tuple>

#include "acid/solver.hpp"

namespace acid {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

std::vector<Path> Solution::projected() const {
  std::vector<Path> result;
  result.reserve(paths.size());
  for (const auto& path : paths) result.push_back(project(path));
  return result;
}

std::size_t default_horizon(const Plan& plan, std::optional<std::size_t> injected) {
  const std::size_t n = plan.agent_count();
  const std::size_t slack = injected ? *injected * (n > 0 ? n - 1 : 0)
                                     : (n > 0 ? n - 1 : 0) * sum_of_costs(plan);
  return std::max<std::size_t>(1, plan_length(plan) + slack);
}

namespace {

struct AgentPlan {
  NodePath nodes;
  Path vertices;
};

struct CbsNode {
  std::shared_ptr<const CbsNode> parent;
  std::optional<Constraint> constraint;
  std::vector<std::shared_ptr<const AgentPlan>> plans;
  std::size_t cost = 0;
  std::size_t conflict_count = 0;
  std::optional<Conflict> first_conflict;
  std::vector<Conflict> conflicts;
  std::size_t id = 0;
};

using NodePtr = std::shared_ptr<const CbsNode>;

struct TimedOut {};

struct NodeAfter {
  bool operator()(const NodePtr& a, const NodePtr& b) const {
    return std::tuple(a->cost, a->conflict_count, a->id) >
           std::tuple(b->cost, b->conflict_count, b->id);
  }
};

double elapsed_ms(Clock::time_point begin) {
  return std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
}

bool conflict_before(const Conflict& a, const Conflict& b) {
  return std::tuple(a.timestep, a.first, a.second, a.kind, a.from, a.to) <
         std::tuple(b.timestep, b.first, b.second, b.kind, b.from, b.to);
}

void summarize(CbsNode& node) {
  node.conflict_count = node.conflicts.size();
  node.first_conflict.reset();
  if (!node.conflicts.empty()) {
    node.first_conflict = *std::min_element(node.conflicts.begin(), node.conflicts.end(), conflict_before);
  }
}

void evaluate(CbsNode& node, TailSemantics semantics) {
  std::vector<Path> paths;
  paths.reserve(node.plans.size());
  node.cost = 0;
  for (const auto& plan : node.plans) {
    paths.push_back(plan->vertices);
    node.cost += path_cost(plan->vertices);
  }
  node.conflicts = find_conflicts(std::span<const Path>(paths), semantics);
  summarize(node);
}

// Same records find_conflicts would give for the pair lo < hi.
void pair_conflicts(const Path& a, const Path& b, AgentId lo, AgentId hi,
                    TailSemantics semantics, std::vector<Conflict>& out) {
  const std::size_t horizon = std::max(a.size(), b.size());
  const bool stay = semantics == TailSemantics::StayAtGoal;
  constexpr VertexId gone = std::numeric_limits<VertexId>::max();
  auto at = [&](const Path& p, std::size_t t) { return t < p.size() ? p[t] : stay ? p.back() : gone; };
  for (std::size_t t = 0; t < horizon; ++t) {
    const VertexId pa = at(a, t), pb = at(b, t);
    if (pa == gone || pb == gone) continue;
    if (pa == pb) {
      out.push_back({ConflictKind::Vertex, lo, hi, t, pa, pa});
      continue;
    }
    if (t + 1 >= horizon) continue;
    const VertexId na = at(a, t + 1), nb = at(b, t + 1);
    if (na != gone && nb != gone && nb != pb && pa == nb && na == pb) {
      out.push_back({ConflictKind::Edge, lo, hi, t, nb, pb});
    }
  }
}

// Only `agent` was replanned, so the other pairs keep the parent's conflicts.
void evaluate_child(CbsNode& node, const CbsNode& parent, AgentId agent, TailSemantics semantics) {
  node.cost = parent.cost - path_cost(parent.plans[agent]->vertices) +
              path_cost(node.plans[agent]->vertices);
  node.conflicts.clear();
  for (const Conflict& c : parent.conflicts) {
    if (c.first != agent && c.second != agent) node.conflicts.push_back(c);
  }
  const Path& mine = node.plans[agent]->vertices;
  for (AgentId other = 0; other < node.plans.size(); ++other) {
    if (other == agent) continue;
    const Path& theirs = node.plans[other]->vertices;
    if (other < agent) {
      pair_conflicts(theirs, mine, other, agent, semantics, node.conflicts);
    } else {
      pair_conflicts(mine, theirs, agent, other, semantics, node.conflicts);
    }
  }
  summarize(node);
}

ConstraintTable constraints_for(const NodePtr& node, const Constraint& extra) {
  ConstraintTable table;
  table.add(extra);
  for (const CbsNode* n = node.get(); n != nullptr; n = n->parent.get()) {
    if (n->constraint && n->constraint->agent == extra.agent) table.add(*n->constraint);
  }
  return table;
}

std::pair<Constraint, Constraint> split(const Conflict& c) {
  if (c.kind == ConflictKind::Vertex) {
    return {{c.first, ConstraintKind::VertexAt, c.from, c.from, c.timestep},
            {c.second, ConstraintKind::VertexAt, c.from, c.from, c.timestep}};
  }
  return {{c.first, ConstraintKind::EdgeAt, c.from, c.to, c.timestep},
          {c.second, ConstraintKind::EdgeAt, c.to, c.from, c.timestep}};
}

}  // namespace

Solution cbs_solve(const AgentEdgeGraph& instance, const SolveOptions& options) {
  const auto begin = Clock::now();
  const auto deadline =
      begin + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(options.time_limit_s));
  Solution solution;
  auto finish = [&](SolveStatus status) {
    solution.status = status;
    solution.stats.wall_ms = elapsed_ms(begin);
    return solution;
  };

  const std::size_t n = instance.agent_count();
  std::vector<std::unique_ptr<Heuristic>> heuristics(n);
  auto heuristic = [&](AgentId agent) -> const Heuristic* {
    if (!heuristics[agent]) heuristics[agent] = std::make_unique<Heuristic>(instance, agent);
    return heuristics[agent].get();
  };
  auto plan_agent = [&](AgentId agent, const ConstraintTable& table)
      -> std::optional<std::shared_ptr<const AgentPlan>> {
    ++solution.stats.low_level_calls;
    auto found = low_level_search(instance, agent, table, options.semantics,
                                  options.horizon, heuristic(agent), deadline);
    solution.stats.low_level_expansions += found.expansions;
    if (found.status == LowLevelResult::Status::Timeout) throw TimedOut{};
    if (found.status == LowLevelResult::Status::NoPath) return std::nullopt;
    auto plan = std::make_shared<AgentPlan>();
    plan->vertices = project(found.path);
    plan->nodes = std::move(found.path);
    return plan;
  };

  std::size_t next_id = 0;
  std::priority_queue<NodePtr, std::vector<NodePtr>, NodeAfter> open;
  try {
    auto root = std::make_shared<CbsNode>();
    root->id = next_id++;
    const ConstraintTable empty;
    for (AgentId agent = 0; agent < n; ++agent) {
      auto plan = plan_agent(agent, empty);
      if (!plan) return finish(SolveStatus::Infeasible);
      root->plans.push_back(std::move(*plan));
    }
    evaluate(*root, options.semantics);
    ++solution.stats.generated;
    open.push(std::move(root));

    while (!open.empty()) {
      if (Clock::now() > deadline) return finish(SolveStatus::Timeout);
      NodePtr node = open.top();
      open.pop();
      ++solution.stats.expansions;
      if (!node->first_conflict) {
        for (const auto& plan : node->plans) {
          solution.paths.push_back(plan->nodes);
        }
        solution.soc = node->cost;
        return finish(SolveStatus::Solved);
      }
      const auto [left, right] = split(*node->first_conflict);
      for (const Constraint& constraint : {left, right}) {
        auto plan = plan_agent(constraint.agent, constraints_for(node, constraint));
        if (!plan) continue;
        auto child = std::make_shared<CbsNode>();
        child->parent = node;
        child->constraint = constraint;
        child->plans = node->plans;
        child->plans[constraint.agent] = std::move(*plan);
        child->id = next_id++;
        evaluate_child(*child, *node, constraint.agent, options.semantics);
        ++solution.stats.generated;
        open.push(std::move(child));
      }
    }
  } catch (const TimedOut&) {
    return finish(SolveStatus::Timeout);
  }
  return finish(SolveStatus::Infeasible);
}

}  // namespace acid

#include "rtplan/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>

namespace rtplan {

namespace {

struct Entry {
  State state;
  std::size_t parent;
  ActionId action;
};

constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

Plan trace_back(const std::vector<Entry>& nodes, std::size_t idx) {
  Plan plan;
  for (std::size_t i = idx; nodes[i].parent != kRoot; i = nodes[i].parent) plan.actions.push_back(nodes[i].action);
  std::reverse(plan.actions.begin(), plan.actions.end());
  return plan;
}

std::optional<Plan> astar_optimal(const GroundTask& task, const State& from, std::size_t node_cap) {
  if (task.is_goal(from)) return Plan{};
  Heuristic h(task, HeuristicKind::HMax, /*memoize=*/false);
  std::vector<Entry> nodes;
  std::unordered_map<State, int, StateHash> best_g;
  // (f, -g, index): deeper nodes first among equal f.
  using Item = std::tuple<long long, int, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const Cost h0 = h.base(from);
  if (is_infinite(h0)) return std::nullopt;
  nodes.push_back({from, kRoot, 0});
  best_g.emplace(from, 0);
  open.emplace(h0, 0, 0);
  while (!open.empty()) {
    const auto [f, neg_g, idx] = open.top();
    open.pop();
    const int g = -neg_g;
    if (g > best_g.at(nodes[idx].state)) continue;
    if (task.is_goal(nodes[idx].state)) return trace_back(nodes, idx);
    const State current = nodes[idx].state;
    for (ActionId a : task.applicable_actions(current)) {
      State child = task.apply_unchecked(current, a);
      auto [it, inserted] = best_g.emplace(child, g + 1);
      if (!inserted) {
        if (it->second <= g + 1) continue;
        it->second = g + 1;
      }
      const Cost hc = h.base(child);
      if (is_infinite(hc)) continue;
      if (nodes.size() >= node_cap) throw ResourceLimit("oracle node cap exceeded");
      nodes.push_back({std::move(child), idx, a});
      open.emplace(static_cast<long long>(g + 1) + hc, -(g + 1), nodes.size() - 1);
    }
  }
  return std::nullopt;
}

Cost breadth_first_length(const GroundTask& task, const State& from, std::size_t node_cap) {
  if (task.is_goal(from)) return 0;
  std::unordered_map<State, Cost, StateHash> depth{{from, 0}};
  std::deque<State> queue{from};
  while (!queue.empty()) {
    const State s = std::move(queue.front());
    queue.pop_front();
    const Cost d = depth.at(s);
    for (ActionId a : task.applicable_actions(s)) {
      State child = task.apply_unchecked(s, a);
      if (depth.count(child)) continue;
      if (task.is_goal(child)) return d + 1;
      if (depth.size() >= node_cap) throw ResourceLimit("oracle node cap exceeded");
      depth.emplace(child, d + 1);
      queue.push_back(std::move(child));
    }
  }
  return kInfiniteCost;
}

}  // namespace

Cost optimal_length(const GroundTask& task, const State& from, OracleMethod method, std::size_t node_cap) {
  if (method == OracleMethod::BreadthFirst) return breadth_first_length(task, from, node_cap);
  const auto plan = astar_optimal(task, from, node_cap);
  return plan ? static_cast<Cost>(plan->length()) : kInfiniteCost;
}

std::optional<Plan> optimal_plan(const GroundTask& task, const State& from, std::size_t node_cap) {
  return astar_optimal(task, from, node_cap);
}

Cost goal_distance(const GroundTask& task, const Plan& partial, std::size_t node_cap) {
  const State end = execute(task, task.initial_state(), partial);
  return optimal_length(task, end, OracleMethod::AStarHMax, node_cap);
}

DistanceReport evaluate_partial_plan(const GroundTask& task, const Plan& partial, Cost optimal_from_s0,
                                     std::size_t node_cap) {
  DistanceReport r;
  r.partial_length = partial.length();
  r.goal_distance = goal_distance(task, partial, node_cap);
  if (is_infinite(r.goal_distance) || is_infinite(optimal_from_s0)) {
    r.optimum_distance = kInfiniteCost;
  } else {
    r.optimum_distance = static_cast<Cost>(r.partial_length) + r.goal_distance - optimal_from_s0;
  }
  return r;
}

Cost optimum_distance(const GroundTask& task, const Plan& partial, std::size_t node_cap) {
  const Cost opt = optimal_length(task, task.initial_state(), OracleMethod::AStarHMax, node_cap);
  return evaluate_partial_plan(task, partial, opt, node_cap).optimum_distance;
}

StateSpace explore(const GroundTask& task, const State& start, std::size_t node_cap) {
  StateSpace space;
  space.states.push_back(start);
  space.index.emplace(start, 0);
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    std::vector<std::size_t> succ;
    const State s = space.states[i];
    for (ActionId a : task.applicable_actions(s)) {
      State child = task.apply_unchecked(s, a);
      auto it = space.index.find(child);
      if (it == space.index.end()) {
        if (space.states.size() >= node_cap) throw ResourceLimit("state space exceeds node cap");
        it = space.index.emplace(child, space.states.size()).first;
        space.states.push_back(std::move(child));
      }
      succ.push_back(it->second);
    }
    space.successors.push_back(std::move(succ));
  }
  return space;
}

std::vector<Cost> goal_distances(const GroundTask& task, const StateSpace& space) {
  const std::size_t n = space.states.size();
  std::vector<std::vector<std::size_t>> predecessors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : space.successors[i]) predecessors[j].push_back(i);
  }
  std::vector<Cost> dist(n, kInfiniteCost);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (task.is_goal(space.states[i])) {
      dist[i] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t j = queue.front();
    queue.pop_front();
    for (std::size_t i : predecessors[j]) {
      if (is_infinite(dist[i])) {
        dist[i] = dist[j] + 1;
        queue.push_back(i);
      }
    }
  }
  return dist;
}

}  // namespace rtplan

#include "rtplan/baselines.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace rtplan {

const char* to_string(SelectorStatus status) {
  switch (status) {
    case SelectorStatus::ReachedGoal: return "reached_goal";
    case SelectorStatus::Timeout: return "timeout";
    case SelectorStatus::Exhausted: return "exhausted";
    case SelectorStatus::NoApplicableAction: return "no_applicable_action";
  }
  return "?";
}

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

struct Record {
  State state;
  std::uint32_t parent = kNoParent;
  ActionId action = 0;
  int g = 0;
  Cost h = 0;
  std::uint64_t tie = 0;
};

Plan path_to(const std::vector<Record>& nodes, std::uint32_t idx) {
  Plan plan;
  for (std::uint32_t i = idx; nodes[i].parent != kNoParent; i = nodes[i].parent) {
    plan.actions.push_back(nodes[i].action);
  }
  std::reverse(plan.actions.begin(), plan.actions.end());
  return plan;
}

SelectorResult finish(SelectorResult r, const BudgetTracker& tracker) {
  r.nodes_expanded = tracker.used();
  r.budget_used = tracker.used();
  r.time_used = tracker.elapsed();
  return r;
}

}  // namespace

SelectorResult astar_select(const GroundTask& task, const State& s, const Budget& budget, const Heuristic& h,
                            const LearnedTable* table, std::mt19937_64& rng, AStarTimeoutRule rule) {
  BudgetTracker tracker(budget);
  SelectorResult result;
  if (task.is_goal(s)) {
    result.reached_goal = true;
    result.status = SelectorStatus::ReachedGoal;
    return finish(result, tracker);
  }

  // (f, tie, index); smallest first.
  using Entry = std::tuple<long long, std::uint64_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<Record> nodes;
  std::unordered_map<State, int, StateHash> best_g;

  const Cost h0 = h.effective(s, table);
  if (is_infinite(h0)) {
    result.status = task.applicable_actions(s).empty() ? SelectorStatus::NoApplicableAction
                                                       : SelectorStatus::Exhausted;
    return finish(result, tracker);
  }
  nodes.push_back(Record{s, kNoParent, 0, 0, h0, rng()});
  open.emplace(h0, nodes.back().tie, 0);
  best_g.emplace(s, 0);

  std::uint32_t last_expanded = kNoParent;
  bool root_has_successors = false;
  bool timed_out = false;
  while (!open.empty()) {
    if (tracker.exhausted()) {
      timed_out = true;
      break;
    }
    const auto [f, tie, idx] = open.top();
    open.pop();
    if (nodes[idx].g > best_g.at(nodes[idx].state)) continue;  // stale entry
    if (task.is_goal(nodes[idx].state)) {
      result.plan = path_to(nodes, idx);
      result.reached_goal = true;
      result.status = SelectorStatus::ReachedGoal;
      return finish(result, tracker);
    }
    tracker.consume();
    last_expanded = idx;
    const State current = nodes[idx].state;
    const int g = nodes[idx].g + 1;
    for (ActionId a : task.applicable_actions(current)) {
      if (idx == 0) root_has_successors = true;
      State child = task.apply_unchecked(current, a);
      auto [it, inserted] = best_g.emplace(child, g);
      if (!inserted) {
        if (it->second <= g) continue;
        it->second = g;
      }
      const Cost hc = h.effective(child, table);
      if (is_infinite(hc)) continue;
      nodes.push_back(Record{std::move(child), idx, a, g, hc, rng()});
      const auto child_idx = static_cast<std::uint32_t>(nodes.size() - 1);
      open.emplace(static_cast<long long>(g) + hc, nodes.back().tie, child_idx);
    }
  }

  if (!timed_out) {
    result.status = root_has_successors ? SelectorStatus::Exhausted : SelectorStatus::NoApplicableAction;
    return finish(result, tracker);
  }

  result.status = SelectorStatus::Timeout;
  if (rule == AStarTimeoutRule::LastExpanded && last_expanded != kNoParent) {
    result.plan = path_to(nodes, last_expanded);
  }
  if (result.plan.empty()) {
    // Nothing beyond the root was expanded: fall back to the best open node.
    while (!open.empty()) {
      const auto [f, tie, idx] = open.top();
      if (nodes[idx].g <= best_g.at(nodes[idx].state)) {
        result.plan = path_to(nodes, idx);
        break;
      }
      open.pop();
    }
  }
  return finish(result, tracker);
}

SelectorResult bfs_select(const GroundTask& task, const State& s, const Budget& budget, const Heuristic& h,
                          const LearnedTable* table, std::mt19937_64& rng) {
  BudgetTracker tracker(budget);
  SelectorResult result;
  if (task.is_goal(s)) {
    result.reached_goal = true;
    result.status = SelectorStatus::ReachedGoal;
    return finish(result, tracker);
  }

  std::vector<Record> nodes;
  std::deque<std::uint32_t> frontier;
  std::unordered_set<State, StateHash> seen;
  nodes.push_back(Record{s, kNoParent, 0, 0, h.effective(s, table), rng()});
  frontier.push_back(0);
  seen.insert(s);

  bool root_has_successors = false;
  bool timed_out = false;
  while (!frontier.empty()) {
    if (tracker.exhausted()) {
      timed_out = true;
      break;
    }
    const std::uint32_t idx = frontier.front();
    frontier.pop_front();
    tracker.consume();
    const State current = nodes[idx].state;
    const int g = nodes[idx].g + 1;
    for (ActionId a : task.applicable_actions(current)) {
      if (idx == 0) root_has_successors = true;
      State child = task.apply_unchecked(current, a);
      if (!seen.insert(child).second) continue;
      const bool goal = task.is_goal(child);
      const Cost hc = h.effective(child, table);
      nodes.push_back(Record{std::move(child), idx, a, g, hc, rng()});
      const auto child_idx = static_cast<std::uint32_t>(nodes.size() - 1);
      // Goal test on generation: every depth-d node is generated before any
      // node of depth d + 1, so the first goal generated is a shallowest one.
      if (goal) {
        result.plan = path_to(nodes, child_idx);
        result.reached_goal = true;
        result.status = SelectorStatus::ReachedGoal;
        return finish(result, tracker);
      }
      frontier.push_back(child_idx);
    }
  }

  if (!timed_out) {
    result.status = root_has_successors ? SelectorStatus::Exhausted : SelectorStatus::NoApplicableAction;
    return finish(result, tracker);
  }

  result.status = SelectorStatus::Timeout;
  auto key = [&](std::uint32_t i) { return std::tuple{nodes[i].h, nodes[i].g, nodes[i].tie}; };
  const std::uint32_t best = *std::min_element(frontier.begin(), frontier.end(),
                                               [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
  result.plan = path_to(nodes, best);
  return finish(result, tracker);
}

}  // namespace rtplan

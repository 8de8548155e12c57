#include "rtplan/heuristics.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace rtplan {

namespace detail {

// Per-task adjacency used by the relaxed evaluations.
class RelaxationIndex {
 public:
  explicit RelaxationIndex(const GroundTask& task) : task_(task), users_(task.num_facts()) {
    for (ActionId a = 0; a < task.num_actions(); ++a) {
      const auto& pre = task.action(a).precond;
      if (pre.empty()) free_actions_.push_back(a);
      for (FactId f : pre) users_[f].push_back(a);
    }
    achievers_.resize(task.num_facts());
    for (ActionId a = 0; a < task.num_actions(); ++a) {
      for (FactId f : task.action(a).add) achievers_[f].push_back(a);
    }
  }

  // Layered delete-free chaining. If `goal` is given, stops once every goal
  // fact has a level.
  RelaxedPlanningGraph layers(const State& s, const State* goal) const {
    RelaxedPlanningGraph g;
    g.fact_levels.assign(task_.num_facts(), kInfiniteCost);
    g.action_levels.assign(task_.num_actions(), kInfiniteCost);
    std::vector<std::size_t> unsatisfied(task_.num_actions());
    for (ActionId a = 0; a < task_.num_actions(); ++a) unsatisfied[a] = task_.action(a).precond.size();

    std::vector<FactId> goal_facts;
    if (goal) goal_facts = goal->facts();
    std::size_t goals_open = 0;
    for (FactId f : goal_facts) {
      if (!s.contains(f)) ++goals_open;
    }

    std::vector<FactId> layer = s.facts();
    for (FactId f : layer) g.fact_levels[f] = 0;
    std::vector<ActionId> fired;
    for (Cost level = 0; !layer.empty() || (level == 0 && !free_actions_.empty()); ++level) {
      g.num_layers = static_cast<std::size_t>(level) + 1;
      if (goal && goals_open == 0) break;
      fired.clear();
      if (level == 0) {
        for (ActionId a : free_actions_) {
          g.action_levels[a] = 0;
          fired.push_back(a);
        }
      }
      for (FactId f : layer) {
        for (ActionId a : users_[f]) {
          if (--unsatisfied[a] == 0) {
            g.action_levels[a] = level;
            fired.push_back(a);
          }
        }
      }
      layer.clear();
      for (ActionId a : fired) {
        for (FactId f : task_.action(a).add) {
          if (is_infinite(g.fact_levels[f])) {
            g.fact_levels[f] = level + 1;
            layer.push_back(f);
            if (goal && goal->contains(f)) --goals_open;
          }
        }
      }
    }
    return g;
  }

  Cost max_cost(const State& s, const State& goal) const {
    if (goal.is_subset_of(s)) return 0;
    const auto g = layers(s, &goal);
    Cost worst = 0;
    for (FactId f : goal.facts()) worst = std::max(worst, g.fact_levels[f]);
    return worst;
  }

  Cost additive_cost(const State& s, const State& goal) const {
    if (goal.is_subset_of(s)) return 0;
    std::vector<Cost> cost(task_.num_facts(), kInfiniteCost);
    std::vector<bool> done(task_.num_facts(), false);
    std::vector<std::size_t> unsatisfied(task_.num_actions());
    std::vector<Cost> action_cost(task_.num_actions(), 0);
    for (ActionId a = 0; a < task_.num_actions(); ++a) unsatisfied[a] = task_.action(a).precond.size();

    using Entry = std::pair<Cost, FactId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    auto relax = [&](ActionId a) {
      const Cost c = action_cost[a] + 1;
      for (FactId f : task_.action(a).add) {
        if (c < cost[f]) {
          cost[f] = c;
          queue.emplace(c, f);
        }
      }
    };
    for (FactId f : s.facts()) {
      cost[f] = 0;
      queue.emplace(0, f);
    }
    for (ActionId a : free_actions_) relax(a);

    const auto goal_facts = goal.facts();
    std::size_t goals_open = goal_facts.size();
    while (!queue.empty() && goals_open > 0) {
      const auto [c, f] = queue.top();
      queue.pop();
      if (done[f]) continue;
      done[f] = true;
      if (goal.contains(f)) --goals_open;
      for (ActionId a : users_[f]) {
        action_cost[a] += c;
        if (--unsatisfied[a] == 0) relax(a);
      }
    }
    Cost total = 0;
    for (FactId f : goal_facts) total = saturating_add(total, cost[f]);
    return total;
  }

  // Size of a relaxed plan extracted backwards from the layered graph. Each
  // open fact takes the achiever of the earliest layer with the cheapest
  // preconditions; facts added by chosen actions count as achieved.
  Cost relaxed_plan_cost(const State& s, const State& goal) const {
    if (goal.is_subset_of(s)) return 0;
    const auto g = layers(s, &goal);
    Cost top = 0;
    for (FactId f : goal.facts()) {
      if (is_infinite(g.fact_levels[f])) return kInfiniteCost;
      top = std::max(top, g.fact_levels[f]);
    }
    std::vector<std::vector<FactId>> open(static_cast<std::size_t>(top) + 1);
    std::vector<char> achieved(task_.num_facts(), 0);
    std::vector<char> chosen(task_.num_actions(), 0);
    for (FactId f : goal.facts()) {
      if (g.fact_levels[f] > 0) open[g.fact_levels[f]].push_back(f);
    }
    Cost count = 0;
    for (Cost level = top; level > 0; --level) {
      for (std::size_t k = 0; k < open[level].size(); ++k) {
        const FactId f = open[level][k];
        if (achieved[f]) continue;
        ActionId best = 0;
        Cost best_difficulty = kInfiniteCost;
        for (ActionId a : achievers_[f]) {
          if (g.action_levels[a] != level - 1) continue;
          Cost difficulty = 0;
          for (FactId p : task_.action(a).precond) difficulty += g.fact_levels[p];
          if (difficulty < best_difficulty) {
            best_difficulty = difficulty;
            best = a;
          }
        }
        if (is_infinite(best_difficulty)) continue;  // unreachable: levels are consistent
        if (!chosen[best]) {
          chosen[best] = 1;
          ++count;
          for (FactId p : task_.action(best).precond) {
            if (g.fact_levels[p] > 0 && !achieved[p]) open[g.fact_levels[p]].push_back(p);
          }
        }
        for (FactId e : task_.action(best).add) achieved[e] = 1;
      }
    }
    return count;
  }

 private:
  const GroundTask& task_;
  std::vector<std::vector<ActionId>> users_;
  std::vector<std::vector<ActionId>> achievers_;
  std::vector<ActionId> free_actions_;
};

}  // namespace detail

using detail::RelaxationIndex;

RelaxedPlanningGraph build_rpg(const GroundTask& task, const State& s) {
  return RelaxationIndex(task).layers(s, nullptr);
}

Cost h_max(const GroundTask& task, const State& s, const State& goal) {
  return RelaxationIndex(task).max_cost(s, goal);
}

Cost h_add(const GroundTask& task, const State& s, const State& goal) {
  return RelaxationIndex(task).additive_cost(s, goal);
}

Cost h_ff(const GroundTask& task, const State& s, const State& goal) {
  return RelaxationIndex(task).relaxed_plan_cost(s, goal);
}

const Cost* LearnedTable::find(const State& s) const {
  auto it = values_.find(s);
  return it == values_.end() ? nullptr : &it->second;
}

bool LearnedTable::raise(const State& s, Cost value) {
  auto [it, inserted] = values_.emplace(s, value);
  if (inserted) return true;
  if (value > it->second) {
    it->second = value;
    return true;
  }
  return false;
}

void LearnedTable::write(std::ostream& os) const {
  std::vector<std::pair<std::size_t, Cost>> rows;
  rows.reserve(values_.size());
  for (const auto& [s, v] : values_) rows.emplace_back(s.hash(), v);
  std::sort(rows.begin(), rows.end());
  for (const auto& [h, v] : rows) {
    os << h << ' ';
    if (is_infinite(v)) {
      os << "inf";
    } else {
      os << v;
    }
    os << '\n';
  }
}

const char* to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::HMax: return "hmax";
    case HeuristicKind::HAdd: return "hadd";
    case HeuristicKind::FF: return "ff";
    case HeuristicKind::Blind: return "blind";
  }
  return "?";
}

HeuristicKind heuristic_from_string(std::string_view name) {
  if (name == "hmax") return HeuristicKind::HMax;
  if (name == "hadd") return HeuristicKind::HAdd;
  if (name == "ff") return HeuristicKind::FF;
  if (name == "blind") return HeuristicKind::Blind;
  throw std::invalid_argument("unknown heuristic '" + std::string(name) + "'");
}

Heuristic::Heuristic(const GroundTask& task, HeuristicKind kind, bool memoize)
    : Heuristic(task, task.goal(), kind, memoize) {}

Heuristic::Heuristic(const GroundTask& task, const State& goal, HeuristicKind kind, bool memoize)
    : task_(&task),
      goal_(goal),
      kind_(kind),
      memoize_(memoize),
      index_(std::make_shared<const RelaxationIndex>(task)) {}

Cost Heuristic::base(const State& s) const {
  if (memoize_) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
  }
  Cost value = 0;
  switch (kind_) {
    case HeuristicKind::HMax: value = index_->max_cost(s, goal_); break;
    case HeuristicKind::HAdd: value = index_->additive_cost(s, goal_); break;
    case HeuristicKind::FF: value = index_->relaxed_plan_cost(s, goal_); break;
    case HeuristicKind::Blind: value = goal_.is_subset_of(s) ? 0 : 1; break;
  }
  if (memoize_) memo_.emplace(s, value);
  return value;
}

Cost Heuristic::effective(const State& s, const LearnedTable* table) const {
  Cost h = base(s);
  if (table) {
    if (const Cost* learned = table->find(s)) h = std::max(h, *learned);
  }
  return h;
}

double delta(const Heuristic& h, const State& s, const LearnedTable* table) {
  const Cost c = h.effective(s, table);
  if (is_infinite(c)) return -std::numeric_limits<double>::infinity();
  return -static_cast<double>(c);
}

bool learn_update(LearnedTable& table, const State& s, Cost current_h, std::span<const Cost> children_h) {
  Cost target = kInfiniteCost;
  if (!children_h.empty()) {
    const Cost best_child = *std::min_element(children_h.begin(), children_h.end());
    target = saturating_add(best_child, 1);
  }
  const Cost updated = std::max(current_h, target);
  if (updated <= current_h) return false;
  table.raise(s, updated);
  return true;
}

}  // namespace rtplan

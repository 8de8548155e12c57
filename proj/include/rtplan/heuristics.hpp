#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rtplan/state.hpp"
#include "rtplan/task.hpp"

namespace rtplan {

namespace detail {
class RelaxationIndex;
}

// Distance in action-count units; kInfiniteCost marks a dead end.
using Cost = int;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

inline bool is_infinite(Cost c) { return c == kInfiniteCost; }
inline Cost saturating_add(Cost a, Cost b) {
  if (is_infinite(a) || is_infinite(b)) return kInfiniteCost;
  return a + b;
}

// Delete-relaxed layering: a fact's level is the first layer in which it
// holds when every applicable action fires in parallel and deletes are
// ignored. An action's level is the first layer in which it is applicable.
struct RelaxedPlanningGraph {
  std::vector<Cost> fact_levels;
  std::vector<Cost> action_levels;
  std::size_t num_layers = 0;
};

RelaxedPlanningGraph build_rpg(const GroundTask& task, const State& s);

// Admissible max-aggregation estimate.
Cost h_max(const GroundTask& task, const State& s, const State& goal);
// Additive estimate; informative but not admissible.
Cost h_add(const GroundTask& task, const State& s, const State& goal);
// Length of a relaxed plan extracted from the layered graph; not admissible.
Cost h_ff(const GroundTask& task, const State& s, const State& goal);

// Learned overlay of H values. Entries only increase.
class LearnedTable {
 public:
  bool contains(const State& s) const { return values_.count(s) > 0; }
  const Cost* find(const State& s) const;
  // Stores `value` if it exceeds the current entry; returns true on change.
  bool raise(const State& s, Cost value);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  void clear() { values_.clear(); }
  const std::unordered_map<State, Cost, StateHash>& entries() const { return values_; }

  // One "<state hash> <value>" line per entry, sorted by hash.
  void write(std::ostream& os) const;

 private:
  std::unordered_map<State, Cost, StateHash> values_;
};

enum class HeuristicKind { HMax, HAdd, FF, Blind };

const char* to_string(HeuristicKind kind);
HeuristicKind heuristic_from_string(std::string_view name);

// Base heuristic evaluator bound to a task and goal, with an optional memo.
// Not thread-safe when memoizing; each trial owns its own instance.
class Heuristic {
 public:
  Heuristic(const GroundTask& task, HeuristicKind kind, bool memoize = true);
  Heuristic(const GroundTask& task, const State& goal, HeuristicKind kind, bool memoize = true);

  HeuristicKind kind() const { return kind_; }
  bool admissible() const { return kind_ == HeuristicKind::HMax || kind_ == HeuristicKind::Blind; }
  const GroundTask& task() const { return *task_; }
  const State& goal() const { return goal_; }

  Cost base(const State& s) const;
  // max(base(s), table[s]); table may be null.
  Cost effective(const State& s, const LearnedTable* table) const;

 private:
  const GroundTask* task_;
  State goal_;
  HeuristicKind kind_;
  bool memoize_;
  std::shared_ptr<const detail::RelaxationIndex> index_;
  mutable std::unordered_map<State, Cost, StateHash> memo_;
};

// Negated effective estimate; -infinity for dead ends.
double delta(const Heuristic& h, const State& s, const LearnedTable* table);

// H(s) <- max(current_h, 1 + min(children_h)); an empty child list marks a
// dead end and stores infinity. Returns true iff the stored value rose.
bool learn_update(LearnedTable& table, const State& s, Cost current_h, std::span<const Cost> children_h);

}  // namespace rtplan

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>

#include "rtplan/budget.hpp"
#include "rtplan/heuristics.hpp"
#include "rtplan/task.hpp"

namespace rtplan {

enum class SelectorStatus {
  ReachedGoal,         // plan is a full solution from the query state
  Timeout,             // plan is a partial plan chosen when the budget ran out
  Exhausted,           // search space exhausted without reaching the goal
  NoApplicableAction,  // the query state has no successors
};

const char* to_string(SelectorStatus status);

struct SelectorResult {
  Plan plan;
  std::size_t nodes_expanded = 0;
  std::uint64_t budget_used = 0;  // iterations (MHSP) or expansions consumed
  std::chrono::nanoseconds time_used{0};
  bool reached_goal = false;
  SelectorStatus status = SelectorStatus::Timeout;
};

// Bounded-time action selection from an arbitrary state toward the task goal.
class ActionSelector {
 public:
  virtual ~ActionSelector() = default;
  virtual std::string name() const = 0;
  virtual SelectorResult select(const State& s, const Budget& budget, const LearnedTable* table) = 0;
};

}  // namespace rtplan

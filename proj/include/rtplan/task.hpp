#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rtplan/pddl.hpp"
#include "rtplan/state.hpp"

namespace rtplan {

struct GroundAction {
  std::string name;  // "(pick ball1 rooma left)"
  std::vector<FactId> precond;
  std::vector<FactId> add;
  std::vector<FactId> del;
};

class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct GroundingOptions {
  // Drop actions whose preconditions are unreachable even when deletes are
  // ignored. Such actions are never applicable in any reachable state.
  bool prune_unreachable = true;
};

struct GroundingStats {
  std::size_t substitutions = 0;  // type-consistent total bindings
  std::size_t contradictory = 0;  // bindings whose add and delete lists overlap
  std::size_t pruned = 0;         // statically inapplicable, removed when pruning
};

// A propositional STRIPS task. Immutable after grounding.
class GroundTask {
 public:
  GroundTask(std::vector<std::string> fact_names, std::vector<GroundAction> actions,
             State initial_state, State goal);

  std::size_t num_facts() const { return fact_names_.size(); }
  std::size_t num_actions() const { return actions_.size(); }

  const std::string& fact_name(FactId f) const { return fact_names_.at(f); }
  // Looks up "(at ball1 rooma)"; throws std::out_of_range when absent.
  FactId fact_id(std::string_view name) const;
  bool has_fact(std::string_view name) const;

  const GroundAction& action(ActionId a) const { return actions_.at(a); }
  const std::vector<GroundAction>& actions() const { return actions_; }
  // Throws std::out_of_range when no action has that name.
  ActionId action_id(std::string_view name) const;

  const State& initial_state() const { return initial_; }
  const State& goal() const { return goal_; }

  bool is_goal(const State& s) const { return goal_.is_subset_of(s); }
  bool applicable(const State& s, ActionId a) const { return s.contains_all(actions_[a].precond); }
  // Throws NotApplicable if the precondition does not hold.
  State apply(const State& s, ActionId a) const;
  // Caller guarantees applicability.
  State apply_unchecked(const State& s, ActionId a) const;

  std::vector<ActionId> applicable_actions(const State& s) const;

  State make_state(const std::vector<std::string>& fact_names) const;
  std::string describe(const State& s) const;

 private:
  std::vector<std::string> fact_names_;
  std::unordered_map<std::string, FactId> fact_index_;
  std::vector<GroundAction> actions_;
  std::unordered_map<std::string, ActionId> action_index_;
  State initial_;
  State goal_;
};

bool applicable(const State& s, const GroundAction& a);
// (s ∪ add) \ del. Throws NotApplicable if the precondition does not hold.
State apply(const State& s, const GroundAction& a);
bool is_goal(const State& s, const State& goal);

GroundTask ground(const pddl::DomainDef& domain, const pddl::ProblemDef& problem,
                  const GroundingOptions& options = {}, GroundingStats* stats = nullptr);

// Parse and ground in one step.
GroundTask load_task(std::string_view domain_text, std::string_view problem_text,
                     const GroundingOptions& options = {});

struct Plan {
  std::vector<ActionId> actions;

  std::size_t length() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
  friend bool operator==(const Plan&, const Plan&) = default;
};

// Replays the plan from `start`; returns the end state or throws NotApplicable.
State execute(const GroundTask& task, const State& start, const Plan& plan);
bool is_applicable_sequence(const GroundTask& task, const State& start, const Plan& plan);
std::vector<std::string> action_names(const GroundTask& task, const Plan& plan);

}  // namespace rtplan

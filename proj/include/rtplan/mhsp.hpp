#pragma once

// Mean-based heuristic search: a UCT-style tree search where leaf returns are
// negated heuristic estimates, node means are initialized optimistically from
// those estimates, and backed-up rewards are penalized by depth.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "rtplan/budget.hpp"
#include "rtplan/heuristics.hpp"
#include "rtplan/selector.hpp"
#include "rtplan/task.hpp"

namespace rtplan {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr ActionId kNoAction = std::numeric_limits<ActionId>::max();

class ExpandedTwice : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnvisitedChild : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class SelectionPolicy { Mean, Ucb };

struct MhspOptions {
  SelectionPolicy policy = SelectionPolicy::Mean;
  double ucb_c = 0.0;
  // Stop before the budget is spent once the incumbent's length equals the
  // admissible lower bound at the root (or is empty). Never changes the plan
  // returned, only the time spent.
  bool stop_when_provably_optimal = true;
};

struct SearchNode {
  State state;
  NodeId parent = kNoNode;
  ActionId action_in = kNoAction;
  NodeId first_child = kNoNode;  // children occupy [first_child, first_child + num_children)
  std::uint32_t num_children = 0;
  bool expanded = false;
  bool goal = false;
  std::uint32_t depth = 0;
  double R = 0.0;        // cumulative return
  std::int64_t V = 1;    // visit count

  double mean() const { return R / static_cast<double>(V); }
  bool has_children() const { return num_children > 0; }
};

enum class RewardSource { Goal, Expansion, Default };

struct IterationTrace {
  NodeId leaf = kNoNode;   // node where the descent stopped
  NodeId end = kNoNode;    // node backpropagation started from
  double reward = 0.0;
  RewardSource source = RewardSource::Default;
  double root_mean_before = 0.0;
};

struct ExpandResult {
  std::optional<NodeId> chosen;
  double reward = 0.0;
};

// Child description used to build trees by hand (tests, tooling).
struct ChildSpec {
  ActionId action = kNoAction;
  State state;
  double R = 0.0;
  std::int64_t V = 1;
};

class MhspTree {
 public:
  MhspTree(const GroundTask& task, const Heuristic& heuristic, const State& root_state,
           const LearnedTable* table, std::uint64_t seed, MhspOptions options = {});
  MhspTree(const GroundTask& task, const Heuristic& heuristic, std::uint64_t seed, MhspOptions options = {})
      : MhspTree(task, heuristic, task.initial_state(), nullptr, seed, options) {}

  static constexpr NodeId root() { return 0; }
  const SearchNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  std::span<const SearchNode> nodes() const { return nodes_; }

  std::uint64_t iterations() const { return iterations_; }
  std::size_t expansions() const { return expansions_; }
  const std::optional<Plan>& best_solution() const { return best_solution_; }

  // Descends by best mean (or UCB) until a goal node or a node with V = 1.
  NodeId select_leaf();
  // Root mean plus one.
  double default_reward() const;
  // Generates every successor with R = delta(child), V = 1, and picks the
  // child with maximal R. Throws ExpandedTwice if the node already has children.
  ExpandResult expand(NodeId leaf);
  // Adds (reward - i) to the i-th proper ancestor of `from` and bumps its
  // visit count; `from` itself is left untouched.
  void backpropagate(NodeId from, double reward);

  IterationTrace iterate();
  using Observer = std::function<void(const IterationTrace&)>;
  // Anytime loop; returns the shortest solution found, else the
  // most-visited partial plan.
  Plan run(const Budget& budget, const Observer& observer = {});

  Plan reconstruct_solution_plan(NodeId goal_node) const;
  Plan reconstruct_best_plan();

  NodeId select_child_by_mean(NodeId id);
  NodeId ucb_select(NodeId id, double c);

  NodeId attach_children(NodeId parent, std::span<const ChildSpec> children);
  void set_statistics(NodeId id, double R, std::int64_t V);

  // One line per node up to `max_depth`, depth-first in child order.
  void dump(std::ostream& os, std::size_t max_depth = std::numeric_limits<std::size_t>::max()) const;

 private:
  template <class Score>
  NodeId argmax_child(NodeId id, Score score);
  bool provably_optimal() const;

  const GroundTask* task_;
  const Heuristic* heuristic_;
  const LearnedTable* table_;
  MhspOptions options_;
  std::mt19937_64 rng_;
  std::vector<SearchNode> nodes_;
  std::optional<Plan> best_solution_;
  std::uint64_t iterations_ = 0;
  std::size_t expansions_ = 0;
};

// MHSP as a per-decision action selector: a fresh tree per call.
class MhspSelector : public ActionSelector {
 public:
  MhspSelector(const GroundTask& task, const Heuristic& heuristic, std::uint64_t seed, MhspOptions options = {});

  std::string name() const override { return "mhsp"; }
  SelectorResult select(const State& s, const Budget& budget, const LearnedTable* table) override;

 private:
  const GroundTask* task_;
  const Heuristic* heuristic_;
  MhspOptions options_;
  std::mt19937_64 seeds_;
};

}  // namespace rtplan

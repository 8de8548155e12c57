#include "rtplan/mhsp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace rtplan {

MhspTree::MhspTree(const GroundTask& task, const Heuristic& heuristic, const State& root_state,
                   const LearnedTable* table, std::uint64_t seed, MhspOptions options)
    : task_(&task), heuristic_(&heuristic), table_(table), options_(options), rng_(seed) {
  SearchNode root;
  root.state = root_state;
  root.goal = task.is_goal(root_state);
  root.R = delta(heuristic, root_state, table);
  root.V = 1;
  nodes_.push_back(std::move(root));
}

template <class Score>
NodeId MhspTree::argmax_child(NodeId id, Score score) {
  const SearchNode& n = nodes_[id];
  NodeId best = kNoNode;
  decltype(score(n)) best_value{};
  std::uint64_t ties = 0;
  for (NodeId c = n.first_child; c < n.first_child + n.num_children; ++c) {
    const auto v = score(nodes_[c]);
    if (best == kNoNode || v > best_value) {
      best = c;
      best_value = v;
      ties = 1;
    } else if (v == best_value) {
      // Reservoir sampling keeps each tied child with equal probability.
      ++ties;
      if (std::uniform_int_distribution<std::uint64_t>(0, ties - 1)(rng_) == 0) best = c;
    }
  }
  return best;
}

NodeId MhspTree::select_child_by_mean(NodeId id) {
  return argmax_child(id, [](const SearchNode& c) { return c.mean(); });
}

NodeId MhspTree::ucb_select(NodeId id, double c) {
  const SearchNode& n = nodes_.at(id);
  if (!n.has_children()) throw std::invalid_argument("ucb_select on a node without children");
  for (NodeId k = n.first_child; k < n.first_child + n.num_children; ++k) {
    if (nodes_[k].V <= 0) throw UnvisitedChild("ucb_select: child has no visits");
  }
  const double log_parent = std::log(static_cast<double>(n.V));
  return argmax_child(id, [&](const SearchNode& child) {
    return child.mean() + c * std::sqrt(log_parent / static_cast<double>(child.V));
  });
}

NodeId MhspTree::select_leaf() {
  NodeId s = root();
  while (!nodes_[s].goal && nodes_[s].V != 1 && nodes_[s].has_children()) {
    s = options_.policy == SelectionPolicy::Ucb ? ucb_select(s, options_.ucb_c) : select_child_by_mean(s);
  }
  return s;
}

double MhspTree::default_reward() const { return nodes_[root()].mean() + 1.0; }

ExpandResult MhspTree::expand(NodeId leaf) {
  if (nodes_.at(leaf).has_children()) throw ExpandedTwice("node already has children");
  const State parent_state = nodes_[leaf].state;
  const std::uint32_t depth = nodes_[leaf].depth + 1;
  const auto first = static_cast<NodeId>(nodes_.size());
  for (ActionId a : task_->applicable_actions(parent_state)) {
    SearchNode child;
    child.state = task_->apply_unchecked(parent_state, a);
    child.goal = task_->is_goal(child.state);
    child.parent = leaf;
    child.action_in = a;
    child.depth = depth;
    child.R = delta(*heuristic_, child.state, table_);
    child.V = 1;
    nodes_.push_back(std::move(child));
  }
  SearchNode& n = nodes_[leaf];
  n.expanded = true;
  n.num_children = static_cast<std::uint32_t>(nodes_.size() - first);
  n.first_child = n.num_children > 0 ? first : kNoNode;
  ++expansions_;

  ExpandResult result;
  if (!n.has_children()) {
    result.reward = default_reward();
    return result;
  }
  const NodeId chosen = argmax_child(leaf, [](const SearchNode& c) { return c.R; });
  result.chosen = chosen;
  result.reward = nodes_[chosen].R;
  return result;
}

void MhspTree::backpropagate(NodeId from, double reward) {
  double i = 0.0;
  NodeId s = from;
  while (s != root()) {
    s = nodes_.at(s).parent;
    nodes_[s].R += reward - i;
    nodes_[s].V += 1;
    i += 1.0;
  }
}

IterationTrace MhspTree::iterate() {
  IterationTrace trace;
  trace.root_mean_before = nodes_[root()].mean();
  const NodeId leaf = select_leaf();
  trace.leaf = leaf;
  trace.end = leaf;
  trace.reward = default_reward();
  trace.source = RewardSource::Default;
  if (nodes_[leaf].goal) {
    trace.reward = 0.0;
    trace.source = RewardSource::Goal;
  } else if (nodes_[leaf].V == 1) {
    // A dead-end leaf keeps V = 1 and no children; re-expanding it is harmless.
    const ExpandResult r = nodes_[leaf].has_children() ? ExpandResult{} : expand(leaf);
    if (r.chosen) {
      trace.end = *r.chosen;
      trace.reward = r.reward;
      trace.source = RewardSource::Expansion;
    }
  }
  backpropagate(trace.end, trace.reward);
  ++iterations_;

  if (nodes_[trace.end].goal) {
    Plan candidate = reconstruct_solution_plan(trace.end);
    if (!best_solution_ || candidate.length() < best_solution_->length()) best_solution_ = std::move(candidate);
  }
  return trace;
}

bool MhspTree::provably_optimal() const {
  if (!best_solution_) return false;
  if (best_solution_->empty()) return true;
  if (!heuristic_->admissible()) return false;
  const Cost lower = heuristic_->effective(nodes_[root()].state, table_);
  return !is_infinite(lower) && best_solution_->length() <= static_cast<std::size_t>(lower);
}

Plan MhspTree::run(const Budget& budget, const Observer& observer) {
  BudgetTracker tracker(budget);
  while (!tracker.exhausted()) {
    if (options_.stop_when_provably_optimal && provably_optimal()) break;
    const IterationTrace trace = iterate();
    tracker.consume();
    if (observer) observer(trace);
  }
  if (best_solution_) return *best_solution_;
  return reconstruct_best_plan();
}

Plan MhspTree::reconstruct_solution_plan(NodeId goal_node) const {
  Plan plan;
  for (NodeId s = goal_node; s != root(); s = nodes_.at(s).parent) plan.actions.push_back(nodes_[s].action_in);
  std::reverse(plan.actions.begin(), plan.actions.end());
  return plan;
}

Plan MhspTree::reconstruct_best_plan() {
  Plan plan;
  NodeId s = root();
  while (nodes_[s].V > 1 && nodes_[s].has_children()) {
    // Most visits, then best mean, then a seeded coin.
    s = argmax_child(s, [](const SearchNode& c) { return std::pair{static_cast<double>(c.V), c.mean()}; });
    plan.actions.push_back(nodes_[s].action_in);
  }
  return plan;
}

NodeId MhspTree::attach_children(NodeId parent, std::span<const ChildSpec> children) {
  if (nodes_.at(parent).has_children()) throw ExpandedTwice("node already has children");
  const auto first = static_cast<NodeId>(nodes_.size());
  const std::uint32_t depth = nodes_[parent].depth + 1;
  for (const auto& spec : children) {
    SearchNode child;
    child.state = spec.state;
    child.goal = task_->is_goal(spec.state);
    child.parent = parent;
    child.action_in = spec.action;
    child.depth = depth;
    child.R = spec.R;
    child.V = spec.V;
    nodes_.push_back(std::move(child));
  }
  SearchNode& n = nodes_[parent];
  n.expanded = true;
  n.num_children = static_cast<std::uint32_t>(children.size());
  n.first_child = n.num_children > 0 ? first : kNoNode;
  return n.first_child;
}

void MhspTree::set_statistics(NodeId id, double R, std::int64_t V) {
  SearchNode& n = nodes_.at(id);
  n.R = R;
  n.V = V;
}

void MhspTree::dump(std::ostream& os, std::size_t max_depth) const {
  std::vector<NodeId> stack{root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const SearchNode& n = nodes_[id];
    os << std::string(2 * n.depth, ' ') << id << " hash=" << n.state.hash() << " R=" << n.R << " V=" << n.V
       << " mean=" << n.mean() << " children=" << n.num_children;
    if (n.action_in != kNoAction) os << " action=" << task_->action(n.action_in).name;
    os << '\n';
    if (n.depth >= max_depth || !n.has_children()) continue;
    for (NodeId c = n.first_child + n.num_children; c-- > n.first_child;) stack.push_back(c);
  }
}

MhspSelector::MhspSelector(const GroundTask& task, const Heuristic& heuristic, std::uint64_t seed,
                           MhspOptions options)
    : task_(&task), heuristic_(&heuristic), options_(options), seeds_(seed) {}

SelectorResult MhspSelector::select(const State& s, const Budget& budget, const LearnedTable* table) {
  const auto start = BudgetTracker::Clock::now();
  MhspTree tree(*task_, *heuristic_, s, table, seeds_(), options_);
  SelectorResult result;
  result.plan = tree.run(budget);
  result.nodes_expanded = tree.expansions();
  result.budget_used = tree.iterations();
  result.reached_goal = tree.best_solution().has_value();
  if (result.reached_goal) {
    result.status = SelectorStatus::ReachedGoal;
  } else if (tree.node(MhspTree::root()).expanded && !tree.node(MhspTree::root()).has_children()) {
    result.status = SelectorStatus::NoApplicableAction;
  } else {
    result.status = SelectorStatus::Timeout;
  }
  result.time_used = BudgetTracker::Clock::now() - start;
  return result;
}

}  // namespace rtplan

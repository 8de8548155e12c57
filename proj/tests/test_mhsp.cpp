#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "rtplan/mhsp.hpp"
#include "rtplan/oracle.hpp"
#include "support/fixtures.hpp"

using namespace rtplan;

#define GOLDEN_PREFIX \
  "(pick ball1 rooma left) (pick ball2 rooma right) (move rooma roomb) (drop ball1 roomb left) (drop ball2 roomb right) "

namespace {

std::vector<ChildSpec> specs(const State& s, std::initializer_list<std::pair<double, std::int64_t>> rv,
                             ActionId first_action = 0) {
  std::vector<ChildSpec> out;
  ActionId a = first_action;
  for (const auto& [R, V] : rv) out.push_back(ChildSpec{a++, s, R, V});
  return out;
}

std::string dump(const MhspTree& tree) {
  std::ostringstream os;
  tree.dump(os);
  return os.str();
}

}  // namespace

TEST_CASE("tree initialization") {
  const auto g5 = fixtures::gripper(5);
  const Heuristic h5(g5, HeuristicKind::HMax);
  const MhspTree t(g5, h5, 1);
  CHECK(t.node(MhspTree::root()).R == -2.0);
  CHECK(t.node(MhspTree::root()).V == 1);
  CHECK(t.size() == 1);
  CHECK_FALSE(t.best_solution());

  const auto chain = fixtures::chain(2);
  const Heuristic hc(chain, HeuristicKind::HMax);
  const MhspTree at_goal(chain, hc, chain.goal(), nullptr, 1);
  CHECK(at_goal.node(0).R == 0.0);

  const auto stuck = load_task("(define (domain z) (:predicates (p) (q)))",
                               "(define (problem z1) (:domain z) (:init (p)) (:goal (q)))");
  const Heuristic hs(stuck, HeuristicKind::HMax);
  const MhspTree dead(stuck, hs, 1);
  CHECK(std::isinf(dead.node(0).R));
  CHECK(dead.node(0).R < 0);
}

TEST_CASE("select_leaf") {
  const auto task = fixtures::chain(3);
  const Heuristic h(task, HeuristicKind::HMax);
  const State s = task.initial_state();

  SUBCASE("fresh tree returns the root") {
    MhspTree t(task, h, 1);
    CHECK(t.select_leaf() == MhspTree::root());
  }
  SUBCASE("two children: descends through the better mean") {
    MhspTree t(task, h, 1);
    const NodeId first = t.attach_children(0, specs(s, {{-2.0, 1}, {-5.0, 1}}));
    t.set_statistics(0, -7.0, 3);
    CHECK(t.select_leaf() == first);
  }
  SUBCASE("three-level hand-built tree") {
    MhspTree t(task, h, 1);
    t.set_statistics(0, -20.0, 10);
    const NodeId a = t.attach_children(0, specs(s, {{-6.0, 3}, {-4.0, 1}}));  // means -2, -4
    const NodeId a1 = t.attach_children(a, specs(s, {{-2.0, 2}, {-3.0, 1}}));  // means -1, -3
    const NodeId leaf = t.attach_children(a1, specs(s, {{-2.0, 1}, {-1.0, 1}})) + 1;
    CHECK(t.select_leaf() == leaf);
  }
}

TEST_CASE("default reward is root mean plus one") {
  const auto task = fixtures::chain(3);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree t(task, h, 1);
  CHECK(t.default_reward() == -2.0);  // root R = -3, V = 1
  t.set_statistics(0, -10.0, 4);
  CHECK(t.default_reward() == -1.5);
  t.set_statistics(0, 0.0, 1);
  CHECK(t.default_reward() == 1.0);
}

TEST_CASE("expand creates one child per applicable action") {
  const auto task = fixtures::fan();
  const Heuristic h(task, HeuristicKind::Blind);
  LearnedTable table;
  const State s0 = task.initial_state();
  auto child_state = [&](const char* action) { return task.apply(s0, task.action_id(action)); };
  table.raise(child_state("(to-a)"), 2);
  table.raise(child_state("(to-b)"), 4);
  table.raise(child_state("(to-c)"), 4);

  MhspTree t(task, h, s0, &table, 3);
  const ExpandResult r = t.expand(0);
  const auto& root = t.node(0);
  CHECK(root.num_children == 3);
  REQUIRE(r.chosen);
  CHECK(t.node(*r.chosen).action_in == task.action_id("(to-a)"));
  CHECK(r.reward == -2.0);
  for (NodeId c = root.first_child; c < root.first_child + 3; ++c) {
    CHECK(t.node(c).V == 1);
    CHECK(t.node(c).parent == 0);
    CHECK(t.node(c).depth == 1);
  }
  CHECK_THROWS_AS(t.expand(0), ExpandedTwice);
}

TEST_CASE("expand at a dead end returns the default reward") {
  const auto task = load_task("(define (domain z) (:predicates (p) (q)))",
                              "(define (problem z1) (:domain z) (:init (p)) (:goal (q)))");
  const Heuristic h(task, HeuristicKind::Blind);
  MhspTree t(task, h, 1);
  const ExpandResult r = t.expand(0);
  CHECK_FALSE(r.chosen);
  CHECK(r.reward == t.default_reward());
}

TEST_CASE("gripper(2) root has five successors") {
  const auto task = fixtures::gripper(2);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree t(task, h, 1);
  t.expand(0);
  CHECK(t.node(0).num_children == 5);
}

TEST_CASE("backpropagation hand traces") {
  const auto task = fixtures::chain(3);
  const Heuristic h(task, HeuristicKind::HMax);
  const State s = task.initial_state();

  SUBCASE("direct child of the root") {
    MhspTree t(task, h, 1);
    const NodeId c = t.attach_children(0, specs(s, {{-1.0, 1}}));
    t.backpropagate(c, -2.0);
    CHECK(t.node(0).R == -5.0);
    CHECK(t.node(0).V == 2);
    CHECK(t.node(c).R == -1.0);
    CHECK(t.node(c).V == 1);
  }
  SUBCASE("depth-3 node with reward 0") {
    MhspTree t(task, h, 1);
    const NodeId d1 = t.attach_children(0, specs(s, {{-2.0, 1}}));
    const NodeId d2 = t.attach_children(d1, specs(s, {{-1.0, 1}}));
    const NodeId d3 = t.attach_children(d2, specs(s, {{0.0, 1}}));
    t.backpropagate(d3, 0.0);
    CHECK(t.node(d2).R == -1.0);  // +0 - 0
    CHECK(t.node(d1).R == -3.0);  // +0 - 1
    CHECK(t.node(0).R == -5.0);   // +0 - 2
    CHECK(t.node(d3).V == 1);
    CHECK(t.node(d2).V == 2);
    CHECK(t.node(d1).V == 2);
    CHECK(t.node(0).V == 2);
  }
  SUBCASE("from the root nothing changes") {
    MhspTree t(task, h, 1);
    t.backpropagate(0, -4.0);
    CHECK(t.node(0).R == -3.0);
    CHECK(t.node(0).V == 1);
  }
}

TEST_CASE("plan reconstruction") {
  const auto task = fixtures::chain(3);
  const Heuristic h(task, HeuristicKind::HMax);
  const State s = task.initial_state();
  MhspTree t(task, h, 1);
  CHECK(t.reconstruct_best_plan().empty());
  CHECK(t.reconstruct_solution_plan(0).empty());

  const NodeId d1 = t.attach_children(0, specs(s, {{-2.0, 5}, {-1.0, 2}}, 0));
  const NodeId d2 = t.attach_children(d1, specs(s, {{-1.0, 1}}, 1));
  const NodeId d3 = t.attach_children(d2, specs(s, {{0.0, 1}}, 2));
  t.set_statistics(0, -8.0, 8);
  CHECK(t.reconstruct_solution_plan(d3) == Plan{{0, 1, 2}});
  CHECK(t.reconstruct_solution_plan(d1) == Plan{{0}});
  // V = 5 beats the better mean of the V = 2 sibling; d1's only child has V = 1.
  CHECK(t.reconstruct_best_plan() == Plan{{0, 1}});
}

TEST_CASE("run: trivial and generous budgets") {
  const auto chain = fixtures::chain(2);
  const Heuristic hc(chain, HeuristicKind::HMax);
  MhspTree at_goal(chain, hc, chain.goal(), nullptr, 1);
  CHECK(at_goal.run(Budget::iterations(50)).empty());

  const auto task = fixtures::gripper(2);
  const Heuristic h(task, HeuristicKind::HMax);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    MhspTree t(task, h, seed);
    const Plan p = t.run(Budget::iterations(20000));
    CHECK(task.is_goal(execute(task, task.initial_state(), p)));
    CHECK(p.length() == 5);
  }
}

TEST_CASE("run: tiny budget returns an applicable partial plan") {
  const auto task = fixtures::gripper(3);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree t(task, h, 4);
  const Plan p = t.run(Budget::iterations(3));
  CHECK_FALSE(t.best_solution());
  CHECK(is_applicable_sequence(task, task.initial_state(), p));
  CHECK(t.iterations() == 3);
}

TEST_CASE("tree invariants during a run") {
  const auto task = fixtures::gripper(3);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree t(task, h, 11, {.stop_when_provably_optimal = false});
  std::size_t last_len = static_cast<std::size_t>(-1);
  std::uint64_t count = 0;
  t.run(Budget::iterations(3000), [&](const IterationTrace& tr) {
    ++count;
    CHECK(t.node(0).V == static_cast<std::int64_t>(1 + count));
    if (tr.source == RewardSource::Default) CHECK(tr.reward == tr.root_mean_before + 1.0);
    if (t.best_solution()) {
      CHECK(t.best_solution()->length() <= last_len);
      last_len = t.best_solution()->length();
    }
  });
  CHECK(t.iterations() == 3000);
  for (NodeId id = 1; id < t.size(); ++id) {
    const auto& n = t.node(id);
    const auto& p = t.node(n.parent);
    CHECK(id >= p.first_child);
    CHECK(id < p.first_child + p.num_children);
    CHECK(n.V >= 1);
    CHECK(n.mean() <= 0.0);
  }
  REQUIRE(t.best_solution());
  CHECK(task.is_goal(execute(task, task.initial_state(), *t.best_solution())));
}

TEST_CASE("equal seeds give identical trees") {
  const auto task = fixtures::gripper(2);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree a(task, h, 99), b(task, h, 99);
  a.run(Budget::iterations(100));
  b.run(Budget::iterations(100));
  CHECK(dump(a) == dump(b));
  CHECK(a.reconstruct_best_plan() == b.reconstruct_best_plan());
}

TEST_CASE("golden prefix after 100 iterations on gripper(2)") {
  const auto task = fixtures::gripper(2);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree t(task, h, 2024, {.stop_when_provably_optimal = false});
  t.run(Budget::iterations(100));
  const auto names = action_names(task, t.reconstruct_best_plan());
  std::string joined;
  for (const auto& n : names) joined += n + " ";
  CHECK(joined == GOLDEN_PREFIX);
}

TEST_CASE("UCB selection") {
  const auto task = fixtures::chain(3);
  const Heuristic h(task, HeuristicKind::HMax);
  const State s = task.initial_state();

  MhspTree t(task, h, 1);
  const NodeId first = t.attach_children(0, specs(s, {{-20.0, 10}, {-3.0, 1}}));
  t.set_statistics(0, -30.0, 11);
  CHECK(t.ucb_select(0, 2.0) == first + 1);
  CHECK(t.ucb_select(0, 0.0) == first);
  CHECK(t.select_child_by_mean(0) == first);

  MhspTree single(task, h, 1);
  const NodeId only = single.attach_children(0, specs(s, {{-4.0, 1}}));
  single.set_statistics(0, -4.0, 2);
  CHECK(single.ucb_select(0, 5.0) == only);

  MhspTree unvisited(task, h, 1);
  const NodeId u = unvisited.attach_children(0, specs(s, {{-1.0, 1}, {-1.0, 1}}));
  unvisited.set_statistics(u + 1, 0.0, 0);
  CHECK_THROWS_AS(unvisited.ucb_select(0, 1.0), UnvisitedChild);
}

TEST_CASE("UCB mode still solves small tasks") {
  const auto task = fixtures::gripper(2);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree t(task, h, 5, {.policy = SelectionPolicy::Ucb, .ucb_c = 0.5});
  const Plan p = t.run(Budget::iterations(20000));
  CHECK(task.is_goal(execute(task, task.initial_state(), p)));
}

TEST_CASE("selector wraps a fresh tree per call") {
  const auto task = fixtures::gripper(2);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspSelector sel(task, h, 3);
  const auto r = sel.select(task.initial_state(), Budget::iterations(20000), nullptr);
  CHECK(r.reached_goal);
  CHECK(r.status == SelectorStatus::ReachedGoal);
  CHECK(r.plan.length() == 5);
  CHECK(r.budget_used <= 20000);
  const auto small = sel.select(task.initial_state(), Budget::iterations(2), nullptr);
  CHECK(small.status == SelectorStatus::Timeout);
  CHECK(small.budget_used == 2);
  CHECK(sel.select(task.goal(), Budget::iterations(5), nullptr).plan.empty());
}

TEST_CASE("wall-clock budget terminates") {
  const auto task = fixtures::gripper(4);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspTree t(task, h, 1);
  const Plan p = t.run(Budget::millis(20));
  CHECK(is_applicable_sequence(task, task.initial_state(), p));
  CHECK(t.iterations() > 0);
}

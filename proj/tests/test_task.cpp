#include <doctest.h>

#include <set>
#include <unordered_set>

#include "rtplan/oracle.hpp"
#include "rtplan/pddl.hpp"
#include "rtplan/task.hpp"
#include "support/fixtures.hpp"
#include "support/sims.hpp"

using namespace rtplan;

namespace {

std::set<std::set<std::string>> reachable_fact_sets(const GroundTask& task) {
  const auto space = explore(task, task.initial_state());
  std::set<std::set<std::string>> out;
  for (const auto& s : space.states) out.insert(fixtures::fact_names(task, s));
  return out;
}

}  // namespace

TEST_CASE("gripper(2) grounds to 18 actions") {
  const auto inst = generate_gripper(2);
  const auto d = pddl::parse_domain(inst.domain);
  const auto p = pddl::parse_problem(inst.problem, d);
  GroundingStats stats;
  const auto task = ground(d, p, {.prune_unreachable = false}, &stats);
  CHECK(task.num_actions() == 18);
  // 4 move bindings, two of them move a room onto itself.
  CHECK(stats.contradictory == 2);
  CHECK(stats.substitutions == 4 + 8 + 8);
  CHECK(fixtures::gripper(2).num_actions() == 18);
}

TEST_CASE("IPC gripper prob01 grounds and needs 11 steps") {
  const auto task = load_task(pddl::read_file(RTPLAN_DATA_DIR "/gripper/domain.pddl"),
                              pddl::read_file(RTPLAN_DATA_DIR "/gripper/prob01.pddl"));
  CHECK(task.num_actions() == 2 + 16 + 16);
  CHECK(optimal_length(task, task.initial_state()) == sim::optimal_from_initial(sim::Gripper{4}));
  CHECK(optimal_length(task, task.initial_state()) == 11);
}

TEST_CASE("zero-operator domain grounds to no actions") {
  const auto task = load_task("(define (domain z) (:predicates (p)))",
                              "(define (problem z1) (:domain z) (:init (p)) (:goal (p)))");
  CHECK(task.num_actions() == 0);
  CHECK(task.is_goal(task.initial_state()));
}

TEST_CASE("gripper(5) goal has 5 facts") {
  const auto task = fixtures::gripper(5);
  CHECK(task.goal().size() == 5);
  CHECK_FALSE(task.is_goal(task.initial_state()));
}

TEST_CASE("applicable and apply on gripper(2)") {
  const auto task = fixtures::gripper(2);
  const State s0 = task.initial_state();
  const ActionId pick = task.action_id("(pick ball1 rooma left)");
  CHECK(task.applicable(s0, pick));
  const State s1 = task.apply(s0, pick);
  CHECK(s1.contains(task.fact_id("(carry ball1 left)")));
  CHECK_FALSE(s1.contains(task.fact_id("(at ball1 rooma)")));
  CHECK_FALSE(s1.contains(task.fact_id("(free left)")));
  CHECK(s0.contains(task.fact_id("(at ball1 rooma)")));  // input untouched

  const ActionId there = task.action_id("(move rooma roomb)");
  const ActionId back = task.action_id("(move roomb rooma)");
  CHECK(task.apply(task.apply(s0, there), back) == s0);

  CHECK_FALSE(task.applicable(State(task.num_facts()), pick));
  CHECK_THROWS_AS(task.apply(State(task.num_facts()), pick), NotApplicable);
}

TEST_CASE("free-function STRIPS semantics") {
  const State s(4, std::vector<FactId>{0, 1});
  const GroundAction noop{"(noop)", {}, {}, {}};
  CHECK(applicable(s, noop));
  CHECK(apply(s, noop) == s);
  const GroundAction a{"(a)", {0}, {2}, {1}};
  CHECK(apply(s, a) == State(4, std::vector<FactId>{0, 2}));
  CHECK_FALSE(applicable(State(4), a));
  CHECK(is_goal(s, State(4)));
  CHECK(is_goal(s, s));
  CHECK_FALSE(is_goal(State(4), s));
}

TEST_CASE("apply is deterministic and respects add/delete on every reachable state") {
  const auto task = fixtures::gripper(2);
  const auto space = explore(task, task.initial_state());
  for (const auto& s : space.states) {
    for (ActionId a : task.applicable_actions(s)) {
      const State t = task.apply(s, a);
      CHECK(t == task.apply(s, a));
      for (FactId f : task.action(a).add) CHECK(t.contains(f));
      for (FactId f : task.action(a).del) CHECK_FALSE(t.contains(f));
    }
  }
}

TEST_CASE("grounded actions never add and delete the same fact") {
  for (const auto& task : {fixtures::gripper(3), fixtures::ferry(3), fixtures::corridor(4)}) {
    for (const auto& a : task.actions()) {
      for (FactId f : a.add) {
        CHECK(std::find(a.del.begin(), a.del.end(), f) == a.del.end());
      }
    }
  }
}

TEST_CASE("reachable states match the hand-written gripper simulator") {
  for (int n = 1; n <= 3; ++n) {
    const sim::Gripper g{n};
    std::set<std::set<std::string>> expected;
    for (auto k : sim::reachable(g)) expected.insert(g.facts(k));
    CHECK(reachable_fact_sets(fixtures::gripper(n)) == expected);
  }
}

TEST_CASE("static pruning is observationally invisible") {
  const auto inst = generate_gripper(2);
  const auto d = pddl::parse_domain(inst.domain);
  const auto p = pddl::parse_problem(inst.problem, d);
  const auto pruned = ground(d, p, {.prune_unreachable = true});
  const auto full = ground(d, p, {.prune_unreachable = false});
  CHECK(reachable_fact_sets(pruned) == reachable_fact_sets(full));

  // Untyped IPC gripper: type predicates prune ill-typed bindings.
  const auto ipc_d = pddl::parse_domain(pddl::read_file(RTPLAN_DATA_DIR "/gripper/domain.pddl"));
  const auto ipc_p = pddl::parse_problem(pddl::read_file(RTPLAN_DATA_DIR "/gripper/prob01.pddl"), ipc_d);
  GroundingStats stats;
  const auto ipc = ground(ipc_d, ipc_p, {}, &stats);
  CHECK(stats.pruned > 0);
  CHECK(reachable_fact_sets(ipc) == reachable_fact_sets(ground(ipc_d, ipc_p, {.prune_unreachable = false})));
}

TEST_CASE("plan replay") {
  const auto task = fixtures::gripper(1);
  Plan plan{{task.action_id("(pick ball1 rooma left)"), task.action_id("(move rooma roomb)"),
             task.action_id("(drop ball1 roomb left)")}};
  CHECK(task.is_goal(execute(task, task.initial_state(), plan)));
  CHECK(is_applicable_sequence(task, task.initial_state(), plan));
  CHECK(action_names(task, plan).front() == "(pick ball1 rooma left)");
  std::swap(plan.actions[0], plan.actions[2]);
  CHECK_FALSE(is_applicable_sequence(task, task.initial_state(), plan));
  CHECK_THROWS_AS(execute(task, task.initial_state(), plan), NotApplicable);
}

TEST_CASE("fact and action lookups") {
  const auto task = fixtures::gripper(1);
  CHECK(task.has_fact("(at ball1 rooma)"));
  CHECK_FALSE(task.has_fact("(at ball9 rooma)"));
  CHECK_THROWS_AS(task.fact_id("(nope)"), std::out_of_range);
  CHECK_THROWS_AS(task.action_id("(nope)"), std::out_of_range);
  const State s = task.make_state({"(at-robby rooma)"});
  CHECK(s.size() == 1);
  CHECK(task.describe(s).find("at-robby") != std::string::npos);
}

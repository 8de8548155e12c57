#include <doctest.h>

#include "rtplan/agent.hpp"
#include "rtplan/oracle.hpp"
#include "support/fixtures.hpp"

using namespace rtplan;

namespace {

class ConstantSelector : public ActionSelector {
 public:
  explicit ConstantSelector(Plan plan) : plan_(std::move(plan)) {}
  std::string name() const override { return "constant"; }
  SelectorResult select(const State&, const Budget&, const LearnedTable*) override {
    SelectorResult r;
    r.plan = plan_;
    r.budget_used = 1;
    return r;
  }

 private:
  Plan plan_;
};

// Alternates between moving to room B and back.
class ShuttleSelector : public ActionSelector {
 public:
  explicit ShuttleSelector(const GroundTask& task) : task_(task) {}
  std::string name() const override { return "shuttle"; }
  SelectorResult select(const State& s, const Budget&, const LearnedTable*) override {
    SelectorResult r;
    const bool in_a = s.contains(task_.fact_id("(at-robby rooma)"));
    r.plan.actions.push_back(task_.action_id(in_a ? "(move rooma roomb)" : "(move roomb rooma)"));
    return r;
  }

 private:
  const GroundTask& task_;
};

AgentConfig config(SelectorKind kind, Budget budget, std::size_t max_steps = 100) {
  AgentConfig cfg;
  cfg.selector = kind;
  cfg.decision = budget;
  cfg.max_steps = max_steps;
  return cfg;
}

}  // namespace

TEST_CASE("episode from a goal state takes no steps") {
  const auto task = load_task("(define (domain z) (:predicates (p)))",
                              "(define (problem z1) (:domain z) (:init (p)) (:goal (p)))");
  ConstantSelector sel(Plan{});
  const auto r = run_episode(task, sel, config(SelectorKind::Mhsp, Budget::iterations(1)), nullptr);
  CHECK(r.success);
  CHECK(r.plan_length == 0);
  CHECK(r.steps_taken == 0);
  CHECK(r.visited.size() == 1);
}

TEST_CASE("MHSP solves gripper(2) optimally within a decision time") {
  const auto task = fixtures::gripper(2);
  const Heuristic h(task, HeuristicKind::HMax);
  MhspSelector sel(task, h, 1);
  const auto r = run_episode(task, sel, config(SelectorKind::Mhsp, Budget::millis(50)), nullptr);
  CHECK(r.success);
  CHECK(r.plan_length == 5);
  CHECK(r.visited.size() == 6);
  CHECK(task.is_goal(execute(task, task.initial_state(), r.executed)));
}

TEST_CASE("a reversible stub selector fails at max_steps") {
  const auto task = fixtures::gripper(2);
  ShuttleSelector sel(task);
  const auto r = run_episode(task, sel, config(SelectorKind::Mhsp, Budget::iterations(1), 17), nullptr);
  CHECK_FALSE(r.success);
  CHECK(r.plan_length == 17);
  CHECK(r.steps_taken == 17);
}

TEST_CASE("an empty answer at a non-goal state ends the episode") {
  const auto task = fixtures::gripper(2);
  ConstantSelector sel(Plan{});
  const auto r = run_episode(task, sel, config(SelectorKind::Mhsp, Budget::iterations(1)), nullptr);
  CHECK_FALSE(r.success);
  CHECK(r.steps_taken == 1);
  CHECK(r.plan_length == 0);
}

TEST_CASE("an inapplicable answer is rejected") {
  const auto task = fixtures::gripper(1);
  ConstantSelector sel(Plan{{task.action_id("(drop ball1 roomb left)")}});
  CHECK_THROWS_AS(run_episode(task, sel, config(SelectorKind::Mhsp, Budget::iterations(1)), nullptr), NotApplicable);
}

TEST_CASE("full-plan commitment executes the returned plan") {
  const auto task = fixtures::gripper(3);
  const Heuristic h(task, HeuristicKind::HMax);
  AgentConfig cfg = config(SelectorKind::AStar, Budget::iterations(100000));
  cfg.commit = CommitPolicy::FullPlan;
  AStarSelector sel(task, h, 1);
  const auto r = run_episode(task, sel, cfg, nullptr);
  CHECK(r.success);
  CHECK(r.steps_taken == 1);
  CHECK(r.plan_length == 9);
}

TEST_CASE("replay validity for every selector and commit policy") {
  const auto task = fixtures::gripper(3);
  for (auto kind : {SelectorKind::Mhsp, SelectorKind::AStar, SelectorKind::Bfs}) {
    for (auto commit : {CommitPolicy::FirstAction, CommitPolicy::FullPlan}) {
      AgentConfig cfg = config(kind, Budget::iterations(30), 60);
      cfg.commit = commit;
      cfg.episodes = 2;
      cfg.seed = 8;
      const auto record = run_trials(task, cfg);
      for (const auto& e : record.episodes) {
        CHECK(is_applicable_sequence(task, task.initial_state(), e.executed));
        CHECK(e.plan_length <= 60);
        CHECK(e.visited.size() == e.plan_length + 1);
      }
    }
  }
}

TEST_CASE("learning sweep") {
  const auto task = fixtures::chain(3);
  const Heuristic h(task, HeuristicKind::Blind);
  LearnedTable table;
  CHECK(apply_learning(task, h, table, {task.goal()}) == 0);
  CHECK(table.empty());

  // Backward order pushes goal information all the way to the start.
  std::vector<State> visited{task.initial_state()};
  for (ActionId a = 0; a < 3; ++a) visited.push_back(task.apply(visited.back(), a));
  apply_learning(task, h, table, visited);
  CHECK(h.effective(visited[0], &table) == 3);
  CHECK(h.effective(visited[1], &table) == 2);
  CHECK(h.effective(visited[2], &table) == 1);
}

TEST_CASE("learning lifts a state to one more than its best successor") {
  const auto task = fixtures::corridor(6);
  const Heuristic h(task, HeuristicKind::Blind);
  LearnedTable table;
  const State c0 = task.initial_state();
  const State c1 = task.apply(c0, task.action_id("(step c0 c1)"));
  const State c2 = task.apply(c1, task.action_id("(step c1 c2)"));
  table.raise(c1, 2);
  table.raise(c0, 4);
  table.raise(c2, 4);
  CHECK(apply_learning(task, h, table, {c1}) == 1);
  CHECK(*table.find(c1) == 5);
}

TEST_CASE("learning converges to true distances on a corridor") {
  const auto task = fixtures::corridor(5);
  const Heuristic h(task, HeuristicKind::Blind);
  AgentConfig cfg = config(SelectorKind::Bfs, Budget::iterations(1), 200);
  cfg.episodes = 60;
  cfg.learning = true;
  cfg.seed = 3;
  BfsSelector sel(task, h, cfg.seed);
  LearnedTable table;
  const auto record = run_trials(task, sel, h, cfg, table);
  const auto& last = record.episodes.back();
  REQUIRE(last.success);
  CHECK(last.plan_length == 5);
  const auto space = explore(task, task.initial_state());
  const auto dist = goal_distances(task, space);
  for (const State& s : last.visited) {
    CHECK(h.effective(s, &table) == dist[space.index.at(s)]);
  }
}

TEST_CASE("trial aggregates") {
  const auto task = fixtures::gripper(2);
  ConstantSelector fail(Plan{});
  const Heuristic h(task, HeuristicKind::HMax);
  AgentConfig cfg = config(SelectorKind::Mhsp, Budget::iterations(1));
  cfg.episodes = 4;
  LearnedTable table;
  const auto failed = run_trials(task, fail, h, cfg, table);
  CHECK(failed.failure_pct == 100.0);
  CHECK(failed.successes() == 0);
  CHECK(failed.avg_length == 0.0);

  AgentConfig one = config(SelectorKind::Mhsp, Budget::iterations(2000));
  const auto single = run_trials(task, one);
  CHECK(single.episodes.size() == 1);
  CHECK(single.min_length == single.max_length);
  CHECK(single.avg_length == static_cast<double>(single.min_length));

  TrialRecord manual;
  for (std::size_t len : {5u, 7u, 9u}) {
    EpisodeResult e;
    e.success = len != 9;
    e.plan_length = len;
    e.search_work = 10;
    manual.episodes.push_back(e);
  }
  manual.summarize();
  CHECK(manual.min_length == 5);
  CHECK(manual.max_length == 7);
  CHECK(manual.avg_length == 6.0);
  CHECK(manual.avg_work == 10.0);
  CHECK(manual.failure_pct == doctest::Approx(100.0 / 3.0));
}

TEST_CASE("learning off leaves the table empty; on keeps it admissible") {
  const auto task = fixtures::gripper(2);
  const auto space = explore(task, task.initial_state());
  const auto dist = goal_distances(task, space);
  for (bool learning : {false, true}) {
    AgentConfig cfg = config(SelectorKind::Mhsp, Budget::iterations(20), 50);
    cfg.episodes = 6;
    cfg.learning = learning;
    const Heuristic h(task, cfg.heuristic);
    auto sel = make_selector(task, h, cfg, 4);
    LearnedTable table;
    run_trials(task, *sel, h, cfg, table, [&](std::size_t, const EpisodeResult&, const LearnedTable& t) {
      for (const auto& [s, v] : t.entries()) CHECK(v <= dist[space.index.at(s)]);
    });
    CHECK(table.empty() == !learning);
  }
}

TEST_CASE("default step cap is ten times the optimum") {
  const auto task = fixtures::gripper(3);
  AgentConfig cfg;
  CHECK(resolve_max_steps(task, cfg) == 90);
  cfg.max_steps = 12;
  CHECK(resolve_max_steps(task, cfg) == 12);
  const auto stuck = load_task("(define (domain z) (:predicates (p) (q)))",
                               "(define (problem z1) (:domain z) (:init (p)) (:goal (q)))");
  CHECK(resolve_max_steps(stuck, AgentConfig{}) == 1000);
}

TEST_CASE("config validation and names") {
  AgentConfig cfg;
  cfg.decision = Budget::iterations(0);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.decision = Budget::millis(-1);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AgentConfig{};
  cfg.episodes = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  for (auto k : {SelectorKind::Mhsp, SelectorKind::AStar, SelectorKind::Bfs}) {
    CHECK(selector_from_string(to_string(k)) == k);
  }
  CHECK(commit_policy_from_string(to_string(CommitPolicy::FullPlan)) == CommitPolicy::FullPlan);
  CHECK_THROWS_AS(selector_from_string("dfs"), std::invalid_argument);
}

import csv
import io
import math
import os

import pytest

import rtplan

DATA = os.environ.get("RTPLAN_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def test_generated_gripper_optimum():
    task = rtplan.generated_task("gripper", 3)
    assert task.num_actions == 2 + 8 * 3
    assert rtplan.optimal_length(task) == 9
    assert rtplan.heuristic(task, kind="hmax") <= 9


def test_ipc_problem_from_files():
    task = rtplan.load_task_files(os.path.join(DATA, "gripper", "domain.pddl"),
                                  os.path.join(DATA, "gripper", "prob01.pddl"))
    assert task.num_actions == 34
    plan = rtplan.optimal_plan(task)
    assert len(plan) == 11
    assert task.is_goal(task.execute(plan))


def test_state_round_trip():
    task = rtplan.generated_task("ferry", 1)
    s0 = task.initial_state()
    assert "(at car1 loc1)" in s0
    s1 = task.apply(s0, "(board car1 loc1)")
    assert "(on car1)" in s1
    assert "(board car1 loc1)" not in task.applicable_actions(s1)
    with pytest.raises(rtplan.NotApplicable):
        task.apply(s0, "(debark car1 loc2)")


def test_mhsp_finds_optimal_plan():
    task = rtplan.generated_task("gripper", 2)
    out = rtplan.mhsp_search(task, iterations=20000, seed=3)
    assert out["solved"]
    assert len(out["plan"]) == 5
    assert out["root_visits"] == out["iterations"] + 1


def test_partial_plan_distances():
    task = rtplan.generated_task("gripper", 2)
    r = rtplan.evaluate_partial_plan(task, [])
    assert r == {"partial_length": 0, "goal_distance": 5, "optimum_distance": 0}


def test_selectors_and_trials():
    task = rtplan.generated_task("gripper", 3)
    for algo in ("mhsp", "astar", "bfs"):
        r = rtplan.select(task, algo, iterations=10, seed=1)
        assert r["budget_used"] <= 10
        trials = rtplan.run_trials(task, algo, iterations=30, episodes=2, seed=1)
        assert len(trials["episodes"]) == 2
        for e in trials["episodes"]:
            assert len(e["plan"]) == e["plan_length"]
    learned = rtplan.run_trials(task, "mhsp", iterations=20, episodes=3, learning=True)
    assert learned["episodes"][-1]["table_size"] > 0


def test_experiment_csv_is_reproducible():
    kwargs = dict(gen="gripper:3", algos=["mhsp", "bfs"], budgets=[10, 40], episodes=2, seed=5)
    first = rtplan.run_experiment(1, **kwargs)
    assert first == rtplan.run_experiment(1, **kwargs)
    rows = list(csv.DictReader(io.StringIO(first[0])))
    assert len(rows) == 4
    assert {r["opt_length"] for r in rows} == {"9"}


def test_test3_reports_inf_or_numbers():
    main, summary = rtplan.run_experiment(3, gen="gripper:2", algos=["astar"], budgets=[1, 1000])
    rows = list(csv.DictReader(io.StringIO(main)))
    assert rows[-1]["goal_distance"] == "0"
    assert "min_solving_decision" in summary


def test_errors_surface_as_python_exceptions():
    with pytest.raises(rtplan.ParseError):
        rtplan.load_task("(define (domain d) (:predicates (p))", "")
    with pytest.raises(ValueError):
        rtplan.generate("blocks", 3)
    with pytest.raises(ValueError):
        rtplan.run_experiment(1, gen="gripper:2", budgets=[20, 10])
    assert math.isinf(rtplan.optimal_length(
        rtplan.load_task("(define (domain z) (:predicates (p) (q)))",
                         "(define (problem z1) (:domain z) (:init (p)) (:goal (q)))")))

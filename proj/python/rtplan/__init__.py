"""Real-time classical planning: MHSP, bounded A* and best-first baselines."""

from ._rtplan import (
    NotApplicable,
    ParseError,
    ResourceLimit,
    Task,
    evaluate_partial_plan,
    generate,
    heuristic,
    load_task,
    load_task_files,
    mhsp_search,
    optimal_length,
    optimal_plan,
    run_experiment,
    run_trials,
    select,
)


def generated_task(name, n):
    """Ground a generated gripper or ferry instance with n objects to move."""
    return load_task(*generate(name, n))


__all__ = [
    "NotApplicable",
    "ParseError",
    "ResourceLimit",
    "Task",
    "evaluate_partial_plan",
    "generate",
    "generated_task",
    "heuristic",
    "load_task",
    "load_task_files",
    "mhsp_search",
    "optimal_length",
    "optimal_plan",
    "run_experiment",
    "run_trials",
    "select",
]

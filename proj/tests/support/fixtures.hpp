#pragma once

#include <set>
#include <string>

#include "rtplan/generators.hpp"
#include "rtplan/task.hpp"

#ifndef RTPLAN_DATA_DIR
#define RTPLAN_DATA_DIR "data"
#endif

namespace fixtures {

inline rtplan::GroundTask gripper(int n) {
  const auto inst = rtplan::generate_gripper(n);
  return rtplan::load_task(inst.domain, inst.problem);
}

inline rtplan::GroundTask ferry(int n) {
  const auto inst = rtplan::generate_ferry(n);
  return rtplan::load_task(inst.domain, inst.problem);
}

// A line of n + 1 cells, start at c0, goal at cn; step moves one cell either way.
inline std::string corridor_domain() {
  return R"((define (domain corridor)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (adj ?a ?b - cell))
  (:action step
    :parameters (?from ?to - cell)
    :precondition (and (at ?from) (adj ?from ?to))
    :effect (and (at ?to) (not (at ?from)))))
)";
}

inline std::string corridor_problem(int n) {
  std::string p = "(define (problem corridor-" + std::to_string(n) + ") (:domain corridor) (:objects";
  for (int i = 0; i <= n; ++i) p += " c" + std::to_string(i);
  p += " - cell) (:init (at c0)";
  for (int i = 0; i < n; ++i) {
    const std::string a = "c" + std::to_string(i), b = "c" + std::to_string(i + 1);
    p += " (adj " + a + " " + b + ") (adj " + b + " " + a + ")";
  }
  p += ") (:goal (at c" + std::to_string(n) + ")))";
  return p;
}

inline rtplan::GroundTask corridor(int n) { return rtplan::load_task(corridor_domain(), corridor_problem(n)); }

// Chain of unary-precondition actions: p0 -> p1 -> ... -> pn.
inline rtplan::GroundTask chain(int n) {
  std::string d = "(define (domain chain) (:requirements :strips) (:predicates";
  for (int i = 0; i <= n; ++i) d += " (p" + std::to_string(i) + ")";
  d += ")";
  for (int i = 0; i < n; ++i) {
    d += " (:action a" + std::to_string(i) + " :parameters () :precondition (p" + std::to_string(i) +
         ") :effect (p" + std::to_string(i + 1) + "))";
  }
  d += ")";
  const std::string p = "(define (problem chain-p) (:domain chain) (:init (p0)) (:goal (p" + std::to_string(n) + ")))";
  return rtplan::load_task(d, p);
}

// s0 has three successors a, b, c; only a leads on to the goal g. b and c are
// dead ends that a blind heuristic cannot see.
inline rtplan::GroundTask fan() {
  return rtplan::load_task(R"((define (domain fan) (:requirements :strips)
    (:predicates (s) (a) (b) (c) (g))
    (:action to-a :parameters () :precondition (s) :effect (and (a) (not (s))))
    (:action to-b :parameters () :precondition (s) :effect (and (b) (not (s))))
    (:action to-c :parameters () :precondition (s) :effect (and (c) (not (s))))
    (:action finish :parameters () :precondition (a) :effect (g))))",
                           "(define (problem fan1) (:domain fan) (:init (s)) (:goal (g)))");
}

inline std::set<std::string> fact_names(const rtplan::GroundTask& task, const rtplan::State& s) {
  std::set<std::string> out;
  for (auto f : s.facts()) out.insert(task.fact_name(f));
  return out;
}

}  // namespace fixtures

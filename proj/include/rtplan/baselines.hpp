#pragma once

#include <cstdint>
#include <random>

#include "rtplan/budget.hpp"
#include "rtplan/heuristics.hpp"
#include "rtplan/selector.hpp"
#include "rtplan/task.hpp"

namespace rtplan {

// What A* returns when its budget runs out before the goal is expanded.
enum class AStarTimeoutRule {
  LastExpanded,  // path to the most recently expanded node
  MinF,          // path to the open node with minimal f
};

// Anytime A* with f = depth + effective H and a closed set keyed by state.
// Ties on f are broken by a seeded random key.
SelectorResult astar_select(const GroundTask& task, const State& s, const Budget& budget, const Heuristic& h,
                            const LearnedTable* table, std::mt19937_64& rng,
                            AStarTimeoutRule rule = AStarTimeoutRule::LastExpanded);

// Breadth-first lookahead with duplicate detection. On timeout, returns the
// path to the frontier node with minimal effective H (ties: shallower, then
// seeded random).
SelectorResult bfs_select(const GroundTask& task, const State& s, const Budget& budget, const Heuristic& h,
                          const LearnedTable* table, std::mt19937_64& rng);

class AStarSelector : public ActionSelector {
 public:
  AStarSelector(const GroundTask& task, const Heuristic& h, std::uint64_t seed,
                AStarTimeoutRule rule = AStarTimeoutRule::LastExpanded)
      : task_(&task), h_(&h), rng_(seed), rule_(rule) {}

  std::string name() const override { return "astar"; }
  SelectorResult select(const State& s, const Budget& budget, const LearnedTable* table) override {
    return astar_select(*task_, s, budget, *h_, table, rng_, rule_);
  }

 private:
  const GroundTask* task_;
  const Heuristic* h_;
  std::mt19937_64 rng_;
  AStarTimeoutRule rule_;
};

class BfsSelector : public ActionSelector {
 public:
  BfsSelector(const GroundTask& task, const Heuristic& h, std::uint64_t seed)
      : task_(&task), h_(&h), rng_(seed) {}

  std::string name() const override { return "bfs"; }
  SelectorResult select(const State& s, const Budget& budget, const LearnedTable* table) override {
    return bfs_select(*task_, s, budget, *h_, table, rng_);
  }

 private:
  const GroundTask* task_;
  const Heuristic* h_;
  std::mt19937_64 rng_;
};

}  // namespace rtplan

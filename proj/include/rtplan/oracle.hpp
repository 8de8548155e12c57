#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rtplan/heuristics.hpp"
#include "rtplan/task.hpp"

namespace rtplan {

// Exact offline distances. Desk-scale only: every search is bounded by a
// node cap and throws ResourceLimit beyond it.

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultNodeCap = 1'000'000;

enum class OracleMethod { AStarHMax, BreadthFirst };

// Shortest plan length from `from` to the goal; kInfiniteCost if unreachable.
Cost optimal_length(const GroundTask& task, const State& from, OracleMethod method = OracleMethod::AStarHMax,
                    std::size_t node_cap = kDefaultNodeCap);
// An optimal plan, or nullopt if the goal is unreachable.
std::optional<Plan> optimal_plan(const GroundTask& task, const State& from, std::size_t node_cap = kDefaultNodeCap);

// Optimal distance from the end state of `partial` (executed from s0).
Cost goal_distance(const GroundTask& task, const Plan& partial, std::size_t node_cap = kDefaultNodeCap);

struct DistanceReport {
  Cost goal_distance = 0;
  Cost optimum_distance = 0;  // kInfiniteCost when goal_distance is infinite
  std::size_t partial_length = 0;
};

// len(partial) + goal_distance(partial) - optimal(s0).
DistanceReport evaluate_partial_plan(const GroundTask& task, const Plan& partial, Cost optimal_from_s0,
                                     std::size_t node_cap = kDefaultNodeCap);
Cost optimum_distance(const GroundTask& task, const Plan& partial, std::size_t node_cap = kDefaultNodeCap);

// Explicit forward state space reachable from a start state.
struct StateSpace {
  std::vector<State> states;  // states[0] is the start
  std::unordered_map<State, std::size_t, StateHash> index;
  std::vector<std::vector<std::size_t>> successors;
};

StateSpace explore(const GroundTask& task, const State& start, std::size_t node_cap = kDefaultNodeCap);
// Exact goal distance of every state in the space (backward breadth-first).
std::vector<Cost> goal_distances(const GroundTask& task, const StateSpace& space);

}  // namespace rtplan

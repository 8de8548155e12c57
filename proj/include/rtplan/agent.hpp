#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "rtplan/baselines.hpp"
#include "rtplan/budget.hpp"
#include "rtplan/heuristics.hpp"
#include "rtplan/mhsp.hpp"
#include "rtplan/selector.hpp"
#include "rtplan/task.hpp"

namespace rtplan {

enum class SelectorKind { Mhsp, AStar, Bfs };
enum class CommitPolicy { FirstAction, FullPlan };

const char* to_string(SelectorKind kind);
SelectorKind selector_from_string(std::string_view name);
const char* to_string(CommitPolicy policy);
CommitPolicy commit_policy_from_string(std::string_view name);

struct AgentConfig {
  SelectorKind selector = SelectorKind::Mhsp;
  Budget decision = Budget::iterations(100);
  std::size_t episodes = 1;
  // Cap on executed actions per episode; 0 means "resolve a default".
  std::size_t max_steps = 0;
  bool learning = false;
  std::uint64_t seed = 0;
  CommitPolicy commit = CommitPolicy::FirstAction;
  HeuristicKind heuristic = HeuristicKind::HMax;
  MhspOptions mhsp;
  AStarTimeoutRule astar_timeout = AStarTimeoutRule::LastExpanded;

  // Throws std::invalid_argument on a non-positive decision budget or a zero
  // episode count.
  void validate() const;
};

struct EpisodeResult {
  std::size_t plan_length = 0;  // actions executed
  std::chrono::duration<double> wall_time{0};
  bool success = false;
  std::size_t steps_taken = 0;  // selector invocations
  std::uint64_t search_work = 0;  // budget units consumed over all decisions
  Plan executed;
  std::vector<State> visited;  // s0 followed by the state after each action
};

struct TrialRecord {
  std::vector<EpisodeResult> episodes;
  // Length statistics over successful episodes (0 when none succeeded).
  std::size_t min_length = 0;
  std::size_t max_length = 0;
  double avg_length = 0.0;
  double avg_time_s = 0.0;  // mean wall time per episode, all episodes
  double avg_work = 0.0;    // mean search_work per episode
  double failure_pct = 0.0;

  std::size_t successes() const;
  void summarize();
};

// 10 x the optimal length from s0 when the oracle can compute it cheaply,
// else 1000. An explicit cfg.max_steps wins.
std::size_t resolve_max_steps(const GroundTask& task, const AgentConfig& cfg);

std::unique_ptr<ActionSelector> make_selector(const GroundTask& task, const Heuristic& h, const AgentConfig& cfg,
                                              std::uint64_t seed);

// Interleaves bounded selection with execution from s0 until the goal holds or
// max_steps actions were executed. cfg.max_steps must be resolved (> 0).
EpisodeResult run_episode(const GroundTask& task, ActionSelector& selector, const AgentConfig& cfg,
                          const LearnedTable* table);

// One backward sweep over the visited states, applying the max/min update to
// each non-goal state from the effective H of its successors.
std::size_t apply_learning(const GroundTask& task, const Heuristic& h, LearnedTable& table,
                           const std::vector<State>& visited);

using EpisodeObserver = std::function<void(std::size_t episode, const EpisodeResult&, const LearnedTable&)>;

// Runs cfg.episodes episodes sharing one table (left empty when learning is off).
TrialRecord run_trials(const GroundTask& task, const AgentConfig& cfg, const EpisodeObserver& observer = {});
TrialRecord run_trials(const GroundTask& task, ActionSelector& selector, const Heuristic& h,
                       const AgentConfig& cfg, LearnedTable& table, const EpisodeObserver& observer = {});

}  // namespace rtplan

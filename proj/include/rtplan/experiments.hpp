#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtplan/agent.hpp"
#include "rtplan/task.hpp"

namespace rtplan {

struct ExperimentSpec {
  // Exactly one of (domain_file + problem_file) or generator must be set.
  std::string domain_file;
  std::string problem_file;
  std::string generator;  // "gripper" or "ferry"
  int generator_size = 0;

  std::vector<SelectorKind> algorithms{SelectorKind::Mhsp};
  std::vector<Budget> budgets{Budget::iterations(100)};  // one value or a strictly increasing sweep
  std::size_t episodes = 1;
  bool learning = false;
  std::uint64_t seed = 0;
  std::size_t max_steps = 0;
  CommitPolicy commit = CommitPolicy::FirstAction;
  HeuristicKind heuristic = HeuristicKind::HMax;
  MhspOptions mhsp;
  AStarTimeoutRule astar_timeout = AStarTimeoutRule::LastExpanded;

  void validate() const;  // throws std::invalid_argument
};

// Parses "gripper:5" / "ferry:3" into the generator fields.
void set_generator(ExperimentSpec& spec, const std::string& text);

struct LoadedProblem {
  std::string label;
  GroundTask task;
};

LoadedProblem load_problem(const ExperimentSpec& spec);

// Independent RNG stream per (seed, cell).
std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t cell);

// Test 1 / Test 2 summary row.
struct TrialRow {
  std::string problem;
  SelectorKind algorithm = SelectorKind::Mhsp;
  Budget budget;
  TrialRecord record;
  long long opt_length = -1;  // -1 when the oracle gave up or the goal is unreachable
};

struct EpisodeRow {
  std::string problem;
  SelectorKind algorithm = SelectorKind::Mhsp;
  Budget budget;
  std::size_t episode = 0;
  std::size_t plan_length = 0;
  bool success = false;
  std::size_t min_so_far = 0;  // 0 until some episode succeeds
  std::size_t table_size = 0;
};

struct TrialReport {
  std::vector<TrialRow> rows;
  std::vector<EpisodeRow> episodes;
};

// One trial per (algorithm, budget) cell; spec.learning selects Test 1 vs 2.
TrialReport run_trials_grid(const ExperimentSpec& spec);
TrialReport run_test1(ExperimentSpec spec);
TrialReport run_test2(ExperimentSpec spec);

// Test 3: one decision from s0 per (algorithm, budget).
struct PartialPlanRow {
  std::string problem;
  SelectorKind algorithm = SelectorKind::Mhsp;
  Budget budget;
  std::size_t partial_length = 0;
  Cost goal_distance = 0;
  Cost optimum_distance = 0;
};

struct SolveBudgetRow {
  std::string problem;
  SelectorKind algorithm = SelectorKind::Mhsp;
  std::optional<Budget> min_budget;  // first sweep value with both distances 0
};

struct PartialPlanReport {
  std::vector<PartialPlanRow> rows;
  std::vector<SolveBudgetRow> summary;
};

// The same RNG stream is used for every budget of one algorithm, so a larger
// budget replays and extends the smaller one.
PartialPlanReport run_test3(const ExperimentSpec& spec);
PartialPlanRow evaluate_decision(const GroundTask& task, const Heuristic& h, SelectorKind algorithm,
                                 const Budget& budget, std::uint64_t seed, Cost optimal, const ExperimentSpec& spec);

// CSV writers. In iteration mode the avg_time column holds mean budget units
// per episode instead of seconds, so output is reproducible byte for byte.
void write_trial_csv(std::ostream& os, const std::vector<TrialRow>& rows);
void write_episode_csv(std::ostream& os, const std::vector<EpisodeRow>& rows);
void write_partial_csv(std::ostream& os, const std::vector<PartialPlanRow>& rows);
void write_solve_budget_csv(std::ostream& os, const std::vector<SolveBudgetRow>& rows);

std::string format_number(double v);
std::string format_cost(Cost c);  // "inf" for infinity

}  // namespace rtplan

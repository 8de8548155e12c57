#include "rtplan/agent.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rtplan/oracle.hpp"

namespace rtplan {

const char* to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Mhsp: return "mhsp";
    case SelectorKind::AStar: return "astar";
    case SelectorKind::Bfs: return "bfs";
  }
  return "?";
}

SelectorKind selector_from_string(std::string_view name) {
  if (name == "mhsp") return SelectorKind::Mhsp;
  if (name == "astar" || name == "a*") return SelectorKind::AStar;
  if (name == "bfs") return SelectorKind::Bfs;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

const char* to_string(CommitPolicy policy) {
  return policy == CommitPolicy::FirstAction ? "first-action" : "full-plan";
}

CommitPolicy commit_policy_from_string(std::string_view name) {
  if (name == "first-action" || name == "first") return CommitPolicy::FirstAction;
  if (name == "full-plan" || name == "full") return CommitPolicy::FullPlan;
  throw std::invalid_argument("unknown commit policy: " + std::string(name));
}

void AgentConfig::validate() const {
  if (!(decision.amount > 0)) throw std::invalid_argument("decision budget must be positive");
  if (decision.unit == BudgetUnit::Iterations && decision.amount < 1) {
    throw std::invalid_argument("iteration budget must be at least 1");
  }
  if (episodes == 0) throw std::invalid_argument("episode count must be positive");
  if (mhsp.ucb_c < 0) throw std::invalid_argument("UCB constant must be non-negative");
}

std::size_t TrialRecord::successes() const {
  return static_cast<std::size_t>(
      std::count_if(episodes.begin(), episodes.end(), [](const EpisodeResult& e) { return e.success; }));
}

void TrialRecord::summarize() {
  min_length = max_length = 0;
  avg_length = avg_time_s = avg_work = failure_pct = 0.0;
  if (episodes.empty()) return;
  std::size_t ok = 0;
  double total_len = 0.0;
  double total_time = 0.0;
  double total_work = 0.0;
  for (const auto& e : episodes) {
    total_time += e.wall_time.count();
    total_work += static_cast<double>(e.search_work);
    if (!e.success) continue;
    min_length = ok == 0 ? e.plan_length : std::min(min_length, e.plan_length);
    max_length = std::max(max_length, e.plan_length);
    total_len += static_cast<double>(e.plan_length);
    ++ok;
  }
  const auto n = static_cast<double>(episodes.size());
  avg_length = ok ? total_len / static_cast<double>(ok) : 0.0;
  avg_time_s = total_time / n;
  avg_work = total_work / n;
  failure_pct = 100.0 * static_cast<double>(episodes.size() - ok) / n;
}

std::size_t resolve_max_steps(const GroundTask& task, const AgentConfig& cfg) {
  constexpr std::size_t kFallback = 1000;
  if (cfg.max_steps > 0) return cfg.max_steps;
  try {
    const Cost opt = optimal_length(task, task.initial_state(), OracleMethod::AStarHMax, 200'000);
    if (is_infinite(opt)) return kFallback;
    return std::max<std::size_t>(1, 10 * static_cast<std::size_t>(opt));
  } catch (const ResourceLimit&) {
    return kFallback;
  }
}

std::unique_ptr<ActionSelector> make_selector(const GroundTask& task, const Heuristic& h, const AgentConfig& cfg,
                                              std::uint64_t seed) {
  switch (cfg.selector) {
    case SelectorKind::Mhsp: return std::make_unique<MhspSelector>(task, h, seed, cfg.mhsp);
    case SelectorKind::AStar: return std::make_unique<AStarSelector>(task, h, seed, cfg.astar_timeout);
    case SelectorKind::Bfs: return std::make_unique<BfsSelector>(task, h, seed);
  }
  throw std::invalid_argument("unknown selector kind");
}

EpisodeResult run_episode(const GroundTask& task, ActionSelector& selector, const AgentConfig& cfg,
                          const LearnedTable* table) {
  if (cfg.max_steps == 0) throw std::invalid_argument("run_episode needs a resolved max_steps");
  const auto start = std::chrono::steady_clock::now();
  EpisodeResult out;
  State s = task.initial_state();
  out.visited.push_back(s);

  while (!task.is_goal(s) && out.executed.length() < cfg.max_steps) {
    const SelectorResult r = selector.select(s, cfg.decision, table);
    ++out.steps_taken;
    out.search_work += r.budget_used;
    if (r.plan.empty()) break;  // nothing to commit to: the episode fails
    const std::size_t commit = cfg.commit == CommitPolicy::FirstAction ? 1 : r.plan.length();
    for (std::size_t k = 0; k < commit && out.executed.length() < cfg.max_steps; ++k) {
      s = task.apply(s, r.plan.actions[k]);
      out.executed.actions.push_back(r.plan.actions[k]);
      out.visited.push_back(s);
      if (task.is_goal(s)) break;
    }
  }

  out.success = task.is_goal(s);
  out.plan_length = out.executed.length();
  out.wall_time = std::chrono::steady_clock::now() - start;
  return out;
}

std::size_t apply_learning(const GroundTask& task, const Heuristic& h, LearnedTable& table,
                           const std::vector<State>& visited) {
  std::size_t changed = 0;
  std::vector<Cost> children;
  for (auto it = visited.rbegin(); it != visited.rend(); ++it) {
    const State& s = *it;
    if (task.is_goal(s)) continue;
    children.clear();
    for (ActionId a : task.applicable_actions(s)) children.push_back(h.effective(task.apply_unchecked(s, a), &table));
    if (learn_update(table, s, h.effective(s, &table), children)) ++changed;
  }
  return changed;
}

TrialRecord run_trials(const GroundTask& task, ActionSelector& selector, const Heuristic& h,
                       const AgentConfig& cfg, LearnedTable& table, const EpisodeObserver& observer) {
  cfg.validate();
  AgentConfig resolved = cfg;
  resolved.max_steps = resolve_max_steps(task, cfg);
  TrialRecord record;
  record.episodes.reserve(cfg.episodes);
  for (std::size_t e = 0; e < cfg.episodes; ++e) {
    EpisodeResult r = run_episode(task, selector, resolved, &table);
    if (cfg.learning) apply_learning(task, h, table, r.visited);
    if (observer) observer(e, r, table);
    record.episodes.push_back(std::move(r));
  }
  record.summarize();
  return record;
}

TrialRecord run_trials(const GroundTask& task, const AgentConfig& cfg, const EpisodeObserver& observer) {
  cfg.validate();
  Heuristic h(task, cfg.heuristic);
  auto selector = make_selector(task, h, cfg, cfg.seed);
  LearnedTable table;
  return run_trials(task, *selector, h, cfg, table, observer);
}

}  // namespace rtplan

#include "rtplan/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rtplan/generators.hpp"
#include "rtplan/oracle.hpp"
#include "rtplan/pddl.hpp"

namespace rtplan {

void ExperimentSpec::validate() const {
  const bool files = !domain_file.empty() || !problem_file.empty();
  const bool gen = !generator.empty();
  if (files == gen) throw std::invalid_argument("give either --domain/--problem or --gen, not both or neither");
  if (files && (domain_file.empty() || problem_file.empty())) {
    throw std::invalid_argument("--domain and --problem must be given together");
  }
  if (gen && generator != "gripper" && generator != "ferry") {
    throw std::invalid_argument("unknown generator: " + generator);
  }
  if (gen && generator_size < 1) throw std::invalid_argument("generator size must be at least 1");
  if (algorithms.empty()) throw std::invalid_argument("no algorithm given");
  if (budgets.empty()) throw std::invalid_argument("no decision budget given");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (!(budgets[i].amount > 0)) throw std::invalid_argument("decision budgets must be positive");
    if (budgets[i].unit != budgets.front().unit) throw std::invalid_argument("mixed budget units in sweep");
    if (i > 0 && !(budgets[i].amount > budgets[i - 1].amount)) {
      throw std::invalid_argument("sweep values must be strictly increasing");
    }
  }
  if (episodes == 0) throw std::invalid_argument("episode count must be positive");
}

void set_generator(ExperimentSpec& spec, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("expected NAME:N, got '" + text + "'");
  spec.generator = text.substr(0, colon);
  const std::string num = text.substr(colon + 1);
  int n = 0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
  if (ec != std::errc{} || ptr != num.data() + num.size()) {
    throw std::invalid_argument("bad generator size in '" + text + "'");
  }
  spec.generator_size = n;
}

LoadedProblem load_problem(const ExperimentSpec& spec) {
  if (!spec.generator.empty()) {
    const auto inst = spec.generator == "gripper" ? generate_gripper(spec.generator_size)
                                                  : generate_ferry(spec.generator_size);
    std::ostringstream label;
    label << spec.generator << '-' << std::setw(2) << std::setfill('0') << spec.generator_size;
    return {label.str(), load_task(inst.domain, inst.problem)};
  }
  const std::string domain_text = pddl::read_file(spec.domain_file);
  const std::string problem_text = pddl::read_file(spec.problem_file);
  pddl::DomainDef dom;
  try {
    dom = pddl::parse_domain(domain_text);
  } catch (const pddl::ParseError& e) {
    throw std::runtime_error(spec.domain_file + ":" + e.what());
  }
  pddl::ProblemDef prob;
  try {
    prob = pddl::parse_problem(problem_text, dom);
  } catch (const pddl::ParseError& e) {
    throw std::runtime_error(spec.problem_file + ":" + e.what());
  }
  return {prob.name, ground(dom, prob)};
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t cell) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (cell + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

AgentConfig agent_config(const ExperimentSpec& spec, SelectorKind algo, const Budget& budget, std::uint64_t seed) {
  AgentConfig cfg;
  cfg.selector = algo;
  cfg.decision = budget;
  cfg.episodes = spec.episodes;
  cfg.max_steps = spec.max_steps;
  cfg.learning = spec.learning;
  cfg.seed = seed;
  cfg.commit = spec.commit;
  cfg.heuristic = spec.heuristic;
  cfg.mhsp = spec.mhsp;
  cfg.astar_timeout = spec.astar_timeout;
  return cfg;
}

Cost oracle_optimum(const GroundTask& task) {
  try {
    return optimal_length(task, task.initial_state());
  } catch (const ResourceLimit&) {
    return kInfiniteCost;
  }
}

}  // namespace

TrialReport run_trials_grid(const ExperimentSpec& spec) {
  spec.validate();
  const LoadedProblem problem = load_problem(spec);
  const Cost opt = oracle_optimum(problem.task);
  TrialReport report;
  std::uint64_t cell = 0;
  for (SelectorKind algo : spec.algorithms) {
    for (const Budget& budget : spec.budgets) {
      AgentConfig cfg = agent_config(spec, algo, budget, cell_seed(spec.seed, cell++));
      if (cfg.max_steps == 0 && !is_infinite(opt)) cfg.max_steps = std::max<std::size_t>(1, 10 * opt);
      std::size_t best = 0;
      auto observer = [&](std::size_t e, const EpisodeResult& r, const LearnedTable& table) {
        if (r.success && (best == 0 || r.plan_length < best)) best = r.plan_length;
        report.episodes.push_back({problem.label, algo, budget, e, r.plan_length, r.success, best, table.size()});
      };
      TrialRow row{problem.label, algo, budget, run_trials(problem.task, cfg, observer),
                   is_infinite(opt) ? -1 : static_cast<long long>(opt)};
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

TrialReport run_test1(ExperimentSpec spec) {
  spec.learning = false;
  return run_trials_grid(spec);
}

TrialReport run_test2(ExperimentSpec spec) {
  spec.learning = true;
  return run_trials_grid(spec);
}

PartialPlanRow evaluate_decision(const GroundTask& task, const Heuristic& h, SelectorKind algorithm,
                                 const Budget& budget, std::uint64_t seed, Cost optimal,
                                 const ExperimentSpec& spec) {
  AgentConfig cfg = agent_config(spec, algorithm, budget, seed);
  auto selector = make_selector(task, h, cfg, seed);
  const SelectorResult r = selector->select(task.initial_state(), budget, nullptr);
  const DistanceReport d = evaluate_partial_plan(task, r.plan, optimal);
  return {"", algorithm, budget, d.partial_length, d.goal_distance, d.optimum_distance};
}

PartialPlanReport run_test3(const ExperimentSpec& spec) {
  spec.validate();
  const LoadedProblem problem = load_problem(spec);
  const Cost opt = optimal_length(problem.task, problem.task.initial_state());
  Heuristic h(problem.task, spec.heuristic);
  PartialPlanReport report;
  std::uint64_t cell = 0;
  for (SelectorKind algo : spec.algorithms) {
    const std::uint64_t seed = cell_seed(spec.seed, cell++);
    SolveBudgetRow solved{problem.label, algo, std::nullopt};
    for (const Budget& budget : spec.budgets) {
      PartialPlanRow row = evaluate_decision(problem.task, h, algo, budget, seed, opt, spec);
      row.problem = problem.label;
      if (!solved.min_budget && row.goal_distance == 0 && row.optimum_distance == 0) solved.min_budget = budget;
      report.rows.push_back(std::move(row));
    }
    report.summary.push_back(std::move(solved));
  }
  return report;
}

std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(6) << std::fixed << v;
  std::string s = os.str();
  // Trim trailing zeros but keep at least one digit after the point.
  while (s.size() > 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string format_cost(Cost c) { return is_infinite(c) ? "inf" : std::to_string(c); }

namespace {

std::string budget_amount(const Budget& b) {
  return b.deterministic() ? std::to_string(static_cast<std::uint64_t>(b.amount)) : format_number(b.amount);
}

const char* unit_label(const Budget& b) { return b.deterministic() ? "iterations" : "ms"; }

}  // namespace

void write_trial_csv(std::ostream& os, const std::vector<TrialRow>& rows) {
  os << "problem,algo,decision,unit,avg_time,avg_length,opt_length,max_length,min_length,failure_pct,episodes\n";
  for (const auto& r : rows) {
    const auto& t = r.record;
    const double time = r.budget.deterministic() ? t.avg_work : t.avg_time_s;
    os << r.problem << ',' << to_string(r.algorithm) << ',' << budget_amount(r.budget) << ',' << unit_label(r.budget)
       << ',' << format_number(time) << ',' << format_number(t.avg_length) << ',';
    if (r.opt_length >= 0) {
      os << r.opt_length;
    } else {
      os << "inf";
    }
    os << ',' << t.max_length << ',' << t.min_length << ',' << format_number(t.failure_pct) << ','
       << t.episodes.size() << '\n';
  }
}

void write_episode_csv(std::ostream& os, const std::vector<EpisodeRow>& rows) {
  os << "problem,algo,decision,unit,episode,plan_length,success,min_so_far,table_size\n";
  for (const auto& r : rows) {
    os << r.problem << ',' << to_string(r.algorithm) << ',' << budget_amount(r.budget) << ',' << unit_label(r.budget)
       << ',' << r.episode << ',' << r.plan_length << ',' << (r.success ? 1 : 0) << ',' << r.min_so_far << ','
       << r.table_size << '\n';
  }
}

void write_partial_csv(std::ostream& os, const std::vector<PartialPlanRow>& rows) {
  os << "problem,algo,decision,unit,partial_length,goal_distance,optimum_distance\n";
  for (const auto& r : rows) {
    os << r.problem << ',' << to_string(r.algorithm) << ',' << budget_amount(r.budget) << ',' << unit_label(r.budget)
       << ',' << r.partial_length << ',' << format_cost(r.goal_distance) << ',' << format_cost(r.optimum_distance)
       << '\n';
  }
}

void write_solve_budget_csv(std::ostream& os, const std::vector<SolveBudgetRow>& rows) {
  os << "problem,algo,min_solving_decision,unit\n";
  for (const auto& r : rows) {
    os << r.problem << ',' << to_string(r.algorithm) << ',';
    if (r.min_budget) {
      os << budget_amount(*r.min_budget) << ',' << unit_label(*r.min_budget);
    } else {
      os << "none,";
    }
    os << '\n';
  }
}

}  // namespace rtplan

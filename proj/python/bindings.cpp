#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rtplan/agent.hpp"
#include "rtplan/experiments.hpp"
#include "rtplan/generators.hpp"
#include "rtplan/mhsp.hpp"
#include "rtplan/oracle.hpp"
#include "rtplan/pddl.hpp"

namespace py = pybind11;
using namespace rtplan;

namespace {

using Facts = std::vector<std::string>;

py::object cost(Cost c) {
  if (is_infinite(c)) return py::float_(std::numeric_limits<double>::infinity());
  return py::int_(c);
}

State state_or_initial(const GroundTask& task, const std::optional<Facts>& facts) {
  return facts ? task.make_state(*facts) : task.initial_state();
}

Facts names_of(const GroundTask& task, const State& s) {
  Facts out;
  for (FactId f : s.facts()) out.push_back(task.fact_name(f));
  return out;
}

Plan plan_from_names(const GroundTask& task, const std::vector<std::string>& names) {
  Plan p;
  for (const auto& n : names) p.actions.push_back(task.action_id(n));
  return p;
}

Budget make_budget(std::optional<std::uint64_t> iterations, std::optional<double> ms) {
  if (iterations && ms) throw std::invalid_argument("give iterations or ms, not both");
  if (ms) return Budget::millis(*ms);
  return Budget::iterations(iterations.value_or(100));
}

MhspOptions mhsp_options(std::optional<double> ucb, bool stop_when_provably_optimal) {
  MhspOptions o;
  o.stop_when_provably_optimal = stop_when_provably_optimal;
  if (ucb) {
    o.policy = SelectionPolicy::Ucb;
    o.ucb_c = *ucb;
  }
  return o;
}

py::dict episode_dict(const GroundTask& task, const EpisodeResult& e) {
  py::dict d;
  d["plan_length"] = e.plan_length;
  d["success"] = e.success;
  d["steps_taken"] = e.steps_taken;
  d["search_work"] = e.search_work;
  d["wall_time"] = e.wall_time.count();
  d["plan"] = action_names(task, e.executed);
  return d;
}

}  // namespace

PYBIND11_MODULE(_rtplan, m) {
  m.doc() = "Real-time classical planning with mean-based heuristic search";

  py::register_exception<pddl::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotApplicable>(m, "NotApplicable", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

  py::class_<GroundTask, std::shared_ptr<GroundTask>>(m, "Task")
      .def_property_readonly("num_facts", &GroundTask::num_facts)
      .def_property_readonly("num_actions", &GroundTask::num_actions)
      .def("fact_names",
           [](const GroundTask& t) {
             Facts out;
             for (std::size_t f = 0; f < t.num_facts(); ++f) out.push_back(t.fact_name(static_cast<FactId>(f)));
             return out;
           })
      .def("action_names",
           [](const GroundTask& t) {
             std::vector<std::string> out;
             for (const auto& a : t.actions()) out.push_back(a.name);
             return out;
           })
      .def("initial_state", [](const GroundTask& t) { return names_of(t, t.initial_state()); })
      .def("goal", [](const GroundTask& t) { return names_of(t, t.goal()); })
      .def("is_goal", [](const GroundTask& t, const Facts& s) { return t.is_goal(t.make_state(s)); })
      .def("applicable_actions",
           [](const GroundTask& t, const Facts& s) {
             std::vector<std::string> out;
             for (ActionId a : t.applicable_actions(t.make_state(s))) out.push_back(t.action(a).name);
             return out;
           })
      .def("apply",
           [](const GroundTask& t, const Facts& s, const std::string& action) {
             return names_of(t, t.apply(t.make_state(s), t.action_id(action)));
           })
      .def("execute",
           [](const GroundTask& t, const std::vector<std::string>& plan, std::optional<Facts> start) {
             return names_of(t, execute(t, state_or_initial(t, start), plan_from_names(t, plan)));
           },
           py::arg("plan"), py::arg("start") = py::none());

  m.def("load_task",
        [](const std::string& domain, const std::string& problem) {
          return std::make_shared<GroundTask>(load_task(domain, problem));
        },
        py::arg("domain_text"), py::arg("problem_text"), "Parse and ground PDDL text.");
  m.def("load_task_files",
        [](const std::string& domain_path, const std::string& problem_path) {
          return std::make_shared<GroundTask>(load_task(pddl::read_file(domain_path), pddl::read_file(problem_path)));
        },
        py::arg("domain_path"), py::arg("problem_path"));
  m.def("generate", [](const std::string& name, int n) {
    const auto inst = name == "gripper" ? generate_gripper(n)
                      : name == "ferry" ? generate_ferry(n)
                                        : throw std::invalid_argument("unknown generator: " + name);
    return py::make_tuple(inst.domain, inst.problem);
  }, py::arg("name"), py::arg("n"), "Return (domain_text, problem_text) for gripper or ferry.");

  m.def("heuristic",
        [](const GroundTask& t, std::optional<Facts> state, const std::string& kind) {
          const Heuristic h(t, heuristic_from_string(kind), false);
          return cost(h.base(state_or_initial(t, state)));
        },
        py::arg("task"), py::arg("state") = py::none(), py::arg("kind") = "hmax");

  m.def("optimal_length",
        [](const GroundTask& t, std::optional<Facts> state) {
          return cost(optimal_length(t, state_or_initial(t, state)));
        },
        py::arg("task"), py::arg("state") = py::none());
  m.def("optimal_plan",
        [](const GroundTask& t, std::optional<Facts> state) -> std::optional<std::vector<std::string>> {
          const auto p = optimal_plan(t, state_or_initial(t, state));
          if (!p) return std::nullopt;
          return action_names(t, *p);
        },
        py::arg("task"), py::arg("state") = py::none());
  m.def("evaluate_partial_plan",
        [](const GroundTask& t, const std::vector<std::string>& plan) {
          const Cost opt = optimal_length(t, t.initial_state());
          const auto r = evaluate_partial_plan(t, plan_from_names(t, plan), opt);
          py::dict d;
          d["partial_length"] = r.partial_length;
          d["goal_distance"] = cost(r.goal_distance);
          d["optimum_distance"] = cost(r.optimum_distance);
          return d;
        },
        py::arg("task"), py::arg("plan"));

  m.def("mhsp_search",
        [](const GroundTask& t, std::optional<std::uint64_t> iterations, std::optional<double> ms, std::uint64_t seed,
           const std::string& heuristic, std::optional<double> ucb, bool stop_when_provably_optimal,
           std::optional<Facts> state) {
          const Heuristic h(t, heuristic_from_string(heuristic));
          MhspTree tree(t, h, state_or_initial(t, state), nullptr, seed, mhsp_options(ucb, stop_when_provably_optimal));
          const Plan p = tree.run(make_budget(iterations, ms));
          py::dict d;
          d["plan"] = action_names(t, p);
          d["solved"] = tree.best_solution().has_value();
          d["iterations"] = tree.iterations();
          d["tree_size"] = tree.size();
          d["root_visits"] = tree.node(MhspTree::root()).V;
          return d;
        },
        py::arg("task"), py::kw_only(), py::arg("iterations") = py::none(), py::arg("ms") = py::none(),
        py::arg("seed") = 0, py::arg("heuristic") = "hmax", py::arg("ucb") = py::none(),
        py::arg("stop_when_provably_optimal") = true, py::arg("state") = py::none(),
        "Run one anytime MHSP search; returns the best solution or the most-visited partial plan.");

  m.def("select",
        [](const GroundTask& t, const std::string& algo, std::optional<std::uint64_t> iterations,
           std::optional<double> ms, std::uint64_t seed, const std::string& heuristic, std::optional<Facts> state) {
          AgentConfig cfg;
          cfg.selector = selector_from_string(algo);
          cfg.heuristic = heuristic_from_string(heuristic);
          const Heuristic h(t, cfg.heuristic);
          auto sel = make_selector(t, h, cfg, seed);
          const auto r = sel->select(state_or_initial(t, state), make_budget(iterations, ms), nullptr);
          py::dict d;
          d["plan"] = action_names(t, r.plan);
          d["status"] = to_string(r.status);
          d["reached_goal"] = r.reached_goal;
          d["budget_used"] = r.budget_used;
          return d;
        },
        py::arg("task"), py::arg("algo") = "mhsp", py::kw_only(), py::arg("iterations") = py::none(),
        py::arg("ms") = py::none(), py::arg("seed") = 0, py::arg("heuristic") = "hmax",
        py::arg("state") = py::none());

  m.def("run_trials",
        [](const GroundTask& t, const std::string& algo, std::optional<std::uint64_t> iterations,
           std::optional<double> ms, std::size_t episodes, bool learning, std::uint64_t seed,
           const std::string& heuristic, const std::string& commit, std::size_t max_steps) {
          AgentConfig cfg;
          cfg.selector = selector_from_string(algo);
          cfg.decision = make_budget(iterations, ms);
          cfg.episodes = episodes;
          cfg.learning = learning;
          cfg.seed = seed;
          cfg.heuristic = heuristic_from_string(heuristic);
          cfg.commit = commit_policy_from_string(commit);
          cfg.max_steps = max_steps;
          std::vector<std::size_t> table_sizes;
          const auto rec = run_trials(t, cfg, [&](std::size_t, const EpisodeResult&, const LearnedTable& table) {
            table_sizes.push_back(table.size());
          });
          py::dict d;
          d["min_length"] = rec.min_length;
          d["max_length"] = rec.max_length;
          d["avg_length"] = rec.avg_length;
          d["avg_time"] = rec.avg_time_s;
          d["avg_work"] = rec.avg_work;
          d["failure_pct"] = rec.failure_pct;
          py::list eps;
          for (std::size_t i = 0; i < rec.episodes.size(); ++i) {
            py::dict e = episode_dict(t, rec.episodes[i]);
            e["table_size"] = table_sizes[i];
            eps.append(e);
          }
          d["episodes"] = eps;
          return d;
        },
        py::arg("task"), py::arg("algo") = "mhsp", py::kw_only(), py::arg("iterations") = py::none(),
        py::arg("ms") = py::none(), py::arg("episodes") = 1, py::arg("learning") = false, py::arg("seed") = 0,
        py::arg("heuristic") = "hmax", py::arg("commit") = "first-action", py::arg("max_steps") = 0);

  m.def("run_experiment",
        [](int test, std::optional<std::string> gen, std::optional<std::string> domain,
           std::optional<std::string> problem, const std::vector<std::string>& algos,
           const std::vector<double>& budgets, const std::string& unit, std::size_t episodes, std::uint64_t seed,
           const std::string& heuristic, std::size_t max_steps) {
          ExperimentSpec spec;
          if (gen) set_generator(spec, *gen);
          spec.domain_file = domain.value_or("");
          spec.problem_file = problem.value_or("");
          spec.algorithms.clear();
          for (const auto& a : algos) spec.algorithms.push_back(selector_from_string(a));
          if (unit != "iters" && unit != "ms") throw std::invalid_argument("unit must be 'iters' or 'ms'");
          spec.budgets.clear();
          for (double b : budgets) {
            spec.budgets.push_back({unit == "ms" ? BudgetUnit::Milliseconds : BudgetUnit::Iterations, b});
          }
          spec.episodes = episodes;
          spec.seed = seed;
          spec.heuristic = heuristic_from_string(heuristic);
          spec.max_steps = max_steps;
          std::ostringstream main, extra;
          if (test == 3) {
            const auto r = run_test3(spec);
            write_partial_csv(main, r.rows);
            write_solve_budget_csv(extra, r.summary);
          } else if (test == 1 || test == 2) {
            const auto r = test == 1 ? run_test1(spec) : run_test2(spec);
            write_trial_csv(main, r.rows);
            write_episode_csv(extra, r.episodes);
          } else {
            throw std::invalid_argument("test must be 1, 2 or 3");
          }
          return py::make_tuple(main.str(), extra.str());
        },
        py::arg("test") = 1, py::kw_only(), py::arg("gen") = py::none(), py::arg("domain") = py::none(),
        py::arg("problem") = py::none(), py::arg("algos") = std::vector<std::string>{"mhsp"},
        py::arg("budgets") = std::vector<double>{100}, py::arg("unit") = "iters", py::arg("episodes") = 1,
        py::arg("seed") = 0, py::arg("heuristic") = "hmax", py::arg("max_steps") = 0,
        "Run a benchmark protocol and return (main_csv, companion_csv).");
}

#include "rtplan/task.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace rtplan {

GroundTask::GroundTask(std::vector<std::string> fact_names, std::vector<GroundAction> actions,
                       State initial_state, State goal)
    : fact_names_(std::move(fact_names)),
      actions_(std::move(actions)),
      initial_(std::move(initial_state)),
      goal_(std::move(goal)) {
  for (FactId f = 0; f < fact_names_.size(); ++f) fact_index_.emplace(fact_names_[f], f);
  for (ActionId a = 0; a < actions_.size(); ++a) action_index_.emplace(actions_[a].name, a);
}

FactId GroundTask::fact_id(std::string_view name) const {
  auto it = fact_index_.find(std::string(name));
  if (it == fact_index_.end()) throw std::out_of_range("unknown fact " + std::string(name));
  return it->second;
}

bool GroundTask::has_fact(std::string_view name) const {
  return fact_index_.count(std::string(name)) > 0;
}

ActionId GroundTask::action_id(std::string_view name) const {
  auto it = action_index_.find(std::string(name));
  if (it == action_index_.end()) throw std::out_of_range("unknown action " + std::string(name));
  return it->second;
}

State GroundTask::apply(const State& s, ActionId a) const { return rtplan::apply(s, actions_.at(a)); }

State GroundTask::apply_unchecked(const State& s, ActionId a) const {
  const GroundAction& act = actions_[a];
  State next = s;
  for (FactId f : act.add) next.insert(f);
  for (FactId f : act.del) next.erase(f);
  return next;
}

std::vector<ActionId> GroundTask::applicable_actions(const State& s) const {
  std::vector<ActionId> out;
  for (ActionId a = 0; a < actions_.size(); ++a) {
    if (s.contains_all(actions_[a].precond)) out.push_back(a);
  }
  return out;
}

State GroundTask::make_state(const std::vector<std::string>& names) const {
  State s(num_facts());
  for (const auto& n : names) s.insert(fact_id(n));
  return s;
}

std::string GroundTask::describe(const State& s) const {
  std::string out = "{";
  bool first = true;
  for (FactId f : s.facts()) {
    if (!first) out += ' ';
    first = false;
    out += fact_names_[f];
  }
  return out + "}";
}

bool applicable(const State& s, const GroundAction& a) { return s.contains_all(a.precond); }

State apply(const State& s, const GroundAction& a) {
  if (!applicable(s, a)) throw NotApplicable("action " + a.name + " is not applicable");
  State next = s;
  for (FactId f : a.add) next.insert(f);
  for (FactId f : a.del) next.erase(f);
  return next;
}

bool is_goal(const State& s, const State& goal) { return goal.is_subset_of(s); }

namespace {

std::string atom_key(const std::string& predicate, const std::vector<std::string>& args) {
  std::string key = "(" + predicate;
  for (const auto& a : args) key += " " + a;
  return key + ")";
}

struct LiftedAtom {
  std::size_t predicate;
  // Non-negative: parameter index. Negative: -(constant index + 1).
  std::vector<int> terms;
};

struct CompiledOperator {
  const pddl::OperatorSchema* schema;
  std::vector<LiftedAtom> precond, add, del;
  std::vector<std::vector<std::size_t>> candidates;  // object indices per parameter
  // Static precondition atoms grouped by the deepest parameter they mention.
  std::vector<std::vector<const LiftedAtom*>> static_checks;
};

struct Interner {
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::string> names;

  std::uint32_t intern(const std::string& key) {
    auto [it, inserted] = index.emplace(key, static_cast<std::uint32_t>(names.size()));
    if (inserted) names.push_back(key);
    return it->second;
  }
};

struct RawAction {
  std::string name;
  std::vector<std::uint32_t> precond, add, del;
};

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

class Grounder {
 public:
  Grounder(const pddl::DomainDef& dom, const pddl::ProblemDef& prob, const GroundingOptions& opts)
      : dom_(dom), prob_(prob), opts_(opts) {
    for (const auto& c : dom.constants) objects_.push_back(&c);
    for (const auto& o : prob.objects) {
      const bool dup = std::any_of(objects_.begin(), objects_.end(),
                                   [&](const pddl::TypedName* t) { return t->name == o.name; });
      if (!dup) objects_.push_back(&o);
    }
    for (std::size_t i = 0; i < dom.predicates.size(); ++i) predicate_index_[dom.predicates[i].name] = i;
    std::vector<bool> fluent(dom.predicates.size(), false);
    for (const auto& op : dom.operators) {
      for (const auto& a : op.add) fluent[predicate_index_.at(a.predicate)] = true;
      for (const auto& a : op.del) fluent[predicate_index_.at(a.predicate)] = true;
    }
    static_ = std::vector<bool>(dom.predicates.size());
    for (std::size_t i = 0; i < fluent.size(); ++i) static_[i] = !fluent[i];
    for (const auto& a : prob.init) init_keys_.insert(atom_key(a.predicate, a.args));
  }

  GroundTask run(GroundingStats& stats) {
    for (const auto& a : prob_.init) temp_.intern(atom_key(a.predicate, a.args));
    for (const auto& a : prob_.goal) temp_.intern(atom_key(a.predicate, a.args));

    for (const auto& op : dom_.operators) {
      CompiledOperator c = compile(op);
      std::size_t count = 1;
      for (const auto& cand : c.candidates) count *= cand.size();
      stats.substitutions += count;
      if (count == 0) continue;
      std::vector<std::size_t> binding(op.params.size());
      enumerate(c, binding, 0, stats);
    }

    std::vector<bool> keep(raw_.size(), true);
    if (opts_.prune_unreachable) keep = relaxed_reachable_actions();

    // Final fact ids in first-seen order: init, goal, then action references.
    Interner facts;
    for (const auto& a : prob_.init) facts.intern(atom_key(a.predicate, a.args));
    for (const auto& a : prob_.goal) facts.intern(atom_key(a.predicate, a.args));
    std::vector<GroundAction> actions;
    auto remap = [&](const std::vector<std::uint32_t>& ids) {
      std::vector<FactId> out;
      out.reserve(ids.size());
      for (auto id : ids) out.push_back(facts.intern(temp_.names[id]));
      return out;
    };
    for (std::size_t i = 0; i < raw_.size(); ++i) {
      if (!keep[i]) continue;
      GroundAction g;
      g.name = raw_[i].name;
      g.precond = remap(raw_[i].precond);
      g.add = remap(raw_[i].add);
      g.del = remap(raw_[i].del);
      actions.push_back(std::move(g));
    }

    stats.pruned = stats.substitutions - stats.contradictory - actions.size();

    const std::size_t n = facts.names.size();
    State init(n), goal(n);
    for (const auto& a : prob_.init) init.insert(facts.index.at(atom_key(a.predicate, a.args)));
    for (const auto& a : prob_.goal) goal.insert(facts.index.at(atom_key(a.predicate, a.args)));
    return GroundTask(std::move(facts.names), std::move(actions), std::move(init), std::move(goal));
  }

 private:
  CompiledOperator compile(const pddl::OperatorSchema& op) {
    CompiledOperator c;
    c.schema = &op;
    auto lift = [&](const pddl::Atom& atom) {
      LiftedAtom l;
      l.predicate = predicate_index_.at(atom.predicate);
      for (const auto& arg : atom.args) {
        if (!arg.empty() && arg.front() == '?') {
          auto it = std::find_if(op.params.begin(), op.params.end(),
                                 [&](const pddl::TypedName& p) { return p.name == arg; });
          l.terms.push_back(static_cast<int>(it - op.params.begin()));
        } else {
          auto it = std::find_if(objects_.begin(), objects_.end(),
                                 [&](const pddl::TypedName* o) { return o->name == arg; });
          l.terms.push_back(-static_cast<int>(it - objects_.begin()) - 1);
        }
      }
      return l;
    };
    for (const auto& a : op.precond) c.precond.push_back(lift(a));
    for (const auto& a : op.add) c.add.push_back(lift(a));
    for (const auto& a : op.del) c.del.push_back(lift(a));
    for (const auto& p : op.params) {
      std::vector<std::size_t> cand;
      for (std::size_t i = 0; i < objects_.size(); ++i) {
        if (dom_.is_subtype(objects_[i]->type, p.type)) cand.push_back(i);
      }
      c.candidates.push_back(std::move(cand));
    }
    c.static_checks.resize(op.params.size() + 1);
    if (opts_.prune_unreachable) {
      for (const auto& l : c.precond) {
        if (!static_[l.predicate]) continue;
        int deepest = -1;
        for (int t : l.terms) deepest = std::max(deepest, t);
        c.static_checks[static_cast<std::size_t>(deepest + 1)].push_back(&l);
      }
    }
    return c;
  }

  std::string instantiate(const LiftedAtom& l, const std::vector<std::size_t>& binding) const {
    std::vector<std::string> args;
    for (int t : l.terms) {
      const std::size_t obj = t >= 0 ? binding[static_cast<std::size_t>(t)] : static_cast<std::size_t>(-t - 1);
      args.push_back(objects_[obj]->name);
    }
    return atom_key(dom_.predicates[l.predicate].name, args);
  }

  bool static_ok(const CompiledOperator& c, std::size_t level, const std::vector<std::size_t>& binding) const {
    for (const LiftedAtom* l : c.static_checks[level]) {
      if (!init_keys_.count(instantiate(*l, binding))) return false;
    }
    return true;
  }

  void enumerate(const CompiledOperator& c, std::vector<std::size_t>& binding, std::size_t depth,
                 GroundingStats& stats) {
    if (!static_ok(c, depth, binding)) return;
    if (depth == binding.size()) {
      emit(c, binding, stats);
      return;
    }
    for (std::size_t obj : c.candidates[depth]) {
      binding[depth] = obj;
      enumerate(c, binding, depth + 1, stats);
    }
  }

  void emit(const CompiledOperator& c, const std::vector<std::size_t>& binding, GroundingStats& stats) {
    RawAction r;
    for (const auto& l : c.precond) r.precond.push_back(temp_.intern(instantiate(l, binding)));
    for (const auto& l : c.add) r.add.push_back(temp_.intern(instantiate(l, binding)));
    for (const auto& l : c.del) r.del.push_back(temp_.intern(instantiate(l, binding)));
    sort_unique(r.precond);
    sort_unique(r.add);
    sort_unique(r.del);
    std::vector<std::uint32_t> overlap;
    std::set_intersection(r.add.begin(), r.add.end(), r.del.begin(), r.del.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty()) {
      ++stats.contradictory;
      return;
    }
    r.name = "(" + c.schema->name;
    for (std::size_t obj : binding) r.name += " " + objects_[obj]->name;
    r.name += ")";
    raw_.push_back(std::move(r));
  }

  std::vector<bool> relaxed_reachable_actions() const {
    std::vector<bool> reached(temp_.names.size(), false);
    for (const auto& a : prob_.init) reached[temp_.index.at(atom_key(a.predicate, a.args))] = true;
    std::vector<bool> fired(raw_.size(), false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < raw_.size(); ++i) {
        if (fired[i]) continue;
        const bool ok = std::all_of(raw_[i].precond.begin(), raw_[i].precond.end(),
                                    [&](std::uint32_t f) { return reached[f]; });
        if (!ok) continue;
        fired[i] = true;
        changed = true;
        for (auto f : raw_[i].add) reached[f] = true;
      }
    }
    return fired;
  }

  const pddl::DomainDef& dom_;
  const pddl::ProblemDef& prob_;
  GroundingOptions opts_;
  std::vector<const pddl::TypedName*> objects_;
  std::unordered_map<std::string, std::size_t> predicate_index_;
  std::vector<bool> static_;
  std::unordered_set<std::string> init_keys_;
  Interner temp_;
  std::vector<RawAction> raw_;
};

}  // namespace

GroundTask ground(const pddl::DomainDef& domain, const pddl::ProblemDef& problem,
                  const GroundingOptions& options, GroundingStats* stats) {
  GroundingStats local;
  Grounder g(domain, problem, options);
  GroundTask task = g.run(local);
  if (stats) *stats = local;
  return task;
}

GroundTask load_task(std::string_view domain_text, std::string_view problem_text,
                     const GroundingOptions& options) {
  const auto dom = pddl::parse_domain(domain_text);
  const auto prob = pddl::parse_problem(problem_text, dom);
  return ground(dom, prob, options);
}

State execute(const GroundTask& task, const State& start, const Plan& plan) {
  State s = start;
  for (ActionId a : plan.actions) s = task.apply(s, a);
  return s;
}

bool is_applicable_sequence(const GroundTask& task, const State& start, const Plan& plan) {
  State s = start;
  for (ActionId a : plan.actions) {
    if (a >= task.num_actions() || !task.applicable(s, a)) return false;
    s = task.apply_unchecked(s, a);
  }
  return true;
}

std::vector<std::string> action_names(const GroundTask& task, const Plan& plan) {
  std::vector<std::string> out;
  out.reserve(plan.actions.size());
  for (ActionId a : plan.actions) out.push_back(task.action(a).name);
  return out;
}

}  // namespace rtplan

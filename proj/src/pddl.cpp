#include "rtplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace rtplan::pddl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnsupportedFeature: return "unsupported feature";
    case ErrorKind::UndeclaredSymbol: return "undeclared symbol";
    case ErrorKind::ArityMismatch: return "arity mismatch";
  }
  return "error";
}

namespace {

std::string format_error(ErrorKind kind, int line, int column, const std::string& message) {
  std::ostringstream os;
  os << line << ':' << column << ": " << to_string(kind) << ": " << message;
  return os.str();
}

}  // namespace

ParseError::ParseError(ErrorKind kind, int line, int column, const std::string& message)
    : std::runtime_error(format_error(kind, line, column, message)),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

const PredicateDecl* DomainDef::find_predicate(std::string_view pred) const {
  for (const auto& p : predicates) {
    if (p.name == pred) return &p;
  }
  return nullptr;
}

bool DomainDef::has_type(std::string_view type) const {
  if (type == kRootType) return true;
  return std::any_of(types.begin(), types.end(),
                     [&](const TypedName& t) { return t.name == type; });
}

bool DomainDef::is_subtype(std::string_view type, std::string_view ancestor) const {
  if (ancestor == kRootType) return true;
  std::string current(type);
  // Bounded walk; a cyclic hierarchy terminates after |types| steps.
  for (std::size_t steps = 0; steps <= types.size(); ++steps) {
    if (current == ancestor) return true;
    auto it = std::find_if(types.begin(), types.end(),
                           [&](const TypedName& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->type;
  }
  return false;
}

namespace {

struct SExpr {
  bool is_list = false;
  std::string token;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_token(std::string_view t) const { return !is_list && token == t; }
};

[[noreturn]] void fail(ErrorKind kind, const SExpr& at, const std::string& msg) {
  throw ParseError(kind, at.line, at.column, msg);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(ErrorKind::Syntax, line_, col_, "empty input");
    SExpr root = read();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(ErrorKind::Syntax, line_, col_, "trailing input after top-level expression");
    }
    return root;
  }

 private:
  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError(ErrorKind::Syntax, line_, col_, "unexpected end of input");
    }
    SExpr e;
    e.line = line_;
    e.column = col_;
    const char c = text_[pos_];
    if (c == ')') throw ParseError(ErrorKind::Syntax, line_, col_, "unexpected ')'");
    if (c == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) {
          throw ParseError(ErrorKind::Syntax, e.line, e.column, "unbalanced '('");
        }
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      e.token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return e;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_variable(std::string_view s) { return !s.empty() && s.front() == '?'; }

const std::set<std::string, std::less<>> kAcceptedRequirements = {":strips", ":typing", ":equality"};

const std::set<std::string, std::less<>> kUnsupportedConnectives = {
    "or", "imply", "exists", "forall", "when", "=", "increase", "decrease", "assign",
    "scale-up", "scale-down", "either", "preference"};

const std::string& expect_token(const SExpr& e, const char* what) {
  if (e.is_list || e.token.empty()) fail(ErrorKind::Syntax, e, std::string("expected ") + what);
  return e.token;
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) fail(ErrorKind::Syntax, e, std::string("expected ") + what);
  return e;
}

// name [name...] [- type] ... ; `either` types are rejected.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin,
                                        std::vector<int>* positions = nullptr) {
  std::vector<TypedName> out;
  std::size_t untyped_from = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    if (item.is_list) {
      if (!item.items.empty() && item.items.front().is_token("either")) {
        fail(ErrorKind::UnsupportedFeature, item, "'either' types are not supported");
      }
      fail(ErrorKind::Syntax, item, "unexpected list in typed list");
    }
    if (item.token == "-") {
      if (i + 1 >= items.size()) fail(ErrorKind::Syntax, item, "missing type after '-'");
      const SExpr& type = items[i + 1];
      if (type.is_list) {
        if (!type.items.empty() && type.items.front().is_token("either")) {
          fail(ErrorKind::UnsupportedFeature, type, "'either' types are not supported");
        }
        fail(ErrorKind::Syntax, type, "expected type name");
      }
      if (untyped_from == out.size()) fail(ErrorKind::Syntax, item, "type without names");
      for (std::size_t k = untyped_from; k < out.size(); ++k) out[k].type = type.token;
      untyped_from = out.size();
      ++i;
      continue;
    }
    out.push_back(TypedName{item.token, std::string(kRootType)});
    if (positions) positions->push_back(static_cast<int>(i));
  }
  return out;
}

void check_requirements(const SExpr& section) {
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const auto& req = expect_token(section.items[i], "requirement flag");
    if (!kAcceptedRequirements.count(req)) {
      fail(ErrorKind::UnsupportedFeature, section.items[i], "requirement " + req);
    }
  }
}

class DomainBuilder {
 public:
  DomainDef build(const SExpr& root) {
    expect_list(root, "(define ...)");
    if (root.items.size() < 2 || !root.items[0].is_token("define")) {
      fail(ErrorKind::Syntax, root, "expected (define (domain <name>) ...)");
    }
    const SExpr& header = expect_list(root.items[1], "(domain <name>)");
    if (header.items.size() != 2 || !header.items[0].is_token("domain")) {
      fail(ErrorKind::Syntax, header, "expected (domain <name>)");
    }
    dom_.name = expect_token(header.items[1], "domain name");

    std::vector<const SExpr*> actions;
    const SExpr* types_section = nullptr;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& section = expect_list(root.items[i], "domain section");
      if (section.items.empty()) fail(ErrorKind::Syntax, section, "empty section");
      const auto& key = expect_token(section.items[0], "section keyword");
      if (key == ":requirements") {
        check_requirements(section);
        for (std::size_t k = 1; k < section.items.size(); ++k) {
          dom_.requirements.push_back(section.items[k].token);
        }
      } else if (key == ":types") {
        types_section = &section;
        dom_.types = parse_typed_list(section.items, 1);
      } else if (key == ":constants") {
        dom_.constants = parse_typed_list(section.items, 1);
        constant_sites_.push_back(&section);
      } else if (key == ":predicates") {
        parse_predicates(section);
      } else if (key == ":action") {
        actions.push_back(&section);
      } else if (key == ":functions" || key == ":derived" || key == ":durative-action" ||
                 key == ":constraints") {
        fail(ErrorKind::UnsupportedFeature, section, "section " + key);
      } else {
        fail(ErrorKind::Syntax, section, "unknown domain section " + key);
      }
    }

    if (types_section) {
      for (const auto& t : dom_.types) {
        if (!dom_.has_type(t.type)) {
          fail(ErrorKind::UndeclaredSymbol, *types_section, "parent type " + t.type);
        }
      }
    }
    for (const auto& c : dom_.constants) {
      if (!dom_.has_type(c.type)) {
        fail(ErrorKind::UndeclaredSymbol, *constant_sites_.front(), "type " + c.type);
      }
    }
    for (const auto& p : dom_.predicates) {
      for (const auto& param : p.params) {
        if (!dom_.has_type(param.type)) {
          fail(ErrorKind::UndeclaredSymbol, *predicate_section_, "type " + param.type);
        }
      }
    }
    for (const SExpr* a : actions) dom_.operators.push_back(parse_action(*a));
    return std::move(dom_);
  }

 private:
  void parse_predicates(const SExpr& section) {
    predicate_section_ = &section;
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const SExpr& decl = expect_list(section.items[i], "predicate declaration");
      if (decl.items.empty()) fail(ErrorKind::Syntax, decl, "empty predicate declaration");
      PredicateDecl p;
      p.name = expect_token(decl.items[0], "predicate name");
      p.params = parse_typed_list(decl.items, 1);
      for (const auto& param : p.params) {
        if (!is_variable(param.name)) fail(ErrorKind::Syntax, decl, "predicate parameter must be a variable");
      }
      if (dom_.find_predicate(p.name)) fail(ErrorKind::Syntax, decl, "duplicate predicate " + p.name);
      dom_.predicates.push_back(std::move(p));
    }
  }

  OperatorSchema parse_action(const SExpr& section) {
    OperatorSchema op;
    if (section.items.size() < 2) fail(ErrorKind::Syntax, section, "action without name");
    op.name = expect_token(section.items[1], "action name");
    const SExpr* precond = nullptr;
    const SExpr* effect = nullptr;
    for (std::size_t i = 2; i < section.items.size(); i += 2) {
      const auto& key = expect_token(section.items[i], "action keyword");
      if (i + 1 >= section.items.size()) fail(ErrorKind::Syntax, section.items[i], "missing value for " + key);
      const SExpr& value = section.items[i + 1];
      if (key == ":parameters") {
        expect_list(value, "parameter list");
        op.params = parse_typed_list(value.items, 0);
        std::unordered_set<std::string> seen;
        for (const auto& p : op.params) {
          if (!is_variable(p.name)) fail(ErrorKind::Syntax, value, "parameter " + p.name + " is not a variable");
          if (!seen.insert(p.name).second) fail(ErrorKind::Syntax, value, "duplicate parameter " + p.name);
          if (!dom_.has_type(p.type)) fail(ErrorKind::UndeclaredSymbol, value, "type " + p.type);
        }
      } else if (key == ":precondition") {
        precond = &value;
      } else if (key == ":effect") {
        effect = &value;
      } else {
        fail(ErrorKind::Syntax, section.items[i], "unknown action keyword " + key);
      }
    }
    if (precond) collect_precondition(*precond, op, op.precond);
    if (effect) collect_effect(*effect, op);
    return op;
  }

  void reject_connective(const SExpr& e, const std::string& head) {
    if (kUnsupportedConnectives.count(head)) {
      fail(ErrorKind::UnsupportedFeature, e, "'" + head + "' is not supported");
    }
  }

  void collect_precondition(const SExpr& e, const OperatorSchema& op, std::vector<Atom>& out) {
    expect_list(e, "formula");
    if (e.items.empty()) return;
    const auto& head = expect_token(e.items[0], "formula head");
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) collect_precondition(e.items[i], op, out);
      return;
    }
    if (head == "not") fail(ErrorKind::UnsupportedFeature, e, "negative preconditions are not supported");
    reject_connective(e, head);
    out.push_back(parse_atom(e, &op));
  }

  void collect_effect(const SExpr& e, OperatorSchema& op) {
    expect_list(e, "effect");
    if (e.items.empty()) return;
    const auto& head = expect_token(e.items[0], "effect head");
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) collect_effect(e.items[i], op);
      return;
    }
    if (head == "not") {
      if (e.items.size() != 2) fail(ErrorKind::Syntax, e, "(not <atom>) takes one argument");
      const SExpr& inner = expect_list(e.items[1], "atom");
      if (!inner.items.empty() && !inner.items[0].is_list) reject_connective(inner, inner.items[0].token);
      op.del.push_back(parse_atom(inner, &op));
      return;
    }
    reject_connective(e, head);
    op.add.push_back(parse_atom(e, &op));
  }

  Atom parse_atom(const SExpr& e, const OperatorSchema* op) {
    if (e.items.empty()) fail(ErrorKind::Syntax, e, "empty atom");
    Atom atom;
    atom.predicate = expect_token(e.items[0], "predicate");
    const PredicateDecl* decl = dom_.find_predicate(atom.predicate);
    if (!decl) fail(ErrorKind::UndeclaredSymbol, e, "predicate " + atom.predicate);
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const auto& arg = expect_token(e.items[i], "term");
      if (is_variable(arg)) {
        const bool bound = op && std::any_of(op->params.begin(), op->params.end(),
                                             [&](const TypedName& p) { return p.name == arg; });
        if (!bound) fail(ErrorKind::UndeclaredSymbol, e.items[i], "variable " + arg);
      } else {
        const bool known = std::any_of(dom_.constants.begin(), dom_.constants.end(),
                                       [&](const TypedName& c) { return c.name == arg; });
        if (!known) fail(ErrorKind::UndeclaredSymbol, e.items[i], "constant " + arg);
      }
      atom.args.push_back(arg);
    }
    if (atom.args.size() != decl->params.size()) {
      fail(ErrorKind::ArityMismatch, e,
           atom.predicate + " expects " + std::to_string(decl->params.size()) + " arguments, got " +
               std::to_string(atom.args.size()));
    }
    return atom;
  }

  DomainDef dom_;
  const SExpr* predicate_section_ = nullptr;
  std::vector<const SExpr*> constant_sites_;
};

class ProblemBuilder {
 public:
  explicit ProblemBuilder(const DomainDef& dom) : dom_(dom) {}

  ProblemDef build(const SExpr& root) {
    expect_list(root, "(define ...)");
    if (root.items.size() < 2 || !root.items[0].is_token("define")) {
      fail(ErrorKind::Syntax, root, "expected (define (problem <name>) ...)");
    }
    const SExpr& header = expect_list(root.items[1], "(problem <name>)");
    if (header.items.size() != 2 || !header.items[0].is_token("problem")) {
      fail(ErrorKind::Syntax, header, "expected (problem <name>)");
    }
    prob_.name = expect_token(header.items[1], "problem name");

    const SExpr* init = nullptr;
    const SExpr* goal = nullptr;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& section = expect_list(root.items[i], "problem section");
      if (section.items.empty()) fail(ErrorKind::Syntax, section, "empty section");
      const auto& key = expect_token(section.items[0], "section keyword");
      if (key == ":domain") {
        if (section.items.size() != 2) fail(ErrorKind::Syntax, section, "expected (:domain <name>)");
        prob_.domain_name = expect_token(section.items[1], "domain name");
        if (prob_.domain_name != dom_.name) {
          fail(ErrorKind::UndeclaredSymbol, section.items[1], "domain " + prob_.domain_name);
        }
      } else if (key == ":requirements") {
        check_requirements(section);
      } else if (key == ":objects") {
        auto objs = parse_typed_list(section.items, 1);
        for (const auto& o : objs) {
          if (!dom_.has_type(o.type)) fail(ErrorKind::UndeclaredSymbol, section, "type " + o.type);
        }
        prob_.objects.insert(prob_.objects.end(), objs.begin(), objs.end());
      } else if (key == ":init") {
        init = &section;
      } else if (key == ":goal") {
        goal = &section;
      } else if (key == ":metric" || key == ":constraints") {
        fail(ErrorKind::UnsupportedFeature, section, "section " + key);
      } else {
        fail(ErrorKind::Syntax, section, "unknown problem section " + key);
      }
    }
    if (prob_.domain_name.empty()) prob_.domain_name = dom_.name;

    if (init) {
      for (std::size_t i = 1; i < init->items.size(); ++i) {
        const SExpr& e = expect_list(init->items[i], "initial atom");
        if (!e.items.empty() && !e.items[0].is_list) {
          const auto& head = e.items[0].token;
          if (head == "not" || head == "=" || kUnsupportedConnectives.count(head)) {
            fail(ErrorKind::UnsupportedFeature, e, "'" + head + "' in :init");
          }
        }
        prob_.init.push_back(parse_ground_atom(e));
      }
    }
    if (goal) {
      if (goal->items.size() != 2) fail(ErrorKind::Syntax, *goal, "expected (:goal <formula>)");
      collect_goal(goal->items[1]);
    }
    return std::move(prob_);
  }

 private:
  void collect_goal(const SExpr& e) {
    expect_list(e, "goal formula");
    if (e.items.empty()) return;
    const auto& head = expect_token(e.items[0], "formula head");
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) collect_goal(e.items[i]);
      return;
    }
    if (head == "not") fail(ErrorKind::UnsupportedFeature, e, "negative goals are not supported");
    if (kUnsupportedConnectives.count(head)) {
      fail(ErrorKind::UnsupportedFeature, e, "'" + head + "' is not supported");
    }
    prob_.goal.push_back(parse_ground_atom(e));
  }

  bool known_object(std::string_view name) const {
    auto match = [&](const TypedName& t) { return t.name == name; };
    return std::any_of(prob_.objects.begin(), prob_.objects.end(), match) ||
           std::any_of(dom_.constants.begin(), dom_.constants.end(), match);
  }

  Atom parse_ground_atom(const SExpr& e) {
    if (e.items.empty()) fail(ErrorKind::Syntax, e, "empty atom");
    Atom atom;
    atom.predicate = expect_token(e.items[0], "predicate");
    const PredicateDecl* decl = dom_.find_predicate(atom.predicate);
    if (!decl) fail(ErrorKind::UndeclaredSymbol, e, "predicate " + atom.predicate);
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const auto& arg = expect_token(e.items[i], "object");
      if (is_variable(arg)) fail(ErrorKind::Syntax, e.items[i], "variable in ground atom");
      if (!known_object(arg)) fail(ErrorKind::UndeclaredSymbol, e.items[i], "object " + arg);
      atom.args.push_back(arg);
    }
    if (atom.args.size() != decl->params.size()) {
      fail(ErrorKind::ArityMismatch, e,
           atom.predicate + " expects " + std::to_string(decl->params.size()) + " arguments, got " +
               std::to_string(atom.args.size()));
    }
    return atom;
  }

  const DomainDef& dom_;
  ProblemDef prob_;
};

void write_typed_list(std::ostream& os, const std::vector<TypedName>& names) {
  bool first = true;
  for (const auto& n : names) {
    if (!first) os << ' ';
    first = false;
    os << n.name << " - " << n.type;
  }
}

void write_atom(std::ostream& os, const Atom& a) {
  os << '(' << a.predicate;
  for (const auto& arg : a.args) os << ' ' << arg;
  os << ')';
}

void write_conjunction(std::ostream& os, const std::vector<Atom>& atoms, const std::vector<Atom>* negated = nullptr) {
  os << "(and";
  for (const auto& a : atoms) {
    os << ' ';
    write_atom(os, a);
  }
  if (negated) {
    for (const auto& a : *negated) {
      os << " (not ";
      write_atom(os, a);
      os << ')';
    }
  }
  os << ')';
}

}  // namespace

DomainDef parse_domain(std::string_view text) {
  Reader reader(text);
  const SExpr root = reader.read_document();
  return DomainBuilder{}.build(root);
}

ProblemDef parse_problem(std::string_view text, const DomainDef& domain) {
  Reader reader(text);
  const SExpr root = reader.read_document();
  return ProblemBuilder{domain}.build(root);
}

std::string to_pddl(const DomainDef& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types ";
    write_typed_list(os, d.types);
    os << ")\n";
  }
  if (!d.constants.empty()) {
    os << "  (:constants ";
    write_typed_list(os, d.constants);
    os << ")\n";
  }
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << "\n    (" << p.name;
    if (!p.params.empty()) {
      os << ' ';
      write_typed_list(os, p.params);
    }
    os << ')';
  }
  os << ")\n";
  for (const auto& op : d.operators) {
    os << "  (:action " << op.name << "\n    :parameters (";
    write_typed_list(os, op.params);
    os << ")\n    :precondition ";
    write_conjunction(os, op.precond);
    os << "\n    :effect ";
    write_conjunction(os, op.add, &op.del);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string to_pddl(const ProblemDef& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")\n";
  os << "  (:objects ";
  write_typed_list(os, p.objects);
  os << ")\n  (:init";
  for (const auto& a : p.init) {
    os << "\n    ";
    write_atom(os, a);
  }
  os << ")\n  (:goal ";
  write_conjunction(os, p.goal);
  os << "))\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rtplan::pddl

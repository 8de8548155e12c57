#pragma once

// Parser for the STRIPS + typing fragment of PDDL.
//
// Identifiers are case-insensitive and are lowercased on input. Only positive
// conjunctive preconditions and goals are accepted; delete effects are written
// as (not <atom>) inside the effect conjunction.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rtplan::pddl {

enum class ErrorKind { Syntax, UnsupportedFeature, UndeclaredSymbol, ArityMismatch };

const char* to_string(ErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ErrorKind kind, int line, int column, const std::string& message);

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  // Message without the line:column prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  int line_;
  int column_;
  std::string detail_;
};

inline constexpr std::string_view kRootType = "object";

struct TypedName {
  std::string name;
  std::string type{kRootType};
  friend bool operator==(const TypedName&, const TypedName&) = default;
};

// A predicate applied to arguments. In operator schemas, arguments starting
// with '?' are variables; everything else is a constant.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct OperatorSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Atom> precond;
  std::vector<Atom> add;
  std::vector<Atom> del;
  friend bool operator==(const OperatorSchema&, const OperatorSchema&) = default;
};

struct DomainDef {
  std::string name;
  std::vector<std::string> requirements;
  // Each declared type with its parent; "object" is implicit.
  std::vector<TypedName> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<OperatorSchema> operators;

  const PredicateDecl* find_predicate(std::string_view name) const;
  bool has_type(std::string_view type) const;
  // True iff `type` equals `ancestor` or inherits from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;

  friend bool operator==(const DomainDef&, const DomainDef&) = default;
};

struct ProblemDef {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;
  friend bool operator==(const ProblemDef&, const ProblemDef&) = default;
};

DomainDef parse_domain(std::string_view text);
ProblemDef parse_problem(std::string_view text, const DomainDef& domain);

// Canonical PDDL rendering; parsing the output yields an equal structure.
std::string to_pddl(const DomainDef& domain);
std::string to_pddl(const ProblemDef& problem);

std::string read_file(const std::string& path);

}  // namespace rtplan::pddl

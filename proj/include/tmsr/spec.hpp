#pragma once

// The spec-file language.
//
//   timed-msr 1
//   sort Drone Pnt
//   const d1 : Drone
//   fn f : Nat Nat -> Nat
//   pred Dr : Drone Nat Nat Nat
//   var Id : Drone
//   param k = 20
//   rule "north": Time@T, Dr(Id,X,Y,s(E))@T1 -> Time@T, Dr(Id,X,s(Y),E)@(T+1)
//   init: Time@0, Dr(d1,0,0,5)@0
//   critical "empty": { Dr(Id,X,Y,0)@T }
//
// A line starting with whitespace continues the previous statement. `#`
// starts a comment. Identifiers after `@` are time variables and need no
// declaration.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tmsr/rules.hpp"

namespace tmsr {

// Source position. Compares equal to any other position so that ASTs from
// differently formatted sources compare by content.
struct Loc {
  int line = 0;
  int col = 0;
  friend bool operator==(const Loc&, const Loc&) { return true; }
};

struct TermAst {
  std::string name;  // empty for a numeral
  std::uint64_t number = 0;
  std::vector<TermAst> args;
  Loc loc;
  friend bool operator==(const TermAst&, const TermAst&) = default;
};

struct FactAst {
  std::string pred;
  std::vector<TermAst> args;
  Loc loc;
  friend bool operator==(const FactAst&, const FactAst&) = default;
};

// F@T, F@(T+n) or F@n (tvar empty).
struct TimedFactAst {
  FactAst fact;
  std::string tvar;
  std::uint64_t value = 0;
  Loc loc;
  friend bool operator==(const TimedFactAst&, const TimedFactAst&) = default;
};

struct ConstraintAst {
  std::string lhs;
  std::string op;  // ">", "=" or ">="
  std::string rhs;
  std::int64_t offset = 0;
  Loc loc;
  friend bool operator==(const ConstraintAst&, const ConstraintAst&) = default;
};

struct SortDecl {
  std::vector<std::string> names;
  Loc loc;
  friend bool operator==(const SortDecl&, const SortDecl&) = default;
};
struct ConstDecl {
  std::vector<std::string> names;
  std::string sort;
  Loc loc;
  friend bool operator==(const ConstDecl&, const ConstDecl&) = default;
};
struct FnDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  Loc loc;
  friend bool operator==(const FnDecl&, const FnDecl&) = default;
};
struct PredDecl {
  std::string name;
  std::vector<std::string> args;
  Loc loc;
  friend bool operator==(const PredDecl&, const PredDecl&) = default;
};
struct VarDecl {
  std::vector<std::string> names;
  std::string sort;
  Loc loc;
  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};
struct ParamDecl {
  std::string name;
  std::uint64_t value = 0;
  Loc loc;
  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};
struct RuleDecl {
  std::string name;
  std::vector<TimedFactAst> lhs;
  std::vector<ConstraintAst> guard;
  std::vector<TimedFactAst> rhs;
  Loc loc;
  friend bool operator==(const RuleDecl&, const RuleDecl&) = default;
};
struct InitDecl {
  std::vector<TimedFactAst> facts;
  Loc loc;
  friend bool operator==(const InitDecl&, const InitDecl&) = default;
};
struct CriticalDecl {
  std::string name;
  std::vector<TimedFactAst> facts;
  std::vector<ConstraintAst> constraints;
  Loc loc;
  friend bool operator==(const CriticalDecl&, const CriticalDecl&) = default;
};

using Stmt = std::variant<SortDecl, ConstDecl, FnDecl, PredDecl, VarDecl, ParamDecl, RuleDecl,
                          InitDecl, CriticalDecl>;

struct SpecFile {
  int version = 1;
  std::vector<Stmt> stmts;
  friend bool operator==(const SpecFile&, const SpecFile&) = default;
};

// Throws SpecError.
SpecFile parse_spec(const std::string& text);
std::string print_spec(const SpecFile& f);

struct Model {
  SpecFile ast;
  System sys;
  Configuration init;
  CriticalSpec cs;
  std::optional<std::uint64_t> ticks;
};

// Resolves names, checks sorts and rule shape, expands >= guards.
// Throws SpecError.
Model load(const SpecFile& f);
Model load_text(const std::string& text);
Model load_file(const std::string& path);

// Helpers for reading values back from reports.
Fact parse_ground_fact(const Signature& sig, const std::string& text);
TermCode parse_ground_term(const Signature& sig, const std::string& text);

}  // namespace tmsr

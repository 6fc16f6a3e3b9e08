#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tmsr/term.hpp"

namespace tmsr {

// lhs > rhs + offset, or lhs = rhs + offset.
struct TimeConstraint {
  enum class Rel { greater, equal };
  Rel rel = Rel::greater;
  TimeVarId lhs = 0;
  TimeVarId rhs = 0;
  std::int64_t offset = 0;

  friend bool operator==(const TimeConstraint&, const TimeConstraint&) = default;
};

// Throws SubstitutionError when either variable is unmapped. `vars` is only
// used for the message.
bool eval_constraint(const TimeConstraint& c, const Substitution& s, const VarTable* vars = nullptr);

struct TimedPattern {
  FactPattern fact;
  TimeVarId tvar = 0;
};

struct LhsFact {
  FactPattern fact;
  TimeVarId tvar = 0;
  bool preserved = false;
};

struct RhsFact {
  FactPattern fact;
  TimeVarId tvar = 0;
  Timestamp offset = 0;
  // Index into lhs when this fact restates a preserved precondition fact.
  int preserved_of = -1;
};

// One instantaneous rule. A guard containing >= is expanded before it gets
// here, so a source rule may become several Rule values with the same name.
struct Rule {
  std::string name;
  std::size_t decl_index = 0;
  std::optional<TimeVarId> now;  // variable of the Time fact, if any
  std::vector<LhsFact> lhs;      // declaration order, Time included
  std::vector<RhsFact> rhs;
  std::vector<TimeConstraint> guard;
  // Implicit now >= tvar for each consumed fact whose tvar differs from now.
  std::vector<TimeVarId> cr;

  std::size_t consumed_count() const;
  std::size_t created_count() const;
};

struct CriticalPair {
  std::string name;
  std::size_t decl_index = 0;
  std::vector<TimedPattern> facts;
  std::vector<TimeConstraint> constraints;
};

struct CriticalSpec {
  std::vector<CriticalPair> pairs;  // expanded alternatives share decl_index
  std::size_t source_count() const;
};

struct Match {
  Substitution sigma;
  std::vector<std::size_t> positions;  // config index per lhs fact
};

class System {
 public:
  System(std::shared_ptr<const Signature> sig, std::shared_ptr<const VarTable> vars,
         std::vector<Rule> rules, std::size_t declared_k,
         std::optional<Timestamp> dmax_override = std::nullopt);

  const Signature& sig() const { return *sig_; }
  const VarTable& vars() const { return *vars_; }
  std::shared_ptr<const Signature> sig_ptr() const { return sig_; }
  std::shared_ptr<const VarTable> vars_ptr() const { return vars_; }
  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t declared_k() const { return declared_k_; }
  std::optional<Timestamp> dmax_override() const { return dmax_override_; }
  Substitution empty_subst() const {
    return Substitution(vars_->term_var_count(), vars_->time_var_count());
  }

  // Rules worth trying on c, ascending. Rules whose precondition holds a
  // ground non-Time fact are only listed when that fact is present.
  std::vector<std::size_t> candidates(const Configuration& c) const;

 private:
  std::shared_ptr<const Signature> sig_;
  std::shared_ptr<const VarTable> vars_;
  std::vector<Rule> rules_;
  std::size_t declared_k_;
  std::optional<Timestamp> dmax_override_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::vector<std::size_t> unindexed_;
};

std::vector<Match> match_rule(const System& sys, const Rule& r, const Configuration& c);

// Matches the precondition of r against the facts at the given positions
// (one per lhs fact), checking the guard. Used to replay recorded steps.
std::optional<Match> match_at(const System& sys, const Rule& r, const Configuration& c,
                              const std::vector<std::size_t>& positions);

// Applies a match returned by match_rule. Enforces the k bound.
Configuration apply_match(const System& sys, const Rule& r, const Configuration& c, const Match& m);

// Checks that s satisfies the precondition and guard of r on c, then
// applies. Throws PreconditionError otherwise.
Configuration apply_rule(const System& sys, const Rule& r, const Configuration& c,
                         const Substitution& s);

Configuration tick(const Configuration& c);

struct Enabled {
  std::size_t rule;
  Match match;
};

std::vector<Enabled> enabled(const System& sys, const Configuration& c);
bool any_enabled(const System& sys, const Configuration& c);
inline bool must_tick(const System& sys, const Configuration& c) { return !any_enabled(sys, c); }

struct CriticalHit {
  std::size_t pair;
  Substitution sigma;
};

std::optional<CriticalHit> is_critical(const System& sys, const CriticalSpec& cs,
                                       const Configuration& c);

struct RuleVerdict {
  std::string name;
  std::size_t variant;  // index into System::rules
  bool ok;
  std::string reason;
};

struct ClassReport {
  bool ok = true;
  std::vector<RuleVerdict> rules;
};

ClassReport check_balanced(const System& sys);
ClassReport check_progressive(const System& sys);

Timestamp compute_dmax(const System& sys, const Configuration& init, const CriticalSpec& cs);
// Honours the declared override when it is not below the computed value.
Timestamp effective_dmax(const System& sys, const Configuration& init, const CriticalSpec& cs);

// Largest fact size over init and every rule pattern.
std::size_t default_k(const std::vector<Rule>& rules, const Configuration& init);

// Source-level helper: expand a constraint list that may contain >= into
// alternative lists. `geq` marks which entries are >=; those entries carry
// Rel::greater and produce a greater/equal pair.
std::vector<std::vector<TimeConstraint>> expand_geq(const std::vector<TimeConstraint>& cs,
                                                    const std::vector<bool>& geq);

}  // namespace tmsr

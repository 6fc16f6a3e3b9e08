#pragma once

// First-order typed terms, ground facts and configurations.
//
// Terms are stored in prefix form as a flat sequence of words. A word is
// either a function/constant symbol id or, with the high bit set, a term
// variable id. Because every symbol has a fixed arity the flat sequence
// determines the tree. Natural-number literals are desugared to s^n(z).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmsr {

using Word = std::uint32_t;
using SortId = std::uint32_t;
using PredId = std::uint32_t;
using FuncId = std::uint32_t;
using TermVarId = std::uint32_t;
using TimeVarId = std::uint32_t;
using Timestamp = std::uint64_t;
using TermCode = std::vector<Word>;

inline constexpr Word kVarTag = 0x80000000u;
inline constexpr bool is_var(Word w) { return (w & kVarTag) != 0; }
inline constexpr Word var_word(TermVarId v) { return v | kVarTag; }
inline constexpr TermVarId var_of(Word w) { return w & ~kVarTag; }

inline constexpr SortId kNat = 0;
inline constexpr PredId kTimePred = 0;
inline constexpr FuncId kZero = 0;
inline constexpr FuncId kSucc = 1;

class Signature {
 public:
  struct Function {
    std::string name;
    std::vector<SortId> args;
    SortId result;
  };
  struct Predicate {
    std::string name;
    std::vector<SortId> args;
  };

  // Installs sort Nat, constant z:Nat, function s:Nat->Nat and predicate Time.
  Signature();

  SortId add_sort(const std::string& name);
  FuncId add_constant(const std::string& name, SortId sort);
  FuncId add_function(const std::string& name, std::vector<SortId> args, SortId result);
  PredId add_predicate(const std::string& name, std::vector<SortId> args);

  std::optional<SortId> find_sort(std::string_view name) const;
  std::optional<FuncId> find_function(std::string_view name) const;
  std::optional<PredId> find_predicate(std::string_view name) const;

  const std::string& sort_name(SortId s) const { return sorts_.at(s); }
  const Function& function(FuncId f) const { return functions_.at(f); }
  const Predicate& predicate(PredId p) const { return predicates_.at(p); }

  std::size_t sort_count() const { return sorts_.size(); }
  std::size_t function_count() const { return functions_.size(); }
  std::size_t predicate_count() const { return predicates_.size(); }

  // J and E of the state-counting bound.
  std::size_t predicate_symbols() const { return predicates_.size(); }
  std::size_t term_symbols() const { return functions_.size(); }

  unsigned arity(Word symbol) const { return arity_[symbol]; }

 private:
  std::vector<std::string> sorts_;
  std::vector<Function> functions_;
  std::vector<Predicate> predicates_;
  std::vector<unsigned> arity_;
  std::unordered_map<std::string, SortId> sort_index_;
  std::unordered_map<std::string, FuncId> function_index_;
  std::unordered_map<std::string, PredId> predicate_index_;
};

// Term variables and time variables live in separate namespaces.
class VarTable {
 public:
  struct TermVar {
    std::string name;
    SortId sort;
  };

  TermVarId add_term_var(const std::string& name, SortId sort);
  TimeVarId add_time_var(const std::string& name);
  // Returns the existing id when the name is already a time variable.
  TimeVarId intern_time_var(const std::string& name);

  std::optional<TermVarId> find_term_var(std::string_view name) const;
  std::optional<TimeVarId> find_time_var(std::string_view name) const;

  const TermVar& term_var(TermVarId v) const { return term_vars_.at(v); }
  const std::string& time_var(TimeVarId v) const { return time_vars_.at(v); }
  std::size_t term_var_count() const { return term_vars_.size(); }
  std::size_t time_var_count() const { return time_vars_.size(); }

 private:
  std::vector<TermVar> term_vars_;
  std::vector<std::string> time_vars_;
  std::unordered_map<std::string, TermVarId> term_index_;
  std::unordered_map<std::string, TimeVarId> time_index_;
};

// Index one past the subterm starting at `pos`.
std::size_t subterm_end(const Signature& sig, std::span<const Word> code, std::size_t pos);

TermCode numeral(std::uint64_t n);
// If the subterm at `pos` is s^n(z), returns n.
std::optional<std::uint64_t> as_numeral(std::span<const Word> code, std::size_t pos);

bool is_ground(std::span<const Word> code);

// Prefix-form rendering with numerals resugared to decimal. `vars` may be
// null when the code is ground.
std::string render_term(const Signature& sig, const VarTable* vars, std::span<const Word> code,
                        std::size_t pos = 0);
std::string render_fact(const Signature& sig, const VarTable* vars, PredId pred,
                        std::span<const Word> args);

// A fact with possibly non-ground arguments, as it appears in rules and
// critical specifications. `args` is the concatenated prefix code of the
// argument terms.
struct FactPattern {
  PredId pred = kTimePred;
  TermCode args;

  friend bool operator==(const FactPattern&, const FactPattern&) = default;
};

// Immutable ground fact. Copies share the underlying data.
class Fact {
 public:
  Fact() = default;

  static Fact make(const Signature& sig, PredId pred, TermCode args);
  static Fact time();

  PredId predicate() const { return d_->pred; }
  std::span<const Word> args() const { return d_->args; }
  const std::string& text() const { return d_->text; }
  std::size_t hash() const { return d_->hash; }
  // Number of alphabet symbols: the predicate plus every argument symbol.
  std::size_t size() const { return 1 + d_->args.size(); }
  bool is_time() const { return d_->pred == kTimePred; }
  explicit operator bool() const { return d_ != nullptr; }

  friend bool operator==(const Fact& a, const Fact& b) {
    return a.d_ == b.d_ || (a.d_->pred == b.d_->pred && a.d_->args == b.d_->args);
  }

 private:
  struct Data {
    PredId pred;
    TermCode args;
    std::string text;
    std::size_t hash;
  };
  std::shared_ptr<const Data> d_;
};

struct TimedFact {
  Fact fact;
  Timestamp ts = 0;

  friend bool operator==(const TimedFact& a, const TimedFact& b) {
    return a.ts == b.ts && a.fact == b.fact;
  }
};

std::size_t fact_size(const TimedFact& f);
std::size_t fact_size(const FactPattern& f);

// Timestamp ascending, then the textual serialization of the fact.
bool canonical_less(const TimedFact& a, const TimedFact& b);

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::size_t term_vars, std::size_t time_vars)
      : terms_(term_vars), times_(time_vars) {}

  void bind_term(TermVarId v, TermCode value);
  void bind_time(TimeVarId v, Timestamp value);
  void unbind_term(TermVarId v) { terms_[v].reset(); }
  void unbind_time(TimeVarId v) { times_[v].reset(); }

  const TermCode* term(TermVarId v) const {
    return v < terms_.size() && terms_[v] ? &*terms_[v] : nullptr;
  }
  std::optional<Timestamp> time(TimeVarId v) const {
    return v < times_.size() ? times_[v] : std::nullopt;
  }

  std::size_t term_capacity() const { return terms_.size(); }
  std::size_t time_capacity() const { return times_.size(); }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::vector<std::optional<TermCode>> terms_;
  std::vector<std::optional<Timestamp>> times_;
};

// Homomorphic replacement of term variables. Throws SubstitutionError naming
// the first uncovered variable.
TermCode apply_subst(const VarTable& vars, std::span<const Word> code, const Substitution& s);
Fact apply_subst(const Signature& sig, const VarTable& vars, const FactPattern& f,
                 const Substitution& s);

// A multiset of ground timestamped facts with exactly one Time fact, kept
// in canonical order.
class Configuration {
 public:
  Configuration() = default;
  // Throws InputError unless exactly one Time fact is present.
  explicit Configuration(std::vector<TimedFact> facts);

  std::span<const TimedFact> facts() const { return facts_; }
  std::size_t size() const { return facts_.size(); }
  Timestamp time() const { return facts_[time_index_].ts; }
  std::size_t time_index() const { return time_index_; }
  std::size_t hash() const { return hash_; }

  Configuration advanced(Timestamp by = 1) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.hash_ == b.hash_ && a.facts_ == b.facts_;
  }

 private:
  std::vector<TimedFact> facts_;
  std::size_t time_index_ = 0;
  std::size_t hash_ = 0;

  void finish();
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

std::vector<TimedFact> canonical_sequence(const Configuration& c);

std::string render(const TimedFact& f);
std::string render(const Configuration& c);

}  // namespace tmsr

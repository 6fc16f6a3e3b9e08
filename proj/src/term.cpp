#include "tmsr/term.hpp"

#include <algorithm>
#include <functional>

#include "tmsr/error.hpp"

namespace tmsr {

const char* diag_code(Diag d) {
  switch (d) {
    case Diag::syntax: return "E_SYNTAX";
    case Diag::header: return "E_HEADER";
    case Diag::undeclared: return "E_UNDECLARED";
    case Diag::duplicate: return "E_DUPLICATE";
    case Diag::sort: return "E_SORT";
    case Diag::arity: return "E_ARITY";
    case Diag::time_fact: return "E_TIME";
    case Diag::rule_shape: return "E_RULE";
    case Diag::param: return "E_PARAM";
    case Diag::io: return "E_IO";
  }
  return "E_UNKNOWN";
}

SpecError::SpecError(Diag code, int line, int column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": error[" + diag_code(code) +
            "]: " + message),
      code_(code),
      line_(line),
      column_(column),
      detail_(message) {}

Signature::Signature() {
  add_sort("Nat");
  add_constant("z", kNat);
  add_function("s", {kNat}, kNat);
  add_predicate("Time", {});
}

SortId Signature::add_sort(const std::string& name) {
  if (sort_index_.contains(name)) throw Error("duplicate sort '" + name + "'");
  auto id = static_cast<SortId>(sorts_.size());
  sorts_.push_back(name);
  sort_index_.emplace(name, id);
  return id;
}

FuncId Signature::add_constant(const std::string& name, SortId sort) {
  return add_function(name, {}, sort);
}

FuncId Signature::add_function(const std::string& name, std::vector<SortId> args, SortId result) {
  if (function_index_.contains(name)) throw Error("duplicate symbol '" + name + "'");
  auto id = static_cast<FuncId>(functions_.size());
  if (id >= kVarTag) throw Error("too many symbols");
  arity_.push_back(static_cast<unsigned>(args.size()));
  functions_.push_back({name, std::move(args), result});
  function_index_.emplace(name, id);
  return id;
}

PredId Signature::add_predicate(const std::string& name, std::vector<SortId> args) {
  if (predicate_index_.contains(name)) throw Error("duplicate predicate '" + name + "'");
  auto id = static_cast<PredId>(predicates_.size());
  predicates_.push_back({name, std::move(args)});
  predicate_index_.emplace(name, id);
  return id;
}

namespace {
template <class Map>
auto find_in(const Map& m, std::string_view name) -> std::optional<typename Map::mapped_type> {
  auto it = m.find(std::string(name));
  if (it == m.end()) return std::nullopt;
  return it->second;
}
}  // namespace

std::optional<SortId> Signature::find_sort(std::string_view name) const {
  return find_in(sort_index_, name);
}
std::optional<FuncId> Signature::find_function(std::string_view name) const {
  return find_in(function_index_, name);
}
std::optional<PredId> Signature::find_predicate(std::string_view name) const {
  return find_in(predicate_index_, name);
}

TermVarId VarTable::add_term_var(const std::string& name, SortId sort) {
  if (term_index_.contains(name) || time_index_.contains(name))
    throw Error("duplicate variable '" + name + "'");
  auto id = static_cast<TermVarId>(term_vars_.size());
  term_vars_.push_back({name, sort});
  term_index_.emplace(name, id);
  return id;
}

TimeVarId VarTable::add_time_var(const std::string& name) {
  if (term_index_.contains(name) || time_index_.contains(name))
    throw Error("duplicate variable '" + name + "'");
  auto id = static_cast<TimeVarId>(time_vars_.size());
  time_vars_.push_back(name);
  time_index_.emplace(name, id);
  return id;
}

TimeVarId VarTable::intern_time_var(const std::string& name) {
  if (auto v = find_time_var(name)) return *v;
  return add_time_var(name);
}

std::optional<TermVarId> VarTable::find_term_var(std::string_view name) const {
  return find_in(term_index_, name);
}
std::optional<TimeVarId> VarTable::find_time_var(std::string_view name) const {
  return find_in(time_index_, name);
}

std::size_t subterm_end(const Signature& sig, std::span<const Word> code, std::size_t pos) {
  std::size_t need = 1;
  while (need > 0) {
    Word w = code[pos++];
    need -= 1;
    if (!is_var(w)) need += sig.arity(w);
  }
  return pos;
}

TermCode numeral(std::uint64_t n) {
  TermCode code(n + 1, kSucc);
  code.back() = kZero;
  return code;
}

std::optional<std::uint64_t> as_numeral(std::span<const Word> code, std::size_t pos) {
  std::uint64_t n = 0;
  while (pos < code.size() && code[pos] == kSucc) {
    ++n;
    ++pos;
  }
  if (pos < code.size() && code[pos] == kZero) return n;
  return std::nullopt;
}

bool is_ground(std::span<const Word> code) {
  return std::none_of(code.begin(), code.end(), [](Word w) { return is_var(w); });
}

namespace {

void render_into(std::string& out, const Signature& sig, const VarTable* vars,
                 std::span<const Word> code, std::size_t& pos) {
  Word w = code[pos];
  if (is_var(w)) {
    out += vars ? vars->term_var(var_of(w)).name : "?" + std::to_string(var_of(w));
    ++pos;
    return;
  }
  if (w == kSucc || w == kZero) {
    if (auto n = as_numeral(code, pos)) {
      out += std::to_string(*n);
      pos += *n + 1;
      return;
    }
  }
  const auto& f = sig.function(w);
  out += f.name;
  ++pos;
  if (f.args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (i) out += ',';
    render_into(out, sig, vars, code, pos);
  }
  out += ')';
}

}  // namespace

std::string render_term(const Signature& sig, const VarTable* vars, std::span<const Word> code,
                        std::size_t pos) {
  std::string out;
  render_into(out, sig, vars, code, pos);
  return out;
}

std::string render_fact(const Signature& sig, const VarTable* vars, PredId pred,
                        std::span<const Word> args) {
  const auto& p = sig.predicate(pred);
  std::string out = p.name;
  if (p.args.empty()) return out;
  out += '(';
  std::size_t pos = 0;
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    if (i) out += ',';
    render_into(out, sig, vars, args, pos);
  }
  out += ')';
  return out;
}

Fact Fact::make(const Signature& sig, PredId pred, TermCode args) {
  if (!is_ground(args)) throw Error("fact is not ground");
  Fact f;
  std::string text = render_fact(sig, nullptr, pred, args);
  std::size_t h = std::hash<std::string>{}(text);
  f.d_ = std::make_shared<const Data>(Data{pred, std::move(args), std::move(text), h});
  return f;
}

Fact Fact::time() {
  static const Fact t = [] {
    Fact f;
    std::string text = "Time";
    std::size_t h = std::hash<std::string>{}(text);
    f.d_ = std::make_shared<const Data>(Data{kTimePred, {}, std::move(text), h});
    return f;
  }();
  return t;
}

std::size_t fact_size(const TimedFact& f) { return f.fact.size(); }
std::size_t fact_size(const FactPattern& f) { return 1 + f.args.size(); }

bool canonical_less(const TimedFact& a, const TimedFact& b) {
  if (a.ts != b.ts) return a.ts < b.ts;
  if (a.fact == b.fact) return false;
  return a.fact.text() < b.fact.text();
}

void Substitution::bind_term(TermVarId v, TermCode value) {
  if (v >= terms_.size()) terms_.resize(v + 1);
  terms_[v] = std::move(value);
}

void Substitution::bind_time(TimeVarId v, Timestamp value) {
  if (v >= times_.size()) times_.resize(v + 1);
  times_[v] = value;
}

TermCode apply_subst(const VarTable& vars, std::span<const Word> code, const Substitution& s) {
  TermCode out;
  out.reserve(code.size());
  for (Word w : code) {
    if (!is_var(w)) {
      out.push_back(w);
      continue;
    }
    const TermCode* b = s.term(var_of(w));
    if (!b) throw SubstitutionError(vars.term_var(var_of(w)).name);
    out.insert(out.end(), b->begin(), b->end());
  }
  return out;
}

Fact apply_subst(const Signature& sig, const VarTable& vars, const FactPattern& f,
                 const Substitution& s) {
  return Fact::make(sig, f.pred, apply_subst(vars, f.args, s));
}

Configuration::Configuration(std::vector<TimedFact> facts) : facts_(std::move(facts)) {
  auto n = std::count_if(facts_.begin(), facts_.end(),
                         [](const TimedFact& f) { return f.fact.is_time(); });
  if (n != 1) throw InputError("single Time fact required (found " + std::to_string(n) + ")");
  std::sort(facts_.begin(), facts_.end(), canonical_less);
  finish();
}

void Configuration::finish() {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    const auto& f = facts_[i];
    if (f.fact.is_time()) time_index_ = i;
    h ^= f.fact.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<Timestamp>{}(f.ts) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  hash_ = h;
}

Configuration Configuration::advanced(Timestamp by) const {
  Configuration c;
  c.facts_ = facts_;
  auto t = c.facts_.begin() + static_cast<std::ptrdiff_t>(time_index_);
  TimedFact moved = *t;
  moved.ts += by;
  c.facts_.erase(t);
  c.facts_.insert(std::upper_bound(c.facts_.begin(), c.facts_.end(), moved, canonical_less), moved);
  c.finish();
  return c;
}

std::vector<TimedFact> canonical_sequence(const Configuration& c) {
  return {c.facts().begin(), c.facts().end()};
}

std::string render(const TimedFact& f) { return f.fact.text() + "@" + std::to_string(f.ts); }

std::string render(const Configuration& c) {
  std::string out = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += render(c.facts()[i]);
  }
  out += "}";
  return out;
}

}  // namespace tmsr

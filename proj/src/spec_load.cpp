#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tmsr/error.hpp"
#include "tmsr/spec.hpp"

namespace tmsr {

namespace detail {
FactAst parse_fact_text(const std::string& text);
TermAst parse_term_text(const std::string& text);
}  // namespace detail

namespace {

[[noreturn]] void fail(Diag d, Loc at, const std::string& msg) {
  throw SpecError(d, at.line, at.col, msg);
}

class Loader {
 public:
  Loader() : sig_(std::make_shared<Signature>()), vars_(std::make_shared<VarTable>()) {}

  Model run(const SpecFile& f) {
    for (const auto& s : f.stmts) std::visit([&](const auto& d) { on(d); }, s);
    return finish(f);
  }

  // Resolves t against the signature, appending its code; returns its sort.
  SortId term(const TermAst& t, TermCode& out) {
    if (t.name.empty()) {
      auto n = numeral(t.number);
      out.insert(out.end(), n.begin(), n.end());
      return kNat;
    }
    if (t.args.empty()) {
      if (auto v = vars_->find_term_var(t.name)) {
        out.push_back(var_word(*v));
        return vars_->term_var(*v).sort;
      }
      if (vars_->find_time_var(t.name))
        fail(Diag::sort, t.loc, "'" + t.name + "' is a time variable, not a term");
    }
    auto f = sig_->find_function(t.name);
    if (!f) fail(Diag::undeclared, t.loc, "undeclared symbol '" + t.name + "'");
    const auto& fn = sig_->function(*f);
    if (fn.args.size() != t.args.size())
      fail(Diag::arity, t.loc,
           "'" + t.name + "' takes " + std::to_string(fn.args.size()) + " arguments, given " +
               std::to_string(t.args.size()));
    out.push_back(*f);
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      SortId s = term(t.args[i], out);
      if (s != fn.args[i])
        fail(Diag::sort, t.args[i].loc,
             "argument " + std::to_string(i + 1) + " of '" + t.name + "' has sort " +
                 sig_->sort_name(s) + ", expected " + sig_->sort_name(fn.args[i]));
    }
    return fn.result;
  }

  FactPattern fact(const FactAst& f) {
    auto p = sig_->find_predicate(f.pred);
    if (!p) fail(Diag::undeclared, f.loc, "undeclared predicate '" + f.pred + "'");
    const auto& pd = sig_->predicate(*p);
    if (pd.args.size() != f.args.size())
      fail(Diag::arity, f.loc,
           "'" + f.pred + "' takes " + std::to_string(pd.args.size()) + " arguments, given " +
               std::to_string(f.args.size()));
    FactPattern out{*p, {}};
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      SortId s = term(f.args[i], out.args);
      if (s != pd.args[i])
        fail(Diag::sort, f.args[i].loc,
             "argument " + std::to_string(i + 1) + " of '" + f.pred + "' has sort " +
                 sig_->sort_name(s) + ", expected " + sig_->sort_name(pd.args[i]));
    }
    return out;
  }

  const Signature& sig() const { return *sig_; }

 private:
  std::shared_ptr<Signature> sig_;
  std::shared_ptr<VarTable> vars_;
  std::vector<Rule> rules_;
  std::size_t rule_decls_ = 0;
  std::vector<TimedFact> init_;
  std::optional<Loc> init_loc_;
  CriticalSpec cs_;
  std::optional<ParamDecl> k_, dmax_, ticks_;

  SortId sort(const std::string& name, Loc at) {
    auto s = sig_->find_sort(name);
    if (!s) fail(Diag::undeclared, at, "undeclared sort '" + name + "'");
    return *s;
  }

  void name_free(const std::string& name, Loc at) {
    if (sig_->find_function(name) || sig_->find_predicate(name) || vars_->find_term_var(name) ||
        vars_->find_time_var(name))
      fail(Diag::duplicate, at, "'" + name + "' is already declared");
  }

  void on(const SortDecl& d) {
    for (const auto& n : d.names) {
      if (sig_->find_sort(n)) fail(Diag::duplicate, d.loc, "sort '" + n + "' is already declared");
      sig_->add_sort(n);
    }
  }
  void on(const ConstDecl& d) {
    SortId s = sort(d.sort, d.loc);
    for (const auto& n : d.names) {
      name_free(n, d.loc);
      sig_->add_constant(n, s);
    }
  }
  void on(const FnDecl& d) {
    std::vector<SortId> args;
    for (const auto& a : d.args) args.push_back(sort(a, d.loc));
    SortId r = sort(d.result, d.loc);
    name_free(d.name, d.loc);
    sig_->add_function(d.name, std::move(args), r);
  }
  void on(const PredDecl& d) {
    std::vector<SortId> args;
    for (const auto& a : d.args) args.push_back(sort(a, d.loc));
    name_free(d.name, d.loc);
    sig_->add_predicate(d.name, std::move(args));
  }
  void on(const VarDecl& d) {
    SortId s = sort(d.sort, d.loc);
    for (const auto& n : d.names) {
      name_free(n, d.loc);
      vars_->add_term_var(n, s);
    }
  }
  void on(const ParamDecl& d) {
    std::optional<ParamDecl>* slot = nullptr;
    if (d.name == "k") slot = &k_;
    else if (d.name == "dmax") slot = &dmax_;
    else if (d.name == "ticks") slot = &ticks_;
    else fail(Diag::param, d.loc, "unknown parameter '" + d.name + "' (expected k, dmax or ticks)");
    if (*slot) fail(Diag::duplicate, d.loc, "parameter '" + d.name + "' given twice");
    if (d.value == 0 && d.name != "ticks")
      fail(Diag::param, d.loc, "parameter '" + d.name + "' must be at least 1");
    *slot = d;
  }

  TimeVarId time_var(const std::string& name, Loc at) {
    if (vars_->find_term_var(name))
      fail(Diag::sort, at, "'" + name + "' is a term variable, not a time variable");
    if (sig_->find_function(name))
      fail(Diag::sort, at, "'" + name + "' is a constant, not a time variable");
    return vars_->intern_time_var(name);
  }

  static void term_vars_of(const TermCode& c, std::set<TermVarId>& out) {
    for (Word w : c)
      if (is_var(w)) out.insert(var_of(w));
  }

  std::vector<TimeConstraint> lower_constraints(const std::vector<ConstraintAst>& cs,
                                                std::vector<bool>& geq,
                                                const std::set<TimeVarId>& allowed,
                                                const char* where) {
    std::vector<TimeConstraint> out;
    for (const auto& c : cs) {
      TimeConstraint tc;
      tc.lhs = time_var(c.lhs, c.loc);
      tc.rhs = time_var(c.rhs, c.loc);
      tc.offset = c.offset;
      tc.rel = c.op == "=" ? TimeConstraint::Rel::equal : TimeConstraint::Rel::greater;
      for (const auto* n : {&c.lhs, &c.rhs})
        if (!allowed.contains(*vars_->find_time_var(*n)))
          fail(Diag::rule_shape, c.loc,
               "time variable '" + *n + "' does not occur in the " + where);
      out.push_back(tc);
      geq.push_back(c.op == ">=");
    }
    return out;
  }

  void on(const RuleDecl& d) {
    if (d.name == "tick") fail(Diag::rule_shape, d.loc, "the rule name 'tick' is reserved");
    Rule r;
    r.name = d.name;
    r.decl_index = rule_decls_++;
    std::set<TimeVarId> lhs_t;
    std::set<TermVarId> lhs_v;
    for (const auto& tf : d.lhs) {
      if (tf.tvar.empty())
        fail(Diag::rule_shape, tf.loc, "precondition facts need a time variable");
      if (tf.value != 0) fail(Diag::rule_shape, tf.loc, "precondition facts take a plain @T");
      LhsFact f{fact(tf.fact), time_var(tf.tvar, tf.loc), false};
      if (f.fact.pred == kTimePred) {
        if (r.now) fail(Diag::rule_shape, tf.loc, "at most one Time fact per side");
        r.now = f.tvar;
      }
      lhs_t.insert(f.tvar);
      term_vars_of(f.fact.args, lhs_v);
      r.lhs.push_back(std::move(f));
    }
    bool rhs_time = false;
    for (const auto& tf : d.rhs) {
      if (tf.tvar.empty()) fail(Diag::rule_shape, tf.loc, "created facts need a time variable");
      RhsFact q{fact(tf.fact), time_var(tf.tvar, tf.loc), tf.value, -1};
      if (!lhs_t.contains(q.tvar))
        fail(Diag::rule_shape, tf.loc,
             "time variable '" + tf.tvar + "' does not occur in the precondition");
      std::set<TermVarId> tv;
      term_vars_of(q.fact.args, tv);
      for (auto v : tv)
        if (!lhs_v.contains(v))
          fail(Diag::rule_shape, tf.loc,
               "variable '" + vars_->term_var(v).name + "' does not occur in the precondition");
      if (q.fact.pred == kTimePred) {
        if (rhs_time) fail(Diag::rule_shape, tf.loc, "at most one Time fact per side");
        rhs_time = true;
        if (!r.now || q.tvar != *r.now || q.offset != 0)
          fail(Diag::rule_shape, tf.loc, "the Time fact must be restated unchanged");
      }
      r.rhs.push_back(std::move(q));
    }
    if (r.now && !rhs_time)
      fail(Diag::rule_shape, d.loc, "the Time fact must be restated unchanged");

    // A created fact identical to a precondition fact, at the same time, is
    // the precondition fact kept in place.
    for (auto& q : r.rhs) {
      if (q.offset != 0) continue;
      for (std::size_t i = 0; i < r.lhs.size(); ++i) {
        auto& p = r.lhs[i];
        if (!p.preserved && p.tvar == q.tvar && p.fact == q.fact) {
          p.preserved = true;
          q.preserved_of = static_cast<int>(i);
          break;
        }
      }
    }
    if (r.now)
      for (const auto& p : r.lhs)
        if (!p.preserved && p.tvar != *r.now &&
            std::find(r.cr.begin(), r.cr.end(), p.tvar) == r.cr.end())
          r.cr.push_back(p.tvar);

    std::vector<bool> geq;
    auto guard = lower_constraints(d.guard, geq, lhs_t, "precondition");
    // now >= Ti over a consumed fact is already implied.
    for (std::size_t i = guard.size(); i-- > 0;) {
      const auto& g = guard[i];
      if (geq[i] && r.now && g.lhs == *r.now && g.offset == 0 &&
          std::find(r.cr.begin(), r.cr.end(), g.rhs) != r.cr.end()) {
        guard.erase(guard.begin() + static_cast<std::ptrdiff_t>(i));
        geq.erase(geq.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (auto& alt : expand_geq(guard, geq)) {
      Rule v = r;
      v.guard = std::move(alt);
      rules_.push_back(std::move(v));
    }
  }

  void on(const InitDecl& d) {
    if (!init_loc_) init_loc_ = d.loc;
    for (const auto& tf : d.facts) {
      if (!tf.tvar.empty())
        fail(Diag::syntax, tf.loc, "initial facts need a numeric timestamp");
      FactPattern p = fact(tf.fact);
      if (!is_ground(p.args)) fail(Diag::syntax, tf.loc, "initial facts must be ground");
      init_.push_back({Fact::make(*sig_, p.pred, std::move(p.args)), tf.value});
    }
  }

  void on(const CriticalDecl& d) {
    CriticalPair cp;
    cp.name = d.name;
    cp.decl_index = cs_.source_count();
    std::set<TimeVarId> ts;
    for (const auto& tf : d.facts) {
      if (tf.tvar.empty() || tf.value != 0)
        fail(Diag::rule_shape, tf.loc, "critical patterns take a plain @T");
      TimedPattern p{fact(tf.fact), time_var(tf.tvar, tf.loc)};
      ts.insert(p.tvar);
      cp.facts.push_back(std::move(p));
    }
    std::vector<bool> geq;
    auto cons = lower_constraints(d.constraints, geq, ts, "critical pattern");
    for (auto& alt : expand_geq(cons, geq)) {
      CriticalPair v = cp;
      v.constraints = std::move(alt);
      cs_.pairs.push_back(std::move(v));
    }
  }

  Model finish(const SpecFile& f) {
    Loc at = init_loc_.value_or(Loc{1, 1});
    auto n_time = std::count_if(init_.begin(), init_.end(),
                                [](const TimedFact& t) { return t.fact.is_time(); });
    if (n_time != 1)
      fail(Diag::time_fact, at,
           "single Time fact required in the initial configuration (found " +
               std::to_string(n_time) + ")");
    Configuration init(init_);

    std::size_t k = default_k(rules_, init);
    if (k_) {
      if (k_->value < k)
        fail(Diag::param, k_->loc,
             "k = " + std::to_string(k_->value) + " is below the largest fact size " +
                 std::to_string(k));
      k = k_->value;
    }
    std::optional<Timestamp> over;
    if (dmax_) over = dmax_->value;
    System sys(sig_, vars_, std::move(rules_), k, over);
    if (dmax_) {
      Timestamp need = compute_dmax(sys, init, cs_);
      if (dmax_->value < need)
        fail(Diag::param, dmax_->loc,
             "dmax = " + std::to_string(dmax_->value) + " is below the computed bound " +
                 std::to_string(need));
    }
    std::optional<std::uint64_t> ticks;
    if (ticks_) ticks = ticks_->value;
    return Model{f, std::move(sys), std::move(init), std::move(cs_), ticks};
  }
};

}  // namespace

Model load(const SpecFile& f) { return Loader().run(f); }

Model load_text(const std::string& text) { return load(parse_spec(text)); }

Model load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(Diag::io, 0, 0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_text(ss.str());
}

namespace {

// Resolves a ground term without a variable table.
TermCode ground_term(const Signature& sig, const TermAst& t) {
  if (t.name.empty()) return numeral(t.number);
  auto f = sig.find_function(t.name);
  if (!f) throw InputError("unknown symbol '" + t.name + "'");
  if (sig.function(*f).args.size() != t.args.size())
    throw InputError("wrong arity for '" + t.name + "'");
  TermCode out{*f};
  for (const auto& a : t.args) {
    auto c = ground_term(sig, a);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

}  // namespace

Fact parse_ground_fact(const Signature& sig, const std::string& text) {
  FactAst f = detail::parse_fact_text(text);
  auto p = sig.find_predicate(f.pred);
  if (!p) throw InputError("unknown predicate '" + f.pred + "'");
  if (sig.predicate(*p).args.size() != f.args.size())
    throw InputError("wrong arity for '" + f.pred + "'");
  TermCode args;
  for (const auto& a : f.args) {
    auto c = ground_term(sig, a);
    args.insert(args.end(), c.begin(), c.end());
  }
  if (*p == kTimePred) return Fact::time();
  return Fact::make(sig, *p, std::move(args));
}

TermCode parse_ground_term(const Signature& sig, const std::string& text) {
  return ground_term(sig, detail::parse_term_text(text));
}

}  // namespace tmsr

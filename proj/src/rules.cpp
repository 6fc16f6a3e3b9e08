#include "tmsr/rules.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "tmsr/error.hpp"

namespace tmsr {

bool eval_constraint(const TimeConstraint& c, const Substitution& s, const VarTable* vars) {
  auto need = [&](TimeVarId v) -> std::int64_t {
    auto t = s.time(v);
    if (!t) throw SubstitutionError(vars ? vars->time_var(v) : "#" + std::to_string(v));
    return static_cast<std::int64_t>(*t);
  };
  std::int64_t l = need(c.lhs);
  std::int64_t r = need(c.rhs) + c.offset;
  return c.rel == TimeConstraint::Rel::greater ? l > r : l == r;
}

std::size_t Rule::consumed_count() const {
  return static_cast<std::size_t>(
      std::count_if(lhs.begin(), lhs.end(), [](const LhsFact& f) { return !f.preserved; }));
}

std::size_t Rule::created_count() const {
  return static_cast<std::size_t>(
      std::count_if(rhs.begin(), rhs.end(), [](const RhsFact& f) { return f.preserved_of < 0; }));
}

std::size_t CriticalSpec::source_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n = std::max(n, p.decl_index + 1);
  return n;
}

namespace {

// Backtracking matcher over a list of timed patterns. Patterns are taken in
// order; for each, candidate facts are tried in canonical order. A fact that
// equals the previous one in the configuration is skipped while that one is
// still free, so each substitution is produced exactly once.
class Matcher {
 public:
  using Visit = std::function<bool(const Substitution&, const std::vector<std::size_t>&)>;

  Matcher(const Signature& sig, const Configuration& c, Substitution init)
      : sig_(sig), c_(c), s_(std::move(init)), used_(c.size(), 0) {}

  void add(const FactPattern* f, TimeVarId tvar) { pats_.push_back({f, tvar}); }

  // Checked once every variable it mentions is bound.
  void constrain(const TimeConstraint* tc) { cons_.push_back(tc); }
  void constrain_geq(TimeVarId hi, TimeVarId lo) { geqs_.push_back({hi, lo}); }

  void run(const Visit& visit) {
    visit_ = &visit;
    schedule();
    pos_.assign(pats_.size(), 0);
    stop_ = false;
    if (pats_.empty()) {
      if (checks_ok(-1)) visit(s_, pos_);
      return;
    }
    step(0);
  }

 private:
  struct Pat {
    const FactPattern* fact;
    TimeVarId tvar;
  };

  const Signature& sig_;
  const Configuration& c_;
  Substitution s_;
  std::vector<char> used_;
  std::vector<Pat> pats_;
  std::vector<const TimeConstraint*> cons_;
  std::vector<std::pair<TimeVarId, TimeVarId>> geqs_;
  std::vector<int> cons_level_, geq_level_;
  std::vector<std::size_t> pos_;
  const Visit* visit_ = nullptr;
  bool stop_ = false;

  void schedule() {
    std::vector<int> bound_at(s_.time_capacity(), -1);
    std::vector<char> seen(s_.time_capacity(), 0);
    for (std::size_t v = 0; v < s_.time_capacity(); ++v)
      seen[v] = s_.time(static_cast<TimeVarId>(v)).has_value();
    for (std::size_t i = 0; i < pats_.size(); ++i) {
      auto v = pats_[i].tvar;
      if (v >= seen.size()) {
        seen.resize(v + 1, 0);
        bound_at.resize(v + 1, -1);
      }
      if (!seen[v]) {
        seen[v] = 1;
        bound_at[v] = static_cast<int>(i);
      }
    }
    int last = static_cast<int>(pats_.size()) - 1;
    auto level = [&](TimeVarId v) {
      if (v >= seen.size() || !seen[v]) return last;  // unbound: eval reports it
      return bound_at[v];
    };
    cons_level_.clear();
    for (auto* tc : cons_) cons_level_.push_back(std::max(level(tc->lhs), level(tc->rhs)));
    geq_level_.clear();
    for (auto& g : geqs_) geq_level_.push_back(std::max(level(g.first), level(g.second)));
  }

  bool checks_ok(int lvl) {
    for (std::size_t i = 0; i < cons_.size(); ++i)
      if (cons_level_[i] == lvl && !eval_constraint(*cons_[i], s_)) return false;
    for (std::size_t i = 0; i < geqs_.size(); ++i) {
      if (geq_level_[i] != lvl) continue;
      if (*s_.time(geqs_[i].first) < *s_.time(geqs_[i].second)) return false;
    }
    return true;
  }

  bool match_args(std::span<const Word> pat, std::span<const Word> g,
                  std::vector<TermVarId>& bound) {
    std::size_t p = 0, q = 0;
    while (p < pat.size()) {
      Word w = pat[p];
      if (is_var(w)) {
        TermVarId v = var_of(w);
        std::size_t end = subterm_end(sig_, g, q);
        if (const TermCode* b = s_.term(v)) {
          if (b->size() != end - q || !std::equal(b->begin(), b->end(), g.begin() + q))
            return false;
        } else {
          s_.bind_term(v, TermCode(g.begin() + q, g.begin() + end));
          bound.push_back(v);
        }
        q = end;
        ++p;
      } else {
        if (q >= g.size() || g[q] != w) return false;
        ++p;
        ++q;
      }
    }
    return q == g.size();
  }

  void step(std::size_t i) {
    const Pat& pat = pats_[i];
    auto facts = c_.facts();
    for (std::size_t j = 0; j < facts.size() && !stop_; ++j) {
      if (used_[j]) continue;
      const TimedFact& f = facts[j];
      if (f.fact.predicate() != pat.fact->pred) continue;
      if (j > 0 && !used_[j - 1] && facts[j - 1] == f) continue;

      bool time_bound_here = false;
      if (auto t = s_.time(pat.tvar)) {
        if (*t != f.ts) continue;
      } else {
        s_.bind_time(pat.tvar, f.ts);
        time_bound_here = true;
      }
      std::vector<TermVarId> bound;
      if (match_args(pat.fact->args, f.fact.args(), bound) && checks_ok(static_cast<int>(i))) {
        used_[j] = 1;
        pos_[i] = j;
        if (i + 1 == pats_.size()) {
          if ((*visit_)(s_, pos_)) stop_ = true;
        } else {
          step(i + 1);
        }
        used_[j] = 0;
      }
      for (auto v : bound) s_.unbind_term(v);
      if (time_bound_here) s_.unbind_time(pat.tvar);
    }
  }
};

void setup_rule(Matcher& m, const Rule& r) {
  for (const auto& f : r.lhs) m.add(&f.fact, f.tvar);
  for (const auto& g : r.guard) m.constrain(&g);
  if (r.now)
    for (auto v : r.cr) m.constrain_geq(*r.now, v);
}

}  // namespace

System::System(std::shared_ptr<const Signature> sig, std::shared_ptr<const VarTable> vars,
               std::vector<Rule> rules, std::size_t declared_k,
               std::optional<Timestamp> dmax_override)
    : sig_(std::move(sig)),
      vars_(std::move(vars)),
      rules_(std::move(rules)),
      declared_k_(declared_k),
      dmax_override_(dmax_override) {
  // Key each rule on its rarest ground precondition fact.
  std::vector<std::vector<std::string>> keys(rules_.size());
  std::unordered_map<std::string, std::size_t> freq;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    for (const auto& f : rules_[i].lhs) {
      if (f.fact.pred == kTimePred || !is_ground(f.fact.args)) continue;
      keys[i].push_back(render_fact(*sig_, nullptr, f.fact.pred, f.fact.args));
      ++freq[keys[i].back()];
    }
  }
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (keys[i].empty()) {
      unindexed_.push_back(i);
      continue;
    }
    const std::string* best = &keys[i][0];
    for (const auto& k : keys[i])
      if (freq[k] < freq[*best]) best = &k;
    index_[*best].push_back(i);
  }
}

std::vector<std::size_t> System::candidates(const Configuration& c) const {
  std::vector<std::size_t> out = unindexed_;
  const std::string* prev = nullptr;
  for (const auto& f : c.facts()) {
    if (prev && *prev == f.fact.text()) continue;
    prev = &f.fact.text();
    auto it = index_.find(f.fact.text());
    if (it != index_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Match> match_rule(const System& sys, const Rule& r, const Configuration& c) {
  std::vector<Match> out;
  Matcher m(sys.sig(), c, sys.empty_subst());
  setup_rule(m, r);
  m.run([&](const Substitution& s, const std::vector<std::size_t>& pos) {
    out.push_back({s, pos});
    return false;
  });
  return out;
}

namespace {

bool match_ground(const Signature& sig, std::span<const Word> pat, std::span<const Word> g,
                  Substitution& s) {
  std::size_t p = 0, q = 0;
  while (p < pat.size()) {
    Word w = pat[p];
    if (is_var(w)) {
      std::size_t end = subterm_end(sig, g, q);
      TermCode sub(g.begin() + q, g.begin() + end);
      if (const TermCode* b = s.term(var_of(w))) {
        if (*b != sub) return false;
      } else {
        s.bind_term(var_of(w), std::move(sub));
      }
      q = end;
    } else {
      if (q >= g.size() || g[q] != w) return false;
      ++q;
    }
    ++p;
  }
  return q == g.size();
}

}  // namespace

std::optional<Match> match_at(const System& sys, const Rule& r, const Configuration& c,
                              const std::vector<std::size_t>& positions) {
  if (positions.size() != r.lhs.size()) return std::nullopt;
  Match m{sys.empty_subst(), positions};
  std::vector<char> used(c.size(), 0);
  for (std::size_t i = 0; i < r.lhs.size(); ++i) {
    std::size_t j = positions[i];
    if (j >= c.size() || used[j]) return std::nullopt;
    used[j] = 1;
    const TimedFact& f = c.facts()[j];
    const LhsFact& p = r.lhs[i];
    if (f.fact.predicate() != p.fact.pred) return std::nullopt;
    if (auto t = m.sigma.time(p.tvar)) {
      if (*t != f.ts) return std::nullopt;
    } else {
      m.sigma.bind_time(p.tvar, f.ts);
    }
    if (!match_ground(sys.sig(), p.fact.args, f.fact.args(), m.sigma)) return std::nullopt;
  }
  for (const auto& g : r.guard)
    if (!eval_constraint(g, m.sigma, &sys.vars())) return std::nullopt;
  if (r.now)
    for (auto v : r.cr)
      if (*m.sigma.time(*r.now) < *m.sigma.time(v)) return std::nullopt;
  return m;
}

Configuration apply_match(const System& sys, const Rule& r, const Configuration& c,
                          const Match& m) {
  std::vector<char> drop(c.size(), 0);
  for (std::size_t i = 0; i < r.lhs.size(); ++i)
    if (!r.lhs[i].preserved) drop[m.positions.at(i)] = 1;
  std::vector<TimedFact> facts;
  facts.reserve(c.size() + r.rhs.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!drop[j]) facts.push_back(c.facts()[j]);
  for (const auto& q : r.rhs) {
    if (q.preserved_of >= 0) continue;
    Fact f = apply_subst(sys.sig(), sys.vars(), q.fact, m.sigma);
    if (f.size() > sys.declared_k())
      throw KBoundError("rule '" + r.name + "' created " + f.text() + " of size " +
                        std::to_string(f.size()) + ", above k = " +
                        std::to_string(sys.declared_k()));
    auto t = m.sigma.time(q.tvar);
    if (!t) throw SubstitutionError(sys.vars().time_var(q.tvar));
    facts.push_back({std::move(f), *t + q.offset});
  }
  return Configuration(std::move(facts));
}

Configuration apply_rule(const System& sys, const Rule& r, const Configuration& c,
                         const Substitution& s) {
  Match m{s, std::vector<std::size_t>(r.lhs.size())};
  std::vector<char> used(c.size(), 0);
  for (std::size_t i = 0; i < r.lhs.size(); ++i) {
    const auto& p = r.lhs[i];
    Fact f = apply_subst(sys.sig(), sys.vars(), p.fact, s);
    auto t = s.time(p.tvar);
    if (!t) throw SubstitutionError(sys.vars().time_var(p.tvar));
    TimedFact want{f, *t};
    bool found = false;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (!used[j] && c.facts()[j] == want) {
        used[j] = 1;
        m.positions[i] = j;
        found = true;
        break;
      }
    }
    if (!found)
      throw PreconditionError("rule '" + r.name + "': " + render(want) + " not available");
  }
  for (const auto& g : r.guard)
    if (!eval_constraint(g, s, &sys.vars()))
      throw PreconditionError("rule '" + r.name + "': guard violated");
  if (r.now)
    for (auto v : r.cr)
      if (*s.time(*r.now) < *s.time(v))
        throw PreconditionError("rule '" + r.name + "': consumes a future fact");
  return apply_match(sys, r, c, m);
}

Configuration tick(const Configuration& c) { return c.advanced(1); }

std::vector<Enabled> enabled(const System& sys, const Configuration& c) {
  std::vector<Enabled> out;
  for (auto i : sys.candidates(c))
    for (auto& m : match_rule(sys, sys.rules()[i], c)) out.push_back({i, std::move(m)});
  return out;
}

bool any_enabled(const System& sys, const Configuration& c) {
  for (auto i : sys.candidates(c)) {
    bool hit = false;
    Matcher m(sys.sig(), c, sys.empty_subst());
    setup_rule(m, sys.rules()[i]);
    m.run([&](const Substitution&, const std::vector<std::size_t>&) { return hit = true; });
    if (hit) return true;
  }
  return false;
}

std::optional<CriticalHit> is_critical(const System& sys, const CriticalSpec& cs,
                                       const Configuration& c) {
  for (std::size_t i = 0; i < cs.pairs.size(); ++i) {
    const auto& p = cs.pairs[i];
    std::optional<CriticalHit> hit;
    Matcher m(sys.sig(), c, sys.empty_subst());
    for (const auto& f : p.facts) m.add(&f.fact, f.tvar);
    for (const auto& tc : p.constraints) m.constrain(&tc);
    m.run([&](const Substitution& s, const std::vector<std::size_t>&) {
      hit = CriticalHit{i, s};
      return true;
    });
    if (hit) return hit;
  }
  return std::nullopt;
}

ClassReport check_balanced(const System& sys) {
  ClassReport rep;
  for (std::size_t i = 0; i < sys.rules().size(); ++i) {
    const auto& r = sys.rules()[i];
    bool ok = r.lhs.size() == r.rhs.size();
    std::string why = ok ? "" : "consumes " + std::to_string(r.lhs.size()) + " facts, creates " +
                                    std::to_string(r.rhs.size());
    rep.rules.push_back({r.name, i, ok, why});
    rep.ok = rep.ok && ok;
  }
  return rep;
}

ClassReport check_progressive(const System& sys) {
  ClassReport rep;
  for (std::size_t i = 0; i < sys.rules().size(); ++i) {
    const auto& r = sys.rules()[i];
    std::string why;
    if (r.lhs.size() != r.rhs.size()) {
      why = "not balanced";
    } else if (!r.now) {
      why = "no Time fact in precondition";
    } else {
      bool future = std::any_of(r.rhs.begin(), r.rhs.end(), [&](const RhsFact& q) {
        return q.preserved_of < 0 && q.tvar == *r.now && q.offset >= 1;
      });
      if (!future) why = "creates no fact in the future";
      for (const auto& f : r.lhs) {
        if (!why.empty()) break;
        if (f.preserved || f.tvar == *r.now) continue;
        if (std::find(r.cr.begin(), r.cr.end(), f.tvar) == r.cr.end())
          why = "may consume a future fact";
      }
    }
    rep.rules.push_back({r.name, i, why.empty(), why});
    rep.ok = rep.ok && why.empty();
  }
  return rep;
}

Timestamp compute_dmax(const System& sys, const Configuration& init, const CriticalSpec& cs) {
  Timestamp d = 1;
  auto absval = [](std::int64_t x) { return static_cast<Timestamp>(x < 0 ? -x : x); };
  for (const auto& f : init.facts()) d = std::max(d, f.ts);
  for (const auto& r : sys.rules()) {
    for (const auto& q : r.rhs)
      if (q.preserved_of < 0) d = std::max(d, q.offset);
    for (const auto& g : r.guard) d = std::max(d, absval(g.offset));
  }
  for (const auto& p : cs.pairs)
    for (const auto& g : p.constraints) d = std::max(d, absval(g.offset));
  return d;
}

Timestamp effective_dmax(const System& sys, const Configuration& init, const CriticalSpec& cs) {
  Timestamp d = compute_dmax(sys, init, cs);
  if (auto o = sys.dmax_override(); o && *o >= d) return *o;
  return d;
}

std::size_t default_k(const std::vector<Rule>& rules, const Configuration& init) {
  std::size_t k = 1;
  for (const auto& f : init.facts()) k = std::max(k, fact_size(f));
  for (const auto& r : rules) {
    for (const auto& f : r.lhs) k = std::max(k, fact_size(f.fact));
    for (const auto& f : r.rhs) k = std::max(k, fact_size(f.fact));
  }
  return k;
}

std::vector<std::vector<TimeConstraint>> expand_geq(const std::vector<TimeConstraint>& cs,
                                                    const std::vector<bool>& geq) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (i < geq.size() && geq[i]) idx.push_back(i);
  if (idx.size() > 16) throw Error("too many >= constraints in one guard");
  std::vector<std::vector<TimeConstraint>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << idx.size()); ++mask) {
    auto alt = cs;
    for (std::size_t b = 0; b < idx.size(); ++b)
      alt[idx[b]].rel = (mask >> b) & 1 ? TimeConstraint::Rel::equal : TimeConstraint::Rel::greater;
    out.push_back(std::move(alt));
  }
  return out;
}

}  // namespace tmsr

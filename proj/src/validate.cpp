#include "tmsr/error.hpp"
#include "tmsr/verify.hpp"

namespace tmsr {

namespace {

// Brute force over position tuples; deliberately avoids the search matcher.
bool applicable_somewhere(const System& sys, const Rule& r, const Configuration& c,
                          std::vector<std::size_t>& pos, std::vector<char>& used, std::size_t i) {
  if (i == r.lhs.size()) return match_at(sys, r, c, pos).has_value();
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (used[j] || c.facts()[j].fact.predicate() != r.lhs[i].fact.pred) continue;
    used[j] = 1;
    pos[i] = j;
    bool ok = applicable_somewhere(sys, r, c, pos, used, i + 1);
    used[j] = 0;
    if (ok) return true;
  }
  return false;
}

const Rule* first_applicable(const System& sys, const Configuration& c) {
  for (const auto& r : sys.rules()) {
    std::vector<std::size_t> pos(r.lhs.size());
    std::vector<char> used(c.size(), 0);
    if (applicable_somewhere(sys, r, c, pos, used, 0)) return &r;
  }
  return nullptr;
}

Validation failure(std::size_t at, std::string why) {
  return Validation{false, at, std::move(why)};
}

}  // namespace

Validation validate_trace(const System& sys, const CriticalSpec& cs, const Trace& t,
                          std::optional<std::uint64_t> expected_ticks, TraceKind kind) {
  const std::size_t total = t.steps.size();
  const std::size_t m = t.initial.size();
  auto crit_check = [&](const Configuration& c, std::size_t i) -> std::optional<Validation> {
    bool crit = is_critical(sys, cs, c).has_value();
    if (kind == TraceKind::witness && crit)
      return failure(i, "configuration " + std::to_string(i) + " is critical");
    if (kind == TraceKind::counterexample) {
      if (i < total && crit)
        return failure(i, "configuration " + std::to_string(i) + " is critical before the end");
      if (i == total && !crit) return failure(i, "final configuration is not critical");
    }
    return std::nullopt;
  };

  if (auto bad = crit_check(t.initial, 0)) return *bad;
  Configuration cur = t.initial;
  std::uint64_t ticks = 0;
  std::size_t since = 0;
  auto& diag = diagnostics();
  for (std::size_t i = 0; i < total; ++i) {
    const TraceStep& st = t.steps[i];
    Configuration next;
    if (st.label == "tick") {
      if (const Rule* r = first_applicable(sys, cur))
        return failure(i + 1, "tick taken while rule '" + r->name + "' was enabled");
      next = tick(cur);
      ++ticks;
      since = 0;
    } else {
      std::string last_err = "no rule named '" + st.label + "'";
      bool applied = false;
      for (const auto& r : sys.rules()) {
        if (r.name != st.label) continue;
        try {
          next = apply_rule(sys, r, cur, st.sigma);
          applied = true;
          break;
        } catch (const PreconditionError& e) {
          last_err = e.what();
        } catch (const SubstitutionError& e) {
          last_err = e.what();
        }
      }
      if (!applied) return failure(i + 1, last_err);
      ++since;
      ++diag.edges_checked;
      if (since >= m) ++diag.step_bound_violations;
    }
    if (!(next == st.config))
      return failure(i + 1, "step " + std::to_string(i + 1) + " (" + st.label +
                                ") yields " + render(next) + ", trace records " + render(st.config));
    if (auto bad = crit_check(next, i + 1)) return *bad;
    cur = std::move(next);
  }
  if (expected_ticks && ticks != *expected_ticks)
    return failure(total, "expected " + std::to_string(*expected_ticks) + " ticks, found " +
                              std::to_string(ticks));
  return {};
}

Validation validate_lasso(const System& sys, const CriticalSpec& cs, const Lasso& l,
                          Timestamp dmax) {
  if (!(l.cycle.initial == l.stem.last()))
    return failure(l.stem.steps.size(), "cycle does not start where the stem ends");
  if (l.cycle.steps.empty()) return failure(l.stem.steps.size(), "empty cycle");
  if (l.cycle.ticks() == 0) return failure(l.stem.steps.size(), "cycle contains no tick");
  Trace all{l.stem.initial, l.stem.steps};
  all.steps.insert(all.steps.end(), l.cycle.steps.begin(), l.cycle.steps.end());
  if (auto v = validate_trace(sys, cs, all); !v.ok) return v;
  if (!(abstract(l.cycle.last(), dmax) == abstract(l.cycle.initial, dmax)))
    return failure(all.steps.size(), "cycle does not return to its starting delta-configuration");
  return {};
}

}  // namespace tmsr

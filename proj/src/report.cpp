#include "tmsr/report.hpp"

#include <cstdio>
#include <json.hpp>

#include "tmsr/error.hpp"
#include "tmsr/spec.hpp"

namespace tmsr {

using Json = nlohmann::ordered_json;

std::string input_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json config_json(const Configuration& c) {
  Json a = Json::array();
  for (const auto& f : c.facts()) a.push_back(Json{{"fact", f.fact.text()}, {"ts", f.ts}});
  return a;
}

Json subst_json(const System& sys, const Substitution& s) {
  Json o = Json::object();
  const auto& vars = sys.vars();
  for (TermVarId v = 0; v < s.term_capacity(); ++v)
    if (const TermCode* t = s.term(v)) o[vars.term_var(v).name] = render_term(sys.sig(), nullptr, *t);
  for (TimeVarId v = 0; v < s.time_capacity(); ++v)
    if (auto t = s.time(v)) o[vars.time_var(v)] = *t;
  return o;
}

Json steps_json(const System& sys, const std::vector<TraceStep>& steps) {
  Json a = Json::array();
  for (const auto& st : steps)
    a.push_back(Json{{"label", st.label}, {"subst", subst_json(sys, st.sigma)},
                     {"config", config_json(st.config)}});
  return a;
}

Configuration config_of(const System& sys, const Json& j) {
  if (!j.is_array()) throw InputError("report: configuration must be an array");
  std::vector<TimedFact> facts;
  for (const auto& e : j) {
    Fact f = parse_ground_fact(sys.sig(), e.at("fact").get<std::string>());
    facts.push_back(TimedFact{f, e.at("ts").get<Timestamp>()});
  }
  return Configuration(std::move(facts));
}

Substitution subst_of(const System& sys, const Json& j) {
  Substitution s = sys.empty_subst();
  for (const auto& [name, val] : j.items()) {
    if (auto tv = sys.vars().find_time_var(name); tv && val.is_number_unsigned()) {
      s.bind_time(*tv, val.get<Timestamp>());
    } else if (auto v = sys.vars().find_term_var(name); v && val.is_string()) {
      s.bind_term(*v, parse_ground_term(sys.sig(), val.get<std::string>()));
    } else {
      throw InputError("report: unknown variable '" + name + "'");
    }
  }
  return s;
}

std::vector<TraceStep> steps_of(const System& sys, const Json& j) {
  if (!j.is_array()) throw InputError("report: trace must be an array");
  std::vector<TraceStep> out;
  for (const auto& e : j) {
    TraceStep st;
    st.label = e.at("label").get<std::string>();
    st.sigma = subst_of(sys, e.at("subst"));
    st.config = config_of(sys, e.at("config"));
    if (st.label != "tick")
      for (std::size_t i = 0; i < sys.rules().size(); ++i)
        if (sys.rules()[i].name == st.label) {
          st.rule = i;
          break;
        }
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace

std::string emit_report(const System& sys, const CriticalSpec& cs, const Verdict& v,
                        const ReportMeta& meta) {
  Json j;
  j["mode"] = meta.mode;
  j["outcome"] = outcome_name(v.outcome);
  if (meta.ticks) j["ticks"] = *meta.ticks;
  j["statistics"] = Json{{"states", v.stats.states},
                         {"peak_frontier", v.stats.peak_frontier},
                         {"elapsed_ms", meta.timing ? v.stats.elapsed_ms : 0.0},
                         {"l_sigma_decimal", v.stats.l_sigma_decimal},
                         {"dmax", v.stats.dmax},
                         {"m", v.stats.m},
                         {"k", v.stats.k}};
  const Trace* t = v.witness ? &*v.witness : v.counterexample ? &*v.counterexample : nullptr;
  if (v.lasso) {
    j["initial"] = config_json(v.lasso->stem.initial);
    std::vector<TraceStep> all = v.lasso->stem.steps;
    all.insert(all.end(), v.lasso->cycle.steps.begin(), v.lasso->cycle.steps.end());
    j["trace"] = steps_json(sys, all);
    j["lasso"] = Json{{"stem", steps_json(sys, v.lasso->stem.steps)},
                      {"cycle", steps_json(sys, v.lasso->cycle.steps)}};
  } else if (t) {
    j["initial"] = config_json(t->initial);
    j["trace"] = steps_json(sys, t->steps);
  }
  if (v.counterexample) j["trace_kind"] = "counterexample";
  else if (v.witness || v.lasso) j["trace_kind"] = "witness";
  if (v.critical_pair && *v.critical_pair < cs.pairs.size()) {
    const auto& p = cs.pairs[*v.critical_pair];
    j["critical_pair"] = Json{{"index", p.decl_index}, {"name", p.name}};
  }
  if (!v.note.empty()) j["note"] = v.note;
  j["tool_version"] = kToolVersion;
  j["input_digest"] = meta.digest;
  return j.dump(2) + "\n";
}

ParsedReport parse_report(const System& sys, const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  ParsedReport r;
  try {
    r.mode = j.at("mode").get<std::string>();
    std::string o = j.at("outcome").get<std::string>();
    if (o == "holds") r.outcome = Outcome::holds;
    else if (o == "fails") r.outcome = Outcome::fails;
    else if (o == "unknown") r.outcome = Outcome::unknown;
    else throw InputError("report: unknown outcome '" + o + "'");
    if (j.contains("ticks")) r.ticks = j["ticks"].get<std::uint64_t>();
    if (j.contains("critical_pair")) r.critical_pair = j["critical_pair"].at("index").get<std::size_t>();
    r.digest = j.value("input_digest", "");
    if (j.contains("lasso")) {
      Lasso l;
      l.stem = Trace{config_of(sys, j.at("initial")), steps_of(sys, j["lasso"].at("stem"))};
      l.cycle = Trace{l.stem.last(), steps_of(sys, j["lasso"].at("cycle"))};
      r.lasso = std::move(l);
    } else if (j.contains("trace")) {
      r.trace = Trace{config_of(sys, j.at("initial")), steps_of(sys, j["trace"])};
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  } catch (const SpecError& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return r;
}

Validation replay(const System& sys, const CriticalSpec& cs, const ParsedReport& r,
                  Timestamp dmax) {
  if (r.lasso) return validate_lasso(sys, cs, *r.lasso, dmax);
  if (!r.trace) return {};
  if (r.outcome == Outcome::fails)
    return validate_trace(sys, cs, *r.trace, std::nullopt, TraceKind::counterexample);
  return validate_trace(sys, cs, *r.trace, r.ticks, TraceKind::witness);
}

}  // namespace tmsr

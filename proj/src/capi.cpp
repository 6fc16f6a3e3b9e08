#include "tmsr/tmsr.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "tmsr/encoders.hpp"
#include "tmsr/error.hpp"
#include "tmsr/report.hpp"
#include "tmsr/spec.hpp"

struct tmsr_model {
  tmsr::Model model;
  std::string source;
};

struct tmsr_report {
  tmsr::Verdict verdict;
  std::string json;
};

namespace {

thread_local std::string g_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

tmsr_status fail(tmsr_status st, const std::string& msg) {
  g_error = msg;
  return st;
}

// Maps exceptions to status codes.
template <class F>
tmsr_status guarded(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const tmsr::SpecError& e) {
    return fail(TMSR_E_SPEC, e.what());
  } catch (const tmsr::LimitError& e) {
    return fail(TMSR_E_LIMIT, e.what());
  } catch (const tmsr::InputError& e) {
    return fail(TMSR_E_INPUT, e.what());
  } catch (const tmsr::KBoundError& e) {
    return fail(TMSR_E_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TMSR_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TMSR_E_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* tmsr_version(void) { return tmsr::kToolVersion; }
const char* tmsr_last_error(void) { return g_error.c_str(); }
void tmsr_string_free(char* s) { std::free(s); }

tmsr_status tmsr_model_load_text(const char* text, tmsr_model** out) {
  if (!text || !out) return fail(TMSR_E_ARG, "null argument");
  return guarded([&] {
    *out = new tmsr_model{tmsr::load_text(text), text};
    return TMSR_OK;
  });
}

tmsr_status tmsr_model_load_file(const char* path, tmsr_model** out) {
  if (!path || !out) return fail(TMSR_E_ARG, "null argument");
  return guarded([&] {
    std::string text;
    {
      std::FILE* f = std::fopen(path, "rb");
      if (!f) return fail(TMSR_E_IO, std::string("cannot open ") + path);
      char buf[65536];
      std::size_t n;
      while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
      std::fclose(f);
    }
    *out = new tmsr_model{tmsr::load_text(text), text};
    return TMSR_OK;
  });
}

void tmsr_model_free(tmsr_model* m) { delete m; }

tmsr_status tmsr_model_check(const tmsr_model* m, int* balanced, int* progressive,
                             char** summary) {
  if (!m) return fail(TMSR_E_ARG, "null model");
  return guarded([&] {
    const auto& sys = m->model.sys;
    auto bal = tmsr::check_balanced(sys);
    auto pro = tmsr::check_progressive(sys);
    if (balanced) *balanced = bal.ok;
    if (progressive) *progressive = pro.ok;
    if (summary) {
      std::ostringstream o;
      o << "rules: " << sys.rules().size() << "\n";
      o << "balanced: " << (bal.ok ? "yes" : "no") << "\n";
      o << "progressive: " << (pro.ok ? "yes" : "no") << "\n";
      for (const auto& r : pro.rules)
        if (!r.ok) o << "  rule '" << r.name << "': " << r.reason << "\n";
      auto dmax = tmsr::effective_dmax(sys, m->model.init, m->model.cs);
      o << "dmax: " << dmax;
      auto computed = tmsr::compute_dmax(sys, m->model.init, m->model.cs);
      if (computed != dmax) o << " (computed " << computed << ")";
      o << "\n";
      o << "k: " << sys.declared_k() << "\n";
      o << "m: " << m->model.init.size() << "\n";
      o << "critical pairs: " << m->model.cs.pairs.size() << "\n";
      if (m->model.ticks) o << "ticks: " << *m->model.ticks << "\n";
      o << "state bound: "
        << tmsr::count_bound(m->model.init.size(), sys.declared_k(), dmax,
                             sys.sig().predicate_symbols(), sys.sig().term_symbols())
               .str()
        << "\n";
      *summary = dup(o.str());
    }
    return TMSR_OK;
  });
}

size_t tmsr_model_rule_count(const tmsr_model* m) { return m ? m->model.sys.rules().size() : 0; }

int tmsr_model_default_ticks(const tmsr_model* m, uint64_t* ticks) {
  if (!m || !m->model.ticks) return 0;
  if (ticks) *ticks = *m->model.ticks;
  return 1;
}

tmsr_status tmsr_model_print(const tmsr_model* m, char** text) {
  if (!m || !text) return fail(TMSR_E_ARG, "null argument");
  return guarded([&] {
    *text = dup(tmsr::print_spec(m->model.ast));
    return TMSR_OK;
  });
}

void tmsr_verify_options_init(tmsr_verify_options* o) {
  if (!o) return;
  *o = tmsr_verify_options{};
  o->mode = TMSR_REALIZABILITY;
  o->max_states = tmsr::SearchBudget{}.max_states;
  o->workers = 1;
  o->timing = 1;
}

tmsr_status tmsr_verify(const tmsr_model* m, const tmsr_verify_options* o, tmsr_report** out) {
  if (!m || !o || !out) return fail(TMSR_E_ARG, "null argument");
  if (o->mode != TMSR_REALIZABILITY && o->mode != TMSR_SURVIVABILITY)
    return fail(TMSR_E_ARG, "unknown mode");
  if (o->bounded && o->ticks == 0) return fail(TMSR_E_ARG, "bounded verification needs ticks >= 1");
  return guarded([&] {
    const auto& md = m->model;
    tmsr::SearchBudget b;
    b.max_states = o->max_states;
    b.timeout_seconds = o->timeout_seconds;
    b.workers = o->workers ? o->workers : 1;
    tmsr::Verdict v;
    bool surv = o->mode == TMSR_SURVIVABILITY;
    if (o->bounded)
      v = surv ? tmsr::bounded_survivability(md.sys, md.init, md.cs, o->ticks, b)
               : tmsr::bounded_realizability(md.sys, md.init, md.cs, o->ticks, b);
    else
      v = surv ? tmsr::survivability(md.sys, md.init, md.cs, b)
               : tmsr::realizability(md.sys, md.init, md.cs, b);
    tmsr::ReportMeta meta;
    meta.mode = surv ? "survivability" : "realizability";
    if (o->bounded) meta.ticks = o->ticks;
    meta.digest = o->input_digest ? o->input_digest : tmsr::input_digest(m->source);
    meta.timing = o->timing != 0;
    auto* r = new tmsr_report{std::move(v), {}};
    r->json = tmsr::emit_report(md.sys, md.cs, r->verdict, meta);
    *out = r;
    return TMSR_OK;
  });
}

tmsr_outcome tmsr_report_outcome(const tmsr_report* r) {
  if (!r) return TMSR_UNKNOWN;
  switch (r->verdict.outcome) {
    case tmsr::Outcome::holds: return TMSR_HOLDS;
    case tmsr::Outcome::fails: return TMSR_FAILS;
    case tmsr::Outcome::unknown: return TMSR_UNKNOWN;
  }
  return TMSR_UNKNOWN;
}

const char* tmsr_report_json(const tmsr_report* r) { return r ? r->json.c_str() : ""; }
const char* tmsr_report_note(const tmsr_report* r) { return r ? r->verdict.note.c_str() : ""; }
void tmsr_report_free(tmsr_report* r) { delete r; }

tmsr_status tmsr_replay(const tmsr_model* m, const char* report_json, int* valid,
                        char** diagnostic) {
  if (!m || !report_json || !valid) return fail(TMSR_E_ARG, "null argument");
  return guarded([&] {
    const auto& md = m->model;
    auto parsed = tmsr::parse_report(md.sys, report_json);
    auto res = tmsr::replay(md.sys, md.cs, parsed, tmsr::effective_dmax(md.sys, md.init, md.cs));
    if (res.ok && !(parsed.trace ? parsed.trace->initial == md.init
                                 : !parsed.lasso || parsed.lasso->stem.initial == md.init)) {
      res.ok = false;
      res.failing_step = 0;
      res.diagnostic = "trace does not start at the initial configuration of the spec";
    }
    *valid = res.ok;
    if (diagnostic) *diagnostic = dup(res.diagnostic);
    return TMSR_OK;
  });
}

tmsr_status tmsr_digest(const char* text, char** out) {
  if (!text || !out) return fail(TMSR_E_ARG, "null argument");
  *out = dup(tmsr::input_digest(text));
  return TMSR_OK;
}

void tmsr_drone_params_init(tmsr_drone_params* p) {
  if (!p) return;
  tmsr::DroneParams d;
  *p = tmsr_drone_params{};
  p->drones = d.drones;
  p->x_max = d.x_max;
  p->y_max = d.y_max;
  p->M = d.M;
  p->e_max = d.e_max;
  p->base_x = d.base_x;
  p->base_y = d.base_y;
  p->station_limit = d.station_limit;
  p->rule_ceiling = d.rule_ceiling;
}

tmsr_status tmsr_gen_drone(const tmsr_drone_params* p, char** spec) {
  if (!p || !spec) return fail(TMSR_E_ARG, "null argument");
  if (p->point_count && !p->point_xy) return fail(TMSR_E_ARG, "null point array");
  if (p->wind_count && !p->winds) return fail(TMSR_E_ARG, "null wind array");
  return guarded([&] {
    tmsr::DroneParams d;
    d.drones = p->drones;
    for (size_t i = 0; i < p->point_count; ++i)
      d.points.emplace_back(p->point_xy[2 * i], p->point_xy[2 * i + 1]);
    d.x_max = p->x_max;
    d.y_max = p->y_max;
    d.M = p->M;
    d.e_max = p->e_max;
    d.base_x = p->base_x;
    d.base_y = p->base_y;
    for (size_t i = 0; i < p->wind_count; ++i)
      d.winds.push_back({p->winds[i].x, p->winds[i].y, p->winds[i].dir});
    d.station = p->station != 0;
    d.station_limit = p->station_limit;
    d.rule_ceiling = p->rule_ceiling;
    if (p->ticks) d.ticks = static_cast<unsigned>(p->ticks);
    *spec = dup(tmsr::gen_drone(d));
    return TMSR_OK;
  });
}

tmsr_status tmsr_gen_3sat(unsigned vars, const int* clauses, size_t clause_count, char** spec) {
  if (!spec || (clause_count && !clauses)) return fail(TMSR_E_ARG, "null argument");
  return guarded([&] {
    tmsr::Cnf3 f;
    f.vars = vars;
    for (size_t j = 0; j < clause_count; ++j) {
      std::array<tmsr::Literal, 3> c;
      for (int q = 0; q < 3; ++q) {
        int l = clauses[3 * j + q];
        if (l == 0) return fail(TMSR_E_INPUT, "literal 0 is not allowed");
        c[q] = {static_cast<unsigned>(l < 0 ? -l : l), l > 0};
      }
      f.clauses.push_back(c);
    }
    *spec = dup(tmsr::gen_3sat(f));
    return TMSR_OK;
  });
}

tmsr_status tmsr_gen_tm(const tmsr_tm_params* p, char** spec) {
  if (!p || !spec || !p->blank || !p->initial) return fail(TMSR_E_ARG, "null argument");
  return guarded([&] {
    auto strs = [](const char* const* v, size_t n) {
      std::vector<std::string> out;
      for (size_t i = 0; i < n; ++i) {
        if (!v || !v[i]) throw tmsr::InputError("null string in machine description");
        out.emplace_back(v[i]);
      }
      return out;
    };
    tmsr::TmSpec t;
    t.states = strs(p->states, p->state_count);
    t.symbols = strs(p->symbols, p->symbol_count);
    t.blank = p->blank;
    t.initial = p->initial;
    t.final_states = strs(p->final_states, p->final_count);
    for (size_t i = 0; i < p->instruction_count; ++i) {
      const auto& in = p->instructions[i];
      if (!in.state || !in.read || !in.next || !in.write)
        throw tmsr::InputError("null string in machine description");
      t.instructions.push_back({in.state, in.read, in.next, in.write, in.move});
    }
    t.space = p->space;
    t.input = strs(p->input, p->input_length);
    *spec = dup(tmsr::gen_tm(t));
    return TMSR_OK;
  });
}

}  // extern "C"

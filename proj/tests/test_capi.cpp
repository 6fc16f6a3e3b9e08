// Exercises the shared library through its C header only.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "tmsr/tmsr.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::printf("%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static const char* kDrain = R"(timed-msr 1
sort Drone
const d1 : Drone
var Id : Drone
var X Y E : Nat
pred Dr : Drone Nat Nat Nat
param ticks = 2
rule "stay": Time@T, Dr(Id,X,Y,E)@T1 -> Time@T, Dr(Id,X,Y,E)@(T+1)
rule "burn": Time@T, Dr(Id,X,Y,s(E))@T1 -> Time@T, Dr(Id,X,Y,E)@(T+1)
init: Time@0, Dr(d1,0,0,2)@0
critical "empty": { Dr(Id,X,Y,0)@T }
)";

static void errors() {
  tmsr_model* m = nullptr;
  EXPECT(tmsr_model_load_text("timed-msr 1\ninit: Q@0\n", &m) == TMSR_E_SPEC);
  EXPECT(m == nullptr);
  EXPECT(std::strstr(tmsr_last_error(), "E_UNDECLARED") != nullptr);
  EXPECT(tmsr_model_load_file("/nonexistent.tmsr", &m) == TMSR_E_IO);
  EXPECT(tmsr_model_load_text(nullptr, &m) == TMSR_E_ARG);
  EXPECT(tmsr_model_load_text("timed-msr 1\ninit: Time@0\n", nullptr) == TMSR_E_ARG);

  const char* np = "timed-msr 1\npred P\nrule \"r\": Time@T, P@T1 -> Time@T, P@T\ninit: Time@0, P@0\n";
  EXPECT(tmsr_model_load_text(np, &m) == TMSR_OK);
  tmsr_verify_options o;
  tmsr_verify_options_init(&o);
  tmsr_report* r = nullptr;
  EXPECT(tmsr_verify(m, &o, &r) == TMSR_E_INPUT);
  EXPECT(r == nullptr);
  int bal = -1, prog = -1;
  char* summary = nullptr;
  EXPECT(tmsr_model_check(m, &bal, &prog, &summary) == TMSR_OK);
  EXPECT(bal == 1 && prog == 0);
  EXPECT(summary && std::strstr(summary, "progressive") != nullptr);
  tmsr_string_free(summary);
  tmsr_model_free(m);
  tmsr_model_free(nullptr);
}

static void verify_and_replay() {
  tmsr_model* m = nullptr;
  EXPECT(tmsr_model_load_text(kDrain, &m) == TMSR_OK);
  EXPECT(tmsr_model_rule_count(m) == 2);
  uint64_t n = 0;
  EXPECT(tmsr_model_default_ticks(m, &n) == 1 && n == 2);

  char* digest = nullptr;
  EXPECT(tmsr_digest(kDrain, &digest) == TMSR_OK);
  EXPECT(digest && std::strlen(digest) == 16);

  tmsr_verify_options o;
  tmsr_verify_options_init(&o);
  o.mode = TMSR_SURVIVABILITY;
  o.bounded = 1;
  o.ticks = 2;
  o.timing = 0;
  o.input_digest = digest;
  tmsr_report* r = nullptr;
  EXPECT(tmsr_verify(m, &o, &r) == TMSR_OK);
  EXPECT(tmsr_report_outcome(r) == TMSR_FAILS);
  std::string json = tmsr_report_json(r);
  EXPECT(json.find(digest) != std::string::npos);
  EXPECT(json.find("\"burn\"") != std::string::npos);

  int valid = 0;
  char* diag = nullptr;
  EXPECT(tmsr_replay(m, json.c_str(), &valid, &diag) == TMSR_OK);
  EXPECT(valid == 1);
  tmsr_string_free(diag);

  // Same trace against a model that starts elsewhere.
  std::string other = kDrain;
  other.replace(other.find("Dr(d1,0,0,2)@0"), 14, "Dr(d1,0,0,3)@0");
  tmsr_model* m2 = nullptr;
  EXPECT(tmsr_model_load_text(other.c_str(), &m2) == TMSR_OK);
  valid = 1;
  diag = nullptr;
  EXPECT(tmsr_replay(m2, json.c_str(), &valid, &diag) == TMSR_OK);
  EXPECT(valid == 0);
  EXPECT(diag && std::strlen(diag) > 0);
  tmsr_string_free(diag);
  EXPECT(tmsr_replay(m, "{", &valid, &diag) == TMSR_E_INPUT);

  o.mode = TMSR_REALIZABILITY;
  o.bounded = 0;
  tmsr_report* r2 = nullptr;
  EXPECT(tmsr_verify(m, &o, &r2) == TMSR_OK);
  EXPECT(tmsr_report_outcome(r2) == TMSR_HOLDS);
  EXPECT(std::strstr(tmsr_report_json(r2), "\"lasso\"") != nullptr);

  o.mode = TMSR_SURVIVABILITY;
  o.max_states = 1;
  tmsr_report* r3 = nullptr;
  EXPECT(tmsr_verify(m, &o, &r3) == TMSR_OK);
  EXPECT(tmsr_report_outcome(r3) == TMSR_UNKNOWN);
  EXPECT(std::strlen(tmsr_report_note(r3)) > 0);

  char* printed = nullptr;
  EXPECT(tmsr_model_print(m, &printed) == TMSR_OK);
  tmsr_model* m3 = nullptr;
  EXPECT(tmsr_model_load_text(printed, &m3) == TMSR_OK);
  EXPECT(tmsr_model_rule_count(m3) == 2);

  tmsr_string_free(printed);
  tmsr_string_free(digest);
  tmsr_report_free(r);
  tmsr_report_free(r2);
  tmsr_report_free(r3);
  tmsr_model_free(m);
  tmsr_model_free(m2);
  tmsr_model_free(m3);
}

static void generators() {
  tmsr_drone_params p;
  tmsr_drone_params_init(&p);
  unsigned pts[] = {0, 0};
  p.point_xy = pts;
  p.point_count = 1;
  p.M = 2;
  char* spec = nullptr;
  EXPECT(tmsr_gen_drone(&p, &spec) == TMSR_OK);
  tmsr_model* m = nullptr;
  EXPECT(tmsr_model_load_text(spec, &m) == TMSR_OK);
  uint64_t n = 0;
  EXPECT(tmsr_model_default_ticks(m, &n) == 1 && n == 8);
  int bal = 0, prog = 0;
  char* summary = nullptr;
  EXPECT(tmsr_model_check(m, &bal, &prog, &summary) == TMSR_OK && bal && prog);
  tmsr_string_free(summary);
  tmsr_model_free(m);
  tmsr_string_free(spec);

  p.rule_ceiling = 5;
  spec = nullptr;
  EXPECT(tmsr_gen_drone(&p, &spec) == TMSR_E_LIMIT);
  EXPECT(spec == nullptr);

  int clauses[] = {1, 1, 1, -1, -1, -1};
  EXPECT(tmsr_gen_3sat(1, clauses, 2, &spec) == TMSR_OK);
  EXPECT(tmsr_model_load_text(spec, &m) == TMSR_OK);
  EXPECT(tmsr_model_rule_count(m) == 2 * 1 + 6 * 2);
  tmsr_verify_options o;
  tmsr_verify_options_init(&o);
  o.bounded = 1;
  o.ticks = 2;
  tmsr_report* r = nullptr;
  EXPECT(tmsr_verify(m, &o, &r) == TMSR_OK);
  EXPECT(tmsr_report_outcome(r) == TMSR_FAILS);
  tmsr_report_free(r);
  tmsr_model_free(m);
  tmsr_string_free(spec);
  int bad[] = {2, 1, 1};
  EXPECT(tmsr_gen_3sat(1, bad, 1, &spec) == TMSR_E_INPUT);

  const char* states[] = {"q0", "h"};
  const char* syms[] = {"b"};
  const char* finals[] = {"h"};
  tmsr_tm_instruction ins[] = {{"q0", "b", "q0", "b", 'S'}};
  tmsr_tm_params t{states, 2, syms, 1, "b", "q0", finals, 1, ins, 1, 2, nullptr, 0};
  EXPECT(tmsr_gen_tm(&t, &spec) == TMSR_OK);
  EXPECT(tmsr_model_load_text(spec, &m) == TMSR_OK);
  EXPECT(tmsr_model_rule_count(m) == 5 * 4);
  tmsr_verify_options_init(&o);
  EXPECT(tmsr_verify(m, &o, &r) == TMSR_OK);
  EXPECT(tmsr_report_outcome(r) == TMSR_HOLDS);
  tmsr_report_free(r);
  tmsr_model_free(m);
  tmsr_string_free(spec);
}

int main() {
  EXPECT(std::strlen(tmsr_version()) > 0);
  errors();
  verify_and_replay();
  generators();
  std::printf("%s (%d failures)\n", failures ? "FAIL" : "ok", failures);
  return failures ? 1 : 0;
}

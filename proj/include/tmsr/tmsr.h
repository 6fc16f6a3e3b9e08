#ifndef TMSR_H
#define TMSR_H

/* C interface to the timed MSR toolkit. Strings returned through char**
   belong to the caller and are released with tmsr_string_free. The message
   from the last failing call on the current thread is in tmsr_last_error. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TMSR_API __declspec(dllexport)
#elif defined(__GNUC__)
#define TMSR_API __attribute__((visibility("default")))
#else
#define TMSR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tmsr_status {
  TMSR_OK = 0,
  TMSR_E_SPEC = 1,     /* spec file rejected (syntax, sorts, arity, Time) */
  TMSR_E_INPUT = 2,    /* not a progressive system, bad report, bad parameters */
  TMSR_E_LIMIT = 3,    /* generator rule ceiling */
  TMSR_E_IO = 4,
  TMSR_E_ARG = 5,      /* null pointer or out-of-range argument */
  TMSR_E_INTERNAL = 6
} tmsr_status;

/* Values match the CLI exit codes. */
typedef enum tmsr_outcome { TMSR_HOLDS = 0, TMSR_FAILS = 1, TMSR_UNKNOWN = 2 } tmsr_outcome;

typedef enum tmsr_mode { TMSR_REALIZABILITY = 0, TMSR_SURVIVABILITY = 1 } tmsr_mode;

typedef struct tmsr_model tmsr_model;
typedef struct tmsr_report tmsr_report;

TMSR_API const char* tmsr_version(void);
TMSR_API const char* tmsr_last_error(void);
TMSR_API void tmsr_string_free(char* s);

TMSR_API tmsr_status tmsr_model_load_text(const char* text, tmsr_model** out);
TMSR_API tmsr_status tmsr_model_load_file(const char* path, tmsr_model** out);
TMSR_API void tmsr_model_free(tmsr_model* m);

/* Human-readable classification: per-rule balanced/progressive verdicts,
   Dmax, k, m and the state-count bound. *progressive is 1 for a progressive
   timed system. */
TMSR_API tmsr_status tmsr_model_check(const tmsr_model* m, int* balanced, int* progressive,
                                      char** summary);
TMSR_API size_t tmsr_model_rule_count(const tmsr_model* m);
/* Returns 1 and sets *ticks when the spec declares `param ticks`. */
TMSR_API int tmsr_model_default_ticks(const tmsr_model* m, uint64_t* ticks);
/* Parse, print: the canonical text of the spec. */
TMSR_API tmsr_status tmsr_model_print(const tmsr_model* m, char** text);

typedef struct tmsr_verify_options {
  tmsr_mode mode;
  int bounded;              /* 1: n-tick bounded form */
  uint64_t ticks;           /* n, used when bounded */
  uint64_t max_states;      /* 0: unlimited */
  double timeout_seconds;   /* 0: none */
  unsigned workers;
  int timing;               /* 0 writes elapsed_ms as 0 */
  const char* input_digest; /* copied into the report; may be null */
} tmsr_verify_options;

TMSR_API void tmsr_verify_options_init(tmsr_verify_options* o);
TMSR_API tmsr_status tmsr_verify(const tmsr_model* m, const tmsr_verify_options* o,
                                 tmsr_report** out);
TMSR_API tmsr_outcome tmsr_report_outcome(const tmsr_report* r);
/* Valid until tmsr_report_free. */
TMSR_API const char* tmsr_report_json(const tmsr_report* r);
TMSR_API const char* tmsr_report_note(const tmsr_report* r);
TMSR_API void tmsr_report_free(tmsr_report* r);

/* Replays the trace in a JSON report against the model. *valid is 1 when it
   checks out; otherwise *diagnostic explains the first bad step. */
TMSR_API tmsr_status tmsr_replay(const tmsr_model* m, const char* report_json, int* valid,
                                 char** diagnostic);

/* FNV-1a 64 of text as 16 hex digits. */
TMSR_API tmsr_status tmsr_digest(const char* text, char** out);

typedef struct tmsr_wind {
  unsigned x, y;
  char dir; /* 'N', 'S', 'E' or 'W' */
} tmsr_wind;

typedef struct tmsr_drone_params {
  unsigned drones;
  const unsigned* point_xy; /* 2 * point_count coordinates */
  size_t point_count;
  unsigned x_max, y_max;
  unsigned M;
  unsigned e_max;
  unsigned base_x, base_y;
  const tmsr_wind* winds;
  size_t wind_count;
  int station;
  unsigned station_limit;
  size_t rule_ceiling;
  uint64_t ticks; /* 0: 4M */
} tmsr_drone_params;

TMSR_API void tmsr_drone_params_init(tmsr_drone_params* p);
TMSR_API tmsr_status tmsr_gen_drone(const tmsr_drone_params* p, char** spec);

/* clauses holds 3 * clause_count signed literals: k for x_k, -k for its negation. */
TMSR_API tmsr_status tmsr_gen_3sat(unsigned vars, const int* clauses, size_t clause_count,
                                   char** spec);

typedef struct tmsr_tm_instruction {
  const char* state;
  const char* read;
  const char* next;
  const char* write;
  char move; /* 'L', 'R' or 'S' */
} tmsr_tm_instruction;

typedef struct tmsr_tm_params {
  const char* const* states;
  size_t state_count;
  const char* const* symbols;
  size_t symbol_count;
  const char* blank;
  const char* initial;
  const char* const* final_states;
  size_t final_count;
  const tmsr_tm_instruction* instructions;
  size_t instruction_count;
  unsigned space;
  const char* const* input;
  size_t input_length;
} tmsr_tm_params;

TMSR_API tmsr_status tmsr_gen_tm(const tmsr_tm_params* p, char** spec);

#ifdef __cplusplus
}
#endif

#endif

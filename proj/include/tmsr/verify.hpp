#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmsr/delta.hpp"

namespace tmsr {

struct TraceStep {
  std::string label;  // rule name or "tick"
  std::size_t rule = kTickRule;
  Substitution sigma;
  Configuration config;  // configuration after the step
};

struct Trace {
  Configuration initial;
  std::vector<TraceStep> steps;

  std::size_t ticks() const;
  const Configuration& last() const { return steps.empty() ? initial : steps.back().config; }
};

// Finite witness of an infinite trace: cycle.initial is stem.last() and the
// cycle ends in a configuration with the same delta-abstraction.
struct Lasso {
  Trace stem;
  Trace cycle;
};

enum class Outcome { holds, fails, unknown };
const char* outcome_name(Outcome o);

struct Statistics {
  std::uint64_t states = 0;
  std::uint64_t peak_frontier = 0;
  double elapsed_ms = 0;
  std::string l_sigma_decimal;
  Timestamp dmax = 0;
  std::size_t m = 0;
  std::size_t k = 0;
};

struct Verdict {
  Outcome outcome = Outcome::unknown;
  std::optional<Trace> witness;
  std::optional<Lasso> lasso;
  std::optional<Trace> counterexample;
  std::optional<std::size_t> critical_pair;  // pair hit by the counterexample's last config
  Statistics stats;
  std::string note;
};

struct SearchBudget {
  std::uint64_t max_states = 2'000'000;
  double timeout_seconds = 0;  // 0: none
  unsigned workers = 1;
};

// Throws InputError unless sys is a progressive timed system and, for the
// bounded forms, n >= 1.
Verdict bounded_realizability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                              std::uint64_t n, const SearchBudget& budget = {});
Verdict bounded_survivability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                              std::uint64_t n, const SearchBudget& budget = {});
Verdict realizability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                      const SearchBudget& budget = {});
Verdict survivability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                      const SearchBudget& budget = {});

// A recorded edge: a rule applied at given configuration positions, or a tick.
struct Edge {
  std::size_t rule = kTickRule;
  std::vector<std::size_t> positions;
};

// Replays edges from init, producing full substitutions and configurations.
Trace concretize(const System& sys, const Configuration& init, const std::vector<Edge>& edges);

enum class TraceKind { witness, counterexample };

struct Validation {
  bool ok = true;
  std::optional<std::size_t> failing_step;  // 0 is the initial configuration, i the i-th step
  std::string diagnostic;
};

// Independent replay. Witness: no configuration is critical. Counterexample:
// only the last configuration is critical. Ticks must be forced (no rule
// enabled); the tick count must equal expected_ticks when given.
Validation validate_trace(const System& sys, const CriticalSpec& cs, const Trace& t,
                          std::optional<std::uint64_t> expected_ticks = std::nullopt,
                          TraceKind kind = TraceKind::witness);
Validation validate_lasso(const System& sys, const CriticalSpec& cs, const Lasso& l,
                          Timestamp dmax);

// Counters checked by the test suite. Every explored or replayed edge is
// checked against the per-tick step bound (fewer than m instantaneous steps
// between ticks) and bounded searches against the depth bound (n+2)m+n.
// Each verifier replays what it emits through validate_trace/validate_lasso
// and counts the outcome under traces_certified.
struct SearchDiagnostics {
  std::atomic<std::uint64_t> edges_checked{0};
  std::atomic<std::uint64_t> step_bound_violations{0};
  std::atomic<std::uint64_t> depth_checked{0};
  std::atomic<std::uint64_t> depth_bound_violations{0};
  std::atomic<std::uint64_t> max_steps_between_ticks{0};
  std::atomic<std::uint64_t> traces_certified{0};
  std::atomic<std::uint64_t> certification_failures{0};
};

SearchDiagnostics& diagnostics();

}  // namespace tmsr

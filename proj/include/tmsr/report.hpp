#pragma once

// JSON verdict reports and their re-ingestion.

#include <optional>
#include <string>
#include <string_view>

#include "tmsr/verify.hpp"

namespace tmsr {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64, as 16 lowercase hex digits.
std::string input_digest(std::string_view text);

struct ReportMeta {
  std::string mode;  // "realizability" or "survivability"
  std::optional<std::uint64_t> ticks;
  std::string digest;
  bool timing = true;  // false writes elapsed_ms as 0
};

std::string emit_report(const System& sys, const CriticalSpec& cs, const Verdict& v,
                        const ReportMeta& meta);

struct ParsedReport {
  std::string mode;
  Outcome outcome = Outcome::unknown;
  std::optional<std::uint64_t> ticks;
  std::optional<Trace> trace;
  std::optional<Lasso> lasso;
  std::optional<std::size_t> critical_pair;
  std::string digest;
};

// Throws InputError on malformed JSON or names unknown to sys.
ParsedReport parse_report(const System& sys, const std::string& json);

// Replays whatever trace the report carries.
Validation replay(const System& sys, const CriticalSpec& cs, const ParsedReport& r,
                  Timestamp dmax);

}  // namespace tmsr

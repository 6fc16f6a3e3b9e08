#pragma once

// Delta-configurations: a configuration modulo shifting time, with adjacent
// timestamp differences above dmax collapsed to infinity.

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <string>
#include <vector>

#include "tmsr/rules.hpp"

namespace tmsr {

inline constexpr Timestamp kInfGap = std::numeric_limits<Timestamp>::max();

class DeltaConfig {
 public:
  DeltaConfig() = default;
  // gaps.size() must be facts.size() - 1; each gap <= dmax or kInfGap.
  DeltaConfig(std::vector<Fact> facts, std::vector<Timestamp> gaps, Timestamp dmax);

  const std::vector<Fact>& facts() const { return facts_; }
  const std::vector<Timestamp>& gaps() const { return gaps_; }
  Timestamp dmax() const { return dmax_; }

  // Stable text form, e.g. "[P(p2,5,6), 3, P(p1,1,1), inf, Time]".
  const std::string& key() const { return key_; }
  std::size_t hash() const { return hash_; }

  friend bool operator==(const DeltaConfig& a, const DeltaConfig& b) {
    return a.hash_ == b.hash_ && a.dmax_ == b.dmax_ && a.key_ == b.key_;
  }

 private:
  std::vector<Fact> facts_;
  std::vector<Timestamp> gaps_;
  Timestamp dmax_ = 1;
  std::string key_;
  std::size_t hash_ = 0;
};

DeltaConfig abstract(const Configuration& c, Timestamp dmax);
Configuration representative(const DeltaConfig& d);
// representative(abstract(c, dmax)): the canonical concrete member of c's class.
Configuration normalize(const Configuration& c, Timestamp dmax);

struct DeltaSucc {
  std::string label;       // rule name or "tick"
  std::size_t rule;        // index into System::rules, or kTickRule
  Substitution sigma;      // full match; label shows its term part
  DeltaConfig next;
};

inline constexpr std::size_t kTickRule = static_cast<std::size_t>(-1);

// Renders the term-variable part of s, e.g. "{Id=d1, E=9}".
std::string term_bindings(const System& sys, const Substitution& s);

std::vector<DeltaSucc> delta_step(const System& sys, const DeltaConfig& d);
bool delta_is_critical(const System& sys, const CriticalSpec& cs, const DeltaConfig& d);

boost::multiprecision::cpp_int count_bound(std::uint64_t m, std::uint64_t k, std::uint64_t dmax,
                                           std::uint64_t J, std::uint64_t E);

}  // namespace tmsr

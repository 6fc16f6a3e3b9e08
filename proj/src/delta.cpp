#include "tmsr/delta.hpp"

#include <functional>

#include "tmsr/error.hpp"

namespace tmsr {

DeltaConfig::DeltaConfig(std::vector<Fact> facts, std::vector<Timestamp> gaps, Timestamp dmax)
    : facts_(std::move(facts)), gaps_(std::move(gaps)), dmax_(dmax) {
  if (facts_.empty() || gaps_.size() + 1 != facts_.size())
    throw Error("delta configuration: gap count must be one less than fact count");
  std::size_t times = 0;
  for (const auto& f : facts_) times += f.is_time();
  if (times != 1) throw Error("delta configuration: single Time fact required");
  key_ = "[";
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    if (i) {
      Timestamp g = gaps_[i - 1];
      if (g != kInfGap && g > dmax_) throw Error("delta configuration: gap above dmax");
      key_ += ", ";
      key_ += g == kInfGap ? "inf" : std::to_string(g);
      key_ += ", ";
    }
    key_ += facts_[i].text();
  }
  key_ += "]";
  hash_ = std::hash<std::string>{}(key_);
}

DeltaConfig abstract(const Configuration& c, Timestamp dmax) {
  std::vector<Fact> facts;
  std::vector<Timestamp> gaps;
  auto fs = c.facts();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    facts.push_back(fs[i].fact);
    if (i) {
      Timestamp g = fs[i].ts - fs[i - 1].ts;
      gaps.push_back(g <= dmax ? g : kInfGap);
    }
  }
  return DeltaConfig(std::move(facts), std::move(gaps), dmax);
}

Configuration representative(const DeltaConfig& d) {
  std::vector<TimedFact> out;
  Timestamp t = 0;
  for (std::size_t i = 0; i < d.facts().size(); ++i) {
    if (i) t += d.gaps()[i - 1] == kInfGap ? d.dmax() + 1 : d.gaps()[i - 1];
    out.push_back({d.facts()[i], t});
  }
  return Configuration(std::move(out));
}

Configuration normalize(const Configuration& c, Timestamp dmax) {
  return representative(abstract(c, dmax));
}

std::string term_bindings(const System& sys, const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t v = 0; v < s.term_capacity(); ++v) {
    const TermCode* t = s.term(static_cast<TermVarId>(v));
    if (!t) continue;
    if (!first) out += ", ";
    first = false;
    out += sys.vars().term_var(static_cast<TermVarId>(v)).name + "=" +
           render_term(sys.sig(), nullptr, *t);
  }
  return out + "}";
}

std::vector<DeltaSucc> delta_step(const System& sys, const DeltaConfig& d) {
  Configuration rep = representative(d);
  std::vector<DeltaSucc> out;
  for (auto& e : enabled(sys, rep)) {
    const Rule& r = sys.rules()[e.rule];
    Configuration next = apply_match(sys, r, rep, e.match);
    out.push_back({r.name, e.rule, std::move(e.match.sigma), abstract(next, d.dmax())});
  }
  if (out.empty()) out.push_back({"tick", kTickRule, sys.empty_subst(), abstract(tick(rep), d.dmax())});
  return out;
}

bool delta_is_critical(const System& sys, const CriticalSpec& cs, const DeltaConfig& d) {
  return is_critical(sys, cs, representative(d)).has_value();
}

boost::multiprecision::cpp_int count_bound(std::uint64_t m, std::uint64_t k, std::uint64_t dmax,
                                           std::uint64_t J, std::uint64_t E) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::pow;
  if (m == 0 || k == 0 || dmax == 0 || J == 0 || E == 0)
    throw Error("count_bound: all arguments must be at least 1");
  auto u = [](std::uint64_t x) { return static_cast<unsigned>(x); };
  cpp_int a = pow(cpp_int(dmax) + 2, u(m - 1));
  cpp_int b = pow(cpp_int(J), u(m));
  cpp_int c = pow(cpp_int(E) + 2 * cpp_int(m) * k, u(m * k));
  return a * b * c;
}

}  // namespace tmsr

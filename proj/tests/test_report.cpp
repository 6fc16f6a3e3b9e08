#include <doctest.h>

#include <json.hpp>

#include "support/helpers.hpp"
#include "tmsr/encoders.hpp"
#include "tmsr/error.hpp"
#include "tmsr/report.hpp"

using namespace tmsr;
using nlohmann::json;

namespace {

const char* kDrain = R"(timed-msr 1
sort Drone
const d1 : Drone
var Id : Drone
var X Y E : Nat
pred Dr : Drone Nat Nat Nat
rule "stay": Time@T, Dr(Id,X,Y,E)@T1 -> Time@T, Dr(Id,X,Y,E)@(T+1)
rule "burn": Time@T, Dr(Id,X,Y,s(E))@T1 -> Time@T, Dr(Id,X,Y,E)@(T+1)
init: Time@0, Dr(d1,0,0,2)@0
critical "far": { Dr(Id,9,9,E)@T }
critical "empty": { Dr(Id,X,Y,0)@T }
)";

ReportMeta meta(const std::string& mode, std::optional<std::uint64_t> n = std::nullopt) {
  return {mode, n, "0123456789abcdef", false};
}

}  // namespace

TEST_CASE("digest") {
  CHECK(input_digest("") == "cbf29ce484222325");
  CHECK(input_digest("a") == "af63dc4c8601ec8c");
  CHECK(input_digest("timed-msr 1").size() == 16);
}

TEST_CASE("tick-only realizability report") {
  auto m = load_text("timed-msr 1\ninit: Time@0\n");
  auto v = realizability(m.sys, m.init, m.cs);
  auto j = json::parse(emit_report(m.sys, m.cs, v, meta("realizability")));
  CHECK(j["mode"] == "realizability");
  CHECK(j["outcome"] == "holds");
  CHECK_FALSE(j.contains("ticks"));
  REQUIRE(j.contains("lasso"));
  CHECK(j["lasso"]["stem"].empty());
  REQUIRE(j["lasso"]["cycle"].size() == 1);
  CHECK(j["lasso"]["cycle"][0]["label"] == "tick");
  CHECK(j["statistics"]["elapsed_ms"] == 0);
  CHECK(j["statistics"].contains("l_sigma_decimal"));
  CHECK(j["statistics"].contains("states"));
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["input_digest"] == "0123456789abcdef");
  CHECK(j["initial"][0]["fact"] == "Time");
}

TEST_CASE("critical init report names the pair") {
  auto m = load_text(R"(timed-msr 1
pred P
pred Q
init: Time@0, Q@0
critical "p": { P@T }
critical "q": { Q@T }
)");
  auto v = survivability(m.sys, m.init, m.cs);
  auto j = json::parse(emit_report(m.sys, m.cs, v, meta("survivability")));
  CHECK(j["outcome"] == "fails");
  CHECK(j["trace"].empty());
  CHECK(j["trace_kind"] == "counterexample");
  CHECK(j["critical_pair"]["index"] == 1);
  CHECK(j["critical_pair"]["name"] == "q");
}

TEST_CASE("report fields for a counterexample") {
  auto m = load_text(kDrain);
  auto v = bounded_survivability(m.sys, m.init, m.cs, 2);
  auto text = emit_report(m.sys, m.cs, v, meta("survivability", 2));
  auto j = json::parse(text);
  CHECK(j["ticks"] == 2);
  REQUIRE(j["trace"].size() == 3);
  auto s0 = j["trace"][0];
  CHECK(s0["label"] == "burn");
  CHECK(s0["subst"]["Id"] == "d1");
  CHECK(s0["subst"]["E"] == "1");
  CHECK(s0["subst"]["T"] == 0);
  CHECK(s0["config"][0]["fact"] == "Time");
  CHECK(s0["config"][1]["fact"] == "Dr(d1,0,0,1)");
  CHECK(s0["config"][1]["ts"] == 1);
  CHECK(j["critical_pair"]["name"] == "empty");
  CHECK(j["critical_pair"]["index"] == 1);
}

TEST_CASE("reports round trip and replay") {
  auto m = load_text(kDrain);
  Timestamp dmax = effective_dmax(m.sys, m.init, m.cs);
  std::vector<std::pair<Verdict, ReportMeta>> vs{
      {bounded_realizability(m.sys, m.init, m.cs, 3), meta("realizability", 3)},
      {bounded_survivability(m.sys, m.init, m.cs, 3), meta("survivability", 3)},
      {realizability(m.sys, m.init, m.cs), meta("realizability")},
      {survivability(m.sys, m.init, m.cs), meta("survivability")}};
  for (const auto& [v, mt] : vs) {
    auto text = emit_report(m.sys, m.cs, v, mt);
    auto r = parse_report(m.sys, text);
    CHECK(r.outcome == v.outcome);
    CHECK(r.mode == mt.mode);
    CHECK(r.ticks == mt.ticks);
    CHECK(r.digest == mt.digest);
    CHECK(r.critical_pair == v.critical_pair);
    CHECK(replay(m.sys, m.cs, r, dmax).ok);
    if (v.lasso) {
      REQUIRE(r.lasso);
      CHECK(r.lasso->stem.steps.size() == v.lasso->stem.steps.size());
      CHECK(r.lasso->cycle.steps.size() == v.lasso->cycle.steps.size());
      CHECK(r.lasso->cycle.last() == v.lasso->cycle.last());
    }
    // Emitting what was parsed yields the same text.
    Verdict back = v;
    if (r.trace && v.witness) back.witness = *r.trace;
    if (r.trace && v.counterexample) back.counterexample = *r.trace;
    if (r.lasso) back.lasso = *r.lasso;
    CHECK(emit_report(m.sys, m.cs, back, mt) == text);
  }
}

TEST_CASE("tampered reports fail replay or parsing") {
  auto m = load_text(kDrain);
  Timestamp dmax = effective_dmax(m.sys, m.init, m.cs);
  auto v = bounded_realizability(m.sys, m.init, m.cs, 2);
  auto j = json::parse(emit_report(m.sys, m.cs, v, meta("realizability", 2)));

  auto bad_ts = j;
  bad_ts["trace"][0]["config"][1]["ts"] = 7;
  CHECK_FALSE(replay(m.sys, m.cs, parse_report(m.sys, bad_ts.dump()), dmax).ok);

  auto bad_ticks = j;
  bad_ticks["ticks"] = 5;
  CHECK_FALSE(replay(m.sys, m.cs, parse_report(m.sys, bad_ticks.dump()), dmax).ok);

  auto bad_rule = j;
  bad_rule["trace"][0]["label"] = "teleport";
  CHECK_FALSE(replay(m.sys, m.cs, parse_report(m.sys, bad_rule.dump()), dmax).ok);

  auto bad_fact = j;
  bad_fact["trace"][0]["config"][1]["fact"] = "Nope(1)";
  CHECK_THROWS_AS(parse_report(m.sys, bad_fact.dump()), InputError);
  CHECK_THROWS_AS(parse_report(m.sys, "{not json"), InputError);
  CHECK_THROWS_AS(parse_report(m.sys, "{}"), InputError);
}

TEST_CASE("reports are byte-deterministic without timing") {
  DroneParams p;
  p.points = {{0, 0}, {2, 2}};
  p.M = 4;
  auto m = load_text(gen_drone(p));
  SearchBudget one, many;
  many.workers = 3;
  auto a = emit_report(m.sys, m.cs, bounded_survivability(m.sys, m.init, m.cs, 16, one),
                       meta("survivability", 16));
  auto b = emit_report(m.sys, m.cs, bounded_survivability(m.sys, m.init, m.cs, 16, many),
                       meta("survivability", 16));
  CHECK(a == b);
}

#include <doctest.h>

#include <random>
#include <set>

#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "tmsr/encoders.hpp"
#include "tmsr/error.hpp"
#include "tmsr/spec.hpp"

using namespace tmsr;

namespace {

struct Caught {
  Diag code;
  int line, col;
  std::string what;
};

Caught spec_error(const std::string& text) {
  try {
    load_text(text);
  } catch (const SpecError& e) {
    return {e.code(), e.line(), e.column(), e.what()};
  }
  FAIL("no SpecError for:\n" << text);
  return {Diag::io, 0, 0, ""};
}

const std::string kHead = "timed-msr 1\nsort Obj\nconst a : Obj\npred P : Obj\n";

}  // namespace

TEST_CASE("minimal spec") {
  auto m = load_text("timed-msr 1\ninit: Time@0\n");
  CHECK(m.sys.rules().empty());
  CHECK(render(m.init) == "{Time@0}");
  CHECK_FALSE(m.ticks.has_value());
  CHECK(m.cs.pairs.empty());
}

TEST_CASE("comments, continuations and params") {
  auto m = load_text(kHead + R"(# leading comment
param ticks = 3   # trailing
param k = 9
rule "r": Time@T, P(a)@T1
    -> Time@T, P(a)@(T+1)
init: Time@0, P(a)@0
)");
  CHECK(m.ticks == 3u);
  CHECK(m.sys.declared_k() == 9);
  CHECK(m.sys.rules().size() == 1);
}

TEST_CASE("error diagnostics carry codes and positions") {
  auto e = spec_error("timed-msr 2\ninit: Time@0\n");
  CHECK(e.code == Diag::header);
  CHECK(e.line == 1);
  CHECK(e.what.find("E_HEADER") != std::string::npos);

  e = spec_error(kHead + "init: Time@0, Q(a)@0\n");
  CHECK(e.code == Diag::undeclared);
  CHECK(e.line == 5);
  CHECK(e.col == 15);

  e = spec_error(kHead + "init: Time@0, P(a,a)@0\n");
  CHECK(e.code == Diag::arity);

  e = spec_error(kHead + "init: Time@0, P(3)@0\n");
  CHECK(e.code == Diag::sort);

  e = spec_error(kHead + "const a : Obj\ninit: Time@0\n");
  CHECK(e.code == Diag::duplicate);
  CHECK(e.line == 5);

  e = spec_error(kHead + "init: P(a)@0\n");
  CHECK(e.code == Diag::time_fact);
  CHECK(e.what.find("single Time fact required") != std::string::npos);
  e = spec_error(kHead + "init: Time@0, Time@1\n");
  CHECK(e.code == Diag::time_fact);

  e = spec_error(kHead + "param q = 2\ninit: Time@0\n");
  CHECK(e.code == Diag::param);
  e = spec_error(kHead + "param k = 1\ninit: Time@0, P(a)@0\n");
  CHECK(e.code == Diag::param);

  e = spec_error(kHead + "rule \"tick\": Time@T, P(a)@T1 -> Time@T, P(a)@(T+1)\ninit: Time@0\n");
  CHECK(e.code == Diag::rule_shape);
  e = spec_error(kHead + "rule \"r\": Time@T, P(a)@T1 -> Time@(T+1), P(a)@T\ninit: Time@0\n");
  CHECK(e.code == Diag::rule_shape);

  e = spec_error(kHead + "init: Time@0, P(a)@0 $\n");
  CHECK(e.code == Diag::syntax);
  e = spec_error(kHead + "rule \"r: Time@T\n");
  CHECK(e.code == Diag::syntax);
  e = spec_error(kHead + "frobnicate\n");
  CHECK(e.code == Diag::syntax);
  e = spec_error(kHead + "var X : Obj\ninit: Time@0, P(X)@0\n");
  CHECK(e.code == Diag::syntax);
}

TEST_CASE("distinct diagnostics have distinct tags") {
  std::set<std::string> tags;
  for (Diag d : {Diag::syntax, Diag::header, Diag::undeclared, Diag::duplicate, Diag::sort,
                 Diag::arity, Diag::time_fact, Diag::rule_shape, Diag::param, Diag::io})
    tags.insert(diag_code(d));
  CHECK(tags.size() == 10);
}

TEST_CASE("missing file is an io error") {
  try {
    load_file("/nonexistent/x.tmsr");
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(e.code() == Diag::io);
  }
}

TEST_CASE("a tick-like rule parses but is not progressive") {
  auto m = load_text(kHead + R"(rule "tick-like": Time@T, P(a)@T1 -> Time@T, P(a)@T
init: Time@0, P(a)@0
)");
  CHECK(check_balanced(m.sys).ok);
  auto r = check_progressive(m.sys);
  CHECK_FALSE(r.ok);
  REQUIRE(r.rules.size() == 1);
  CHECK_FALSE(r.rules[0].reason.empty());

  auto bare = load_text(kHead + "pred Q\nrule \"tick-like\": Q@T -> Q@(T+0)\ninit: Time@0, Q@0\n");
  REQUIRE(bare.sys.rules().size() == 1);
  CHECK_FALSE(check_progressive(bare.sys).ok);
}

TEST_CASE(">= guards expand into two variants with one name") {
  auto m = load_text(kHead + R"(rule "g": Time@T, P(a)@T1 | T >= T1 + 1 -> Time@T, P(a)@(T+1)
init: Time@0, P(a)@0
)");
  REQUIRE(m.sys.rules().size() == 2);
  CHECK(m.sys.rules()[0].name == "g");
  CHECK(m.sys.rules()[1].name == "g");
  CHECK(m.sys.rules()[0].decl_index == m.sys.rules()[1].decl_index);
}

TEST_CASE("the two-drone configuration round trips through print and parse") {
  auto text = R"(timed-msr 1
sort Drone Pnt
const d1 d2 : Drone
const p1 p2 : Pnt
pred Dr : Drone Nat Nat Nat
pred P : Pnt Nat Nat
init: Time@4, Dr(d1,1,2,10)@4, Dr(d2,5,5,8)@4, P(p1,1,1)@3, P(p2,5,6)@0
)";
  auto m = load_text(text);
  auto printed = print_spec(m.ast);
  CHECK(parse_spec(printed) == m.ast);
  auto again = load_text(printed);
  CHECK(again.init == m.init);
  CHECK(render(again.init) ==
        "{P(p2,5,6)@0, P(p1,1,1)@3, Dr(d1,1,2,10)@4, Dr(d2,5,5,8)@4, Time@4}");
}

TEST_CASE("print and parse are inverse on the macro rules and generated files") {
  std::vector<std::string> texts{th::drone_macros()};
  DroneParams dp;
  dp.points = {{0, 0}};
  dp.winds = {{0, 1, 'N'}};
  texts.push_back(gen_drone(dp));
  dp.station = true;
  texts.push_back(gen_drone(dp));
  texts.push_back(gen_3sat({2, {{{{1, true}, {2, false}, {1, false}}}, {{{2, true}, {2, true}, {1, true}}}}}));
  TmSpec t;
  t.states = {"q0", "h"};
  t.symbols = {"b", "1"};
  t.blank = "b";
  t.initial = "q0";
  t.final_states = {"h"};
  t.instructions = {{"q0", "b", "q0", "1", 'R'}, {"q0", "1", "h", "1", 'L'}};
  texts.push_back(gen_tm(t));
  std::mt19937 rng(1);
  for (int i = 0; i < 100; ++i) texts.push_back(oracle::random_system(rng));

  for (const auto& s : texts) {
    auto a = parse_spec(s);
    auto p = print_spec(a);
    auto b = parse_spec(p);
    REQUIRE(a == b);
    CHECK(print_spec(b) == p);
    auto ma = load(a), mb = load(b);
    CHECK(ma.sys.rules().size() == mb.sys.rules().size());
    CHECK(ma.init == mb.init);
  }
}

TEST_CASE("parse_ground_fact") {
  auto m = load_text(th::drone_macros());
  const auto& sig = m.sys.sig();
  CHECK(parse_ground_fact(sig, "Dr(d1, 1, 1, 5)").text() == "Dr(d1,1,1,5)");
  CHECK(parse_ground_fact(sig, "Dr(d1,1,1,s(s(z)))").text() == "Dr(d1,1,1,2)");
  CHECK_THROWS(parse_ground_fact(sig, "Dr(d1,1)"));
  CHECK_THROWS(parse_ground_fact(sig, "Nope"));
  CHECK_THROWS(parse_ground_fact(sig, "Dr(d1,1,1,X)"));
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/helpers.hpp"
#include "tmsr/error.hpp"
#include "tmsr/spec.hpp"

using namespace tmsr;

namespace {

const char* kSig = R"(timed-msr 1
sort Drone Pnt Obj
const d1 d2 : Drone
const p1 p2 : Pnt
const a : Obj
fn f : Obj Obj -> Obj
var Id : Drone
var X Y E : Nat
var Z : Obj
pred Dr : Drone Nat Nat Nat
pred P : Pnt Nat Nat
pred G : Nat Obj Obj
pred F
init: Time@0
)";

const Model& model() {
  static Model m = load_text(kSig);
  return m;
}

}  // namespace

TEST_CASE("signature has the built-ins") {
  Signature sig;
  CHECK(sig.sort_name(kNat) == "Nat");
  CHECK(sig.function(kZero).name == "z");
  CHECK(sig.function(kSucc).name == "s");
  CHECK(sig.predicate(kTimePred).name == "Time");
  CHECK(sig.predicate(kTimePred).args.empty());
}

TEST_CASE("fact sizes") {
  const auto& sig = model().sys.sig();
  // G(s(z), f(a,Z), a) counts like P(s(z), f(a,X), a)
  auto code = parse_ground_term(sig, "s(z)");
  CHECK(code.size() == 2);
  FactPattern pat{*sig.find_predicate("G"), {}};
  pat.args = parse_ground_term(sig, "1");
  auto fa = parse_ground_term(sig, "f(a,a)");
  pat.args.insert(pat.args.end(), fa.begin(), fa.end());
  pat.args.push_back(*sig.find_function("a"));
  pat.args[4] = var_word(*model().sys.vars().find_term_var("Z"));
  CHECK(fact_size(pat) == 7);

  CHECK(fact_size(TimedFact{Fact::time(), 4}) == 1);
  auto dr = parse_ground_fact(sig, "Dr(d1,1,2,10)");
  CHECK(fact_size(TimedFact{dr, 4}) == 18);
  CHECK(dr.text() == "Dr(d1,1,2,10)");
}

TEST_CASE("numerals round trip") {
  Signature sig;
  for (std::uint64_t n : {0ull, 1ull, 2ull, 10ull, 999ull}) {
    auto c = numeral(n);
    CHECK(c.size() == n + 1);
    CHECK(as_numeral(c, 0) == n);
    CHECK(render_term(sig, nullptr, c) == std::to_string(n));
  }
}

TEST_CASE("numeral round trip property up to 10^6") {
  Signature sig;
  std::mt19937 rng(7);
  std::vector<std::uint64_t> ns{1000000, 999999, 65536};
  for (int i = 0; i < 200; ++i) ns.push_back(rng() % 1000001);
  for (auto n : ns) {
    auto c = numeral(n);
    REQUIRE(as_numeral(c, 0) == n);
    REQUIRE(render_term(sig, nullptr, c) == std::to_string(n));
  }
}

TEST_CASE("substitution") {
  const auto& sys = model().sys;
  const auto& sig = sys.sig();
  const auto& vars = sys.vars();
  FactPattern pat{*sig.find_predicate("Dr"), {}};
  for (const char* v : {"Id", "X", "Y", "E"}) pat.args.push_back(var_word(*vars.find_term_var(v)));

  Substitution s = sys.empty_subst();
  s.bind_term(*vars.find_term_var("Id"), parse_ground_term(sig, "d1"));
  s.bind_term(*vars.find_term_var("X"), numeral(1));
  s.bind_term(*vars.find_term_var("Y"), numeral(2));
  CHECK_THROWS_AS(apply_subst(sig, vars, pat, s), SubstitutionError);
  s.bind_term(*vars.find_term_var("E"), numeral(10));
  CHECK(apply_subst(sig, vars, pat, s).text() == "Dr(d1,1,2,10)");

  FactPattern ground{*sig.find_predicate("P"), parse_ground_term(sig, "p1")};
  auto one = numeral(1);
  ground.args.insert(ground.args.end(), one.begin(), one.end());
  ground.args.insert(ground.args.end(), one.begin(), one.end());
  CHECK(apply_subst(sig, vars, ground, s).text() == "P(p1,1,1)");
  CHECK(apply_subst(sig, vars, ground, sys.empty_subst()).text() == "P(p1,1,1)");
}

TEST_CASE("unmapped time variable is an error") {
  const auto& sys = model().sys;
  Substitution s = sys.empty_subst();
  TimeConstraint c{TimeConstraint::Rel::greater, 0, 0, 0};
  CHECK_THROWS_AS(eval_constraint(c, s), SubstitutionError);
}

TEST_CASE("substitution size growth property") {
  // Substituting a variable by a term of size t grows the fact by t - 1.
  const auto& sys = model().sys;
  const auto& sig = sys.sig();
  const auto& vars = sys.vars();
  std::mt19937 rng(11);
  auto zv = *vars.find_term_var("Z");
  auto xv = *vars.find_term_var("X");
  for (int i = 0; i < 300; ++i) {
    // G(X, Z, f(Z, a))
    FactPattern pat{*sig.find_predicate("G"), {}};
    pat.args = {var_word(xv), var_word(zv), *sig.find_function("f"), var_word(zv),
                *sig.find_function("a")};
    TermCode zt{*sig.find_function("a")};
    for (unsigned d = rng() % 4; d > 0; --d) {
      TermCode n{*sig.find_function("f")};
      n.insert(n.end(), zt.begin(), zt.end());
      n.push_back(*sig.find_function("a"));
      zt = n;
    }
    auto n = rng() % 50;
    Substitution s = sys.empty_subst();
    s.bind_term(xv, numeral(n));
    s.bind_term(zv, zt);
    auto f = apply_subst(sig, vars, pat, s);
    CHECK(f.size() == fact_size(pat) + n + 2 * (zt.size() - 1));
    CHECK(f.size() >= fact_size(pat));
  }
}

TEST_CASE("configurations need exactly one Time fact") {
  const auto& sig = model().sys.sig();
  CHECK_THROWS_WITH_AS(Configuration({{parse_ground_fact(sig, "F"), 0}}),
                       doctest::Contains("single Time fact required"), InputError);
  CHECK_THROWS_AS(Configuration({{Fact::time(), 0}, {Fact::time(), 1}}), InputError);
  CHECK_NOTHROW(Configuration({{Fact::time(), 0}}));
}

TEST_CASE("canonical order of the drone configuration") {
  const auto& sig = model().sys.sig();
  auto c = th::config(sig,
                      "Time@4, Dr(d1,1,2,10)@4, Dr(d2,5,5,8)@4, P(p1,1,1)@3, P(p2,5,6)@0");
  std::vector<std::string> got;
  for (const auto& f : canonical_sequence(c)) got.push_back(render(f));
  CHECK(got == std::vector<std::string>{"P(p2,5,6)@0", "P(p1,1,1)@3", "Dr(d1,1,2,10)@4",
                                        "Dr(d2,5,5,8)@4", "Time@4"});
  CHECK(render(Configuration({{Fact::time(), 0}})) == "{Time@0}");
  auto dup = th::config(sig, "Time@0, F@1, F@1");
  CHECK(dup.size() == 3);
}

TEST_CASE("canonical_sequence is an idempotent permutation") {
  const auto& sig = model().sys.sig();
  std::mt19937 rng(3);
  std::vector<std::string> pool{"F", "P(p1,1,1)", "P(p2,0,3)", "Dr(d1,0,0,2)", "Dr(d2,1,1,1)",
                                "G(3,a,f(a,a))"};
  for (int i = 0; i < 200; ++i) {
    std::vector<TimedFact> fs{{Fact::time(), rng() % 6}};
    for (unsigned n = rng() % 6; n > 0; --n)
      fs.push_back({parse_ground_fact(sig, pool[rng() % pool.size()]), rng() % 6});
    auto shuffled = fs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    Configuration a(fs), b(shuffled);
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    auto seq = canonical_sequence(a);
    CHECK(canonical_sequence(Configuration(seq)) == seq);
    CHECK(std::is_permutation(seq.begin(), seq.end(), fs.begin(), fs.end()));
    CHECK(std::is_sorted(seq.begin(), seq.end(), canonical_less));
  }
}

TEST_CASE("advancing time") {
  const auto& sig = model().sys.sig();
  auto c = th::config(sig, "Time@4, F@2");
  auto n = c.advanced();
  CHECK(render(n) == "{F@2, Time@5}");
}

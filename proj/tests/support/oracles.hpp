#pragma once

// Reference implementations used to check the library. None of them go
// through the search code.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tmsr/encoders.hpp"
#include "tmsr/spec.hpp"

namespace oracle {

bool satisfiable(const tmsr::Cnf3& f);

// Every 3-CNF over p = 1..3 variables with 1..3 clauses, up to the order of
// literals inside a clause and the order of clauses.
std::vector<tmsr::Cnf3> cnf_family();

// Runs forever (or gets stuck outside a final state) on some branch.
// Cells 0..space+1, moves off the ends leave the head in place.
bool tm_diverges(const tmsr::TmSpec& t);

// Deterministic total machines with 1-2 working states plus halt state h,
// alphabet {b} or {b,1}, moves L/R, blank input, space 2.
std::vector<tmsr::TmSpec> tm_family();

// (dmax+2)^(m-1) * J^m * (E+2mk)^(mk), by repeated multiplication.
std::string count_formula(std::uint64_t m, std::uint64_t k, std::uint64_t dmax, std::uint64_t J,
                          std::uint64_t E);

struct Verdicts {
  bool realizable = false;
  bool survivable = false;
  std::size_t states = 0;
};

// Explores concrete configurations identified up to the timestamp quotient
// (same fact order, equal gaps or both gaps above dmax). Lazy ticks.
Verdicts explore(const tmsr::Model& m);

// A random progressive system: zero-ary P, Q(Obj) over constants a and b,
// at most 4 facts including Time, at most 5 rules, offsets and initial
// timestamps at most 2.
std::string random_system(std::mt19937& rng);

}  // namespace oracle

#pragma once

// Scenario generators. Each returns a complete spec file in the DSL.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tmsr {

struct WindCell {
  unsigned x = 0;
  unsigned y = 0;
  char dir = 'N';  // N: y+1, S: y-1, E: x+1, W: x-1
};

struct DroneParams {
  unsigned drones = 1;
  std::vector<std::pair<unsigned, unsigned>> points;
  unsigned x_max = 2;  // coordinates run 0..x_max
  unsigned y_max = 2;
  unsigned M = 2;      // pictures may be at most M time units old
  unsigned e_max = 6;
  unsigned base_x = 1;
  unsigned base_y = 1;
  std::vector<WindCell> winds;
  bool station = false;  // single-slot charging station
  unsigned station_limit = 1;
  std::size_t rule_ceiling = 100000;
  std::optional<unsigned> ticks;  // written as `param ticks`; default 4M
};

enum class DroneAct { idle, charge, click, north, south, east, west };

struct DroneDecision {
  DroneAct act = DroneAct::idle;
  unsigned point = 0;  // for click
};

// The greedy strategy, in priority order:
//  1. at base with e < e_max: charge;
//  2. on a point with age > 0 and e >= d_base + 2: click it (lowest index);
//  3. e <= d_base + 2: step toward base (x first), idle at base;
//  4. otherwise step toward the stalest point (ties to lowest index), idle
//     when already on it.
// d_base is the Manhattan distance to base. Outside wind, this keeps
// e >= d_base + 1, so the drone always gets home.
DroneDecision drone_greedy(const DroneParams& p, unsigned x, unsigned y, unsigned e,
                           const std::vector<unsigned>& ages);

// Throws InputError on invalid parameters, LimitError above the rule ceiling.
std::string gen_drone(const DroneParams& p);

struct Literal {
  unsigned var = 1;  // 1-based
  bool positive = true;
};

struct Cnf3 {
  unsigned vars = 0;
  std::vector<std::array<Literal, 3>> clauses;
};

std::string gen_3sat(const Cnf3& f);

struct TmInstruction {
  std::string state;
  std::string read;
  std::string next;
  std::string write;
  char move = 'R';  // L, R or S
};

struct TmSpec {
  std::vector<std::string> states;
  std::vector<std::string> symbols;  // tape alphabet, blank included
  std::string blank;
  std::string initial;
  std::vector<std::string> final_states;
  std::vector<TmInstruction> instructions;
  unsigned space = 2;               // cells 1..space hold the input
  std::vector<std::string> input;   // at most `space` symbols
};

// Cells 0..space+1 are encoded. A move off either end leaves the head in place.
std::string gen_tm(const TmSpec& t);

}  // namespace tmsr

#pragma once

#include <string>

#include "tmsr/spec.hpp"

namespace th {

// "Time@4, P(p1,1,1)@3" against the model's signature.
tmsr::Configuration config(const tmsr::Signature& sig, const std::string& text);

// Index of the first rule with this name; throws when absent.
std::size_t rule_index(const tmsr::System& sys, const std::string& name);

// The drone macro rules written with variables and successor patterns,
// two points p1 (0,0) and p2 (2,2), base (1,1). `extra` is appended.
std::string drone_macros(const std::string& extra = "");

}  // namespace th

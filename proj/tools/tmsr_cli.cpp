// tmsr: command-line front end over the C API.
//
// Exit codes: 0 holds, 1 fails, 2 unknown (budget), 3 input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tmsr/tmsr.h"

namespace {

constexpr int kExitInput = 3;

int input_error(const std::string& what) {
  std::cerr << "tmsr: " << what << "\n";
  return kExitInput;
}

int api_error(const char* where) {
  std::cerr << "tmsr: " << where << ": " << tmsr_last_error() << "\n";
  return kExitInput;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_out(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream o(path, std::ios::binary);
  o << text;
  return static_cast<bool>(o);
}

struct ModelHandle {
  tmsr_model* m = nullptr;
  ~ModelHandle() { tmsr_model_free(m); }
};

// "3,4" -> two numbers.
bool pair_of(const std::string& s, unsigned& a, unsigned& b) {
  return std::sscanf(s.c_str(), "%u,%u", &a, &b) == 2;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

struct CheckArgs {
  std::string spec;
};

struct VerifyArgs {
  std::string spec;
  std::string mode = "realizability";
  std::uint64_t ticks = 0;
  bool unbounded = false;
  std::uint64_t max_states = 2'000'000;
  double timeout = 0;
  unsigned workers = 1;
  std::string out;
  bool no_timing = false;
};

struct DroneArgs {
  unsigned drones = 1;
  std::vector<std::string> points;
  std::string grid = "3x3";
  std::string base = "1,1";
  unsigned M = 2;
  unsigned e_max = 6;
  std::vector<std::string> winds;
  bool station = false;
  unsigned station_limit = 1;
  std::size_t max_rules = 100000;
  std::uint64_t ticks = 0;
  std::string out = "-";
};

struct SatArgs {
  unsigned vars = 0;
  std::vector<std::string> clauses;
  std::string out = "-";
};

struct TmArgs {
  std::string states, symbols, blank = "b", initial, finals, input;
  std::vector<std::string> rules;
  unsigned space = 2;
  std::string out = "-";
};

struct ReplayArgs {
  std::string spec;
  std::string report;
};

int load(const std::string& path, ModelHandle& h) {
  if (tmsr_model_load_file(path.c_str(), &h.m) != TMSR_OK) return api_error(path.c_str());
  return 0;
}

int run_check(const CheckArgs& a) {
  ModelHandle h;
  if (int rc = load(a.spec, h)) return rc;
  int bal = 0, prog = 0;
  char* summary = nullptr;
  if (tmsr_model_check(h.m, &bal, &prog, &summary) != TMSR_OK) return api_error("check");
  std::cout << summary;
  tmsr_string_free(summary);
  return prog ? 0 : 1;
}

int run_verify(const VerifyArgs& a) {
  std::string text;
  if (!read_file(a.spec, text)) return input_error("cannot read " + a.spec);
  ModelHandle h;
  if (tmsr_model_load_text(text.c_str(), &h.m) != TMSR_OK) return api_error(a.spec.c_str());
  tmsr_verify_options o;
  tmsr_verify_options_init(&o);
  if (a.mode == "realizability") o.mode = TMSR_REALIZABILITY;
  else if (a.mode == "survivability") o.mode = TMSR_SURVIVABILITY;
  else return input_error("unknown mode '" + a.mode + "'");
  std::uint64_t spec_ticks = 0;
  if (a.unbounded) {
    o.bounded = 0;
  } else if (a.ticks) {
    o.bounded = 1;
    o.ticks = a.ticks;
  } else if (tmsr_model_default_ticks(h.m, &spec_ticks)) {
    o.bounded = 1;
    o.ticks = spec_ticks;
  }
  o.max_states = a.max_states;
  o.timeout_seconds = a.timeout;
  o.workers = a.workers;
  o.timing = a.no_timing ? 0 : 1;
  tmsr_report* r = nullptr;
  if (tmsr_verify(h.m, &o, &r) != TMSR_OK) return api_error("verify");
  int code = static_cast<int>(tmsr_report_outcome(r));
  if (a.out == "-") {
    std::cout << tmsr_report_json(r);
  } else {
    static const char* names[] = {"holds", "fails", "unknown"};
    std::cout << a.mode << (o.bounded ? " (" + std::to_string(o.ticks) + " ticks)" : "") << ": "
              << names[code] << "\n";
    if (*tmsr_report_note(r)) std::cout << "note: " << tmsr_report_note(r) << "\n";
    if (!a.out.empty() && !write_out(a.out, tmsr_report_json(r))) {
      tmsr_report_free(r);
      return input_error("cannot write " + a.out);
    }
  }
  tmsr_report_free(r);
  return code;
}

int emit_spec(tmsr_status st, char* spec, const std::string& out) {
  if (st != TMSR_OK) return api_error("gen");
  if (!spec) return input_error("gen: no output");
  bool ok = write_out(out, spec);
  tmsr_string_free(spec);
  return ok ? 0 : input_error("cannot write " + out);
}

int run_drone(const DroneArgs& a) {
  tmsr_drone_params p;
  tmsr_drone_params_init(&p);
  unsigned w = 0, hgt = 0;
  if (std::sscanf(a.grid.c_str(), "%ux%u", &w, &hgt) != 2 || w == 0 || hgt == 0)
    return input_error("grid must look like 3x3");
  p.x_max = w - 1;
  p.y_max = hgt - 1;
  if (!pair_of(a.base, p.base_x, p.base_y)) return input_error("base must look like 1,1");
  std::vector<unsigned> xy;
  for (const auto& s : a.points) {
    unsigned x, y;
    if (!pair_of(s, x, y)) return input_error("point must look like 0,2: " + s);
    xy.push_back(x);
    xy.push_back(y);
  }
  std::vector<tmsr_wind> winds;
  for (const auto& s : a.winds) {
    tmsr_wind wd{};
    if (std::sscanf(s.c_str(), "%u,%u,%c", &wd.x, &wd.y, &wd.dir) != 3)
      return input_error("wind must look like 0,1,N: " + s);
    winds.push_back(wd);
  }
  p.drones = a.drones;
  p.point_xy = xy.data();
  p.point_count = a.points.size();
  p.M = a.M;
  p.e_max = a.e_max;
  p.winds = winds.data();
  p.wind_count = winds.size();
  p.station = a.station;
  p.station_limit = a.station_limit;
  p.rule_ceiling = a.max_rules;
  p.ticks = a.ticks;
  char* spec = nullptr;
  tmsr_status st = tmsr_gen_drone(&p, &spec);
  return emit_spec(st, spec, a.out);
}

int run_3sat(const SatArgs& a) {
  std::vector<int> lits;
  for (const auto& c : a.clauses) {
    auto parts = split(c, ',');
    if (parts.size() != 3) return input_error("clause needs three literals: " + c);
    for (const auto& s : parts) {
      try {
        lits.push_back(std::stoi(s));
      } catch (const std::exception&) {
        return input_error("bad literal '" + s + "'");
      }
    }
  }
  char* spec = nullptr;
  tmsr_status st = tmsr_gen_3sat(a.vars, lits.data(), a.clauses.size(), &spec);
  return emit_spec(st, spec, a.out);
}

int run_tm(const TmArgs& a) {
  auto states = split(a.states, ','), symbols = split(a.symbols, ','), finals = split(a.finals, ',');
  auto input = split(a.input, ',');
  std::vector<std::vector<std::string>> parts;
  for (const auto& r : a.rules) {
    parts.push_back(split(r, ','));
    if (parts.back().size() != 5 || parts.back()[4].size() != 1)
      return input_error("rule must look like q0,b,q1,1,R: " + r);
  }
  auto ptrs = [](const std::vector<std::string>& v) {
    std::vector<const char*> out;
    for (const auto& s : v) out.push_back(s.c_str());
    return out;
  };
  auto sp = ptrs(states), yp = ptrs(symbols), fp = ptrs(finals), ip = ptrs(input);
  std::vector<tmsr_tm_instruction> ins;
  for (const auto& r : parts)
    ins.push_back({r[0].c_str(), r[1].c_str(), r[2].c_str(), r[3].c_str(), r[4][0]});
  tmsr_tm_params p{sp.data(), sp.size(), yp.data(), yp.size(), a.blank.c_str(), a.initial.c_str(),
                   fp.data(), fp.size(), ins.data(), ins.size(), a.space, ip.data(), ip.size()};
  char* spec = nullptr;
  tmsr_status st = tmsr_gen_tm(&p, &spec);
  return emit_spec(st, spec, a.out);
}

int run_replay(const ReplayArgs& a) {
  ModelHandle h;
  if (int rc = load(a.spec, h)) return rc;
  std::string json;
  if (!read_file(a.report, json)) return input_error("cannot read " + a.report);
  int valid = 0;
  char* diag = nullptr;
  if (tmsr_replay(h.m, json.c_str(), &valid, &diag) != TMSR_OK) return api_error(a.report.c_str());
  if (valid) std::cout << "replay: ok\n";
  else std::cout << "replay: invalid: " << diag << "\n";
  tmsr_string_free(diag);
  return valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timed multiset rewriting: realizability and survivability checks"};
  app.set_version_flag("--version", std::string(tmsr_version()));
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Parse a spec and classify its rules");
  check->add_option("spec", ca.spec, "spec file")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Decide realizability or survivability");
  verify->add_option("spec", va.spec, "spec file")->required();
  verify->add_option("--mode", va.mode, "realizability or survivability")
      ->check(CLI::IsMember({"realizability", "survivability"}));
  verify->add_option("--ticks", va.ticks, "n-tick bounded form (default: the spec's ticks param)");
  verify->add_flag("--unbounded", va.unbounded, "ignore the spec's ticks param");
  verify->add_option("--max-states", va.max_states, "state budget (0: none)");
  verify->add_option("--timeout", va.timeout, "seconds (0: none)");
  verify->add_option("--workers", va.workers, "expansion threads")->check(CLI::PositiveNumber);
  verify->add_option("--out", va.out, "write the JSON report here ('-' for stdout)");
  verify->add_flag("--no-timing", va.no_timing, "report elapsed_ms as 0");

  auto* gen = app.add_subcommand("gen", "Generate a scenario spec");
  gen->require_subcommand(1);
  DroneArgs da;
  auto* drone = gen->add_subcommand("drone", "Drone surveillance scenario");
  drone->add_option("--drones", da.drones);
  drone->add_option("--point", da.points, "point x,y (repeatable)");
  drone->add_option("--grid", da.grid, "WxH cells");
  drone->add_option("--base", da.base, "x,y");
  drone->add_option("-M,--recency", da.M, "pictures at most M time units old");
  drone->add_option("--emax", da.e_max, "battery capacity");
  drone->add_option("--wind", da.winds, "x,y,D with D in NSEW (repeatable)");
  drone->add_flag("--station", da.station, "single-slot charging station");
  drone->add_option("--station-limit", da.station_limit, "max docked time units");
  drone->add_option("--max-rules", da.max_rules, "rule ceiling");
  drone->add_option("--ticks", da.ticks, "default tick budget (default 4M)");
  drone->add_option("--out", da.out, "output file ('-' for stdout)");
  SatArgs sa;
  auto* sat = gen->add_subcommand("3sat", "3-SAT reduction");
  sat->add_option("--vars", sa.vars, "variable count")->required();
  sat->add_option("--clause", sa.clauses, "three signed literals, e.g. 1,-2,3 (repeatable)")
      ->required();
  sat->add_option("--out", sa.out, "output file ('-' for stdout)");
  TmArgs ta;
  auto* tm = gen->add_subcommand("tm", "Bounded-space Turing machine");
  tm->add_option("--states", ta.states, "comma-separated")->required();
  tm->add_option("--symbols", ta.symbols, "comma-separated, blank included")->required();
  tm->add_option("--blank", ta.blank);
  tm->add_option("--initial", ta.initial)->required();
  tm->add_option("--final", ta.finals, "comma-separated halting states");
  tm->add_option("--rule", ta.rules, "q,read,q',write,L|R|S (repeatable)");
  tm->add_option("--space", ta.space);
  tm->add_option("--input", ta.input, "comma-separated symbols");
  tm->add_option("--out", ta.out, "output file ('-' for stdout)");

  ReplayArgs ra;
  auto* rep = app.add_subcommand("replay", "Re-validate the trace in a report");
  rep->add_option("spec", ra.spec)->required();
  rep->add_option("report", ra.report)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  if (*check) return run_check(ca);
  if (*verify) return run_verify(va);
  if (*drone) return run_drone(da);
  if (*sat) return run_3sat(sa);
  if (*tm) return run_tm(ta);
  if (*rep) return run_replay(ra);
  return kExitInput;
}

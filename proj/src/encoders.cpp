#include "tmsr/encoders.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tmsr/error.hpp"

namespace tmsr {

namespace {

unsigned dist(unsigned a, unsigned b) { return a > b ? a - b : b - a; }

std::string at(const std::string& tv, unsigned off = 0) {
  if (off == 0) return "@" + tv;
  return "@(" + tv + "+" + std::to_string(off) + ")";
}

std::string csv(const std::vector<std::string>& v) {
  std::string o;
  for (std::size_t i = 0; i < v.size(); ++i) o += (i ? ", " : "") + v[i];
  return o;
}

const char* act_name(DroneAct a) {
  switch (a) {
    case DroneAct::idle: return "idle";
    case DroneAct::charge: return "charge";
    case DroneAct::click: return "click";
    case DroneAct::north: return "north";
    case DroneAct::south: return "south";
    case DroneAct::east: return "east";
    case DroneAct::west: return "west";
  }
  return "?";
}

// x first, then y.
DroneAct step_toward(unsigned x, unsigned y, unsigned tx, unsigned ty) {
  if (x < tx) return DroneAct::east;
  if (x > tx) return DroneAct::west;
  if (y < ty) return DroneAct::north;
  if (y > ty) return DroneAct::south;
  return DroneAct::idle;
}

void moved(DroneAct a, unsigned& x, unsigned& y) {
  switch (a) {
    case DroneAct::north: ++y; break;
    case DroneAct::south: --y; break;
    case DroneAct::east: ++x; break;
    case DroneAct::west: --x; break;
    default: break;
  }
}

void check_params(const DroneParams& p) {
  if (p.drones == 0) throw InputError("drone scenario needs at least one drone");
  if (p.M < 1) throw InputError("M must be at least 1");
  if (p.e_max < 1) throw InputError("e_max must be at least 1");
  if (p.base_x > p.x_max || p.base_y > p.y_max) throw InputError("base lies outside the grid");
  for (std::size_t i = 0; i < p.points.size(); ++i)
    if (p.points[i].first > p.x_max || p.points[i].second > p.y_max)
      throw InputError("point p" + std::to_string(i + 1) + " lies outside the grid");
  for (const auto& w : p.winds) {
    if (w.x > p.x_max || w.y > p.y_max) throw InputError("wind cell lies outside the grid");
    if (w.dir != 'N' && w.dir != 'S' && w.dir != 'E' && w.dir != 'W')
      throw InputError(std::string("unknown wind direction '") + w.dir + "'");
  }
  if (p.station && p.station_limit < 1) throw InputError("station limit must be at least 1");
}

}  // namespace

DroneDecision drone_greedy(const DroneParams& p, unsigned x, unsigned y, unsigned e,
                           const std::vector<unsigned>& ages) {
  const unsigned db = dist(x, p.base_x) + dist(y, p.base_y);
  const bool at_base = db == 0;
  if (at_base && e < p.e_max) return {DroneAct::charge, 0};
  if (e >= db + 2)
    for (std::size_t i = 0; i < p.points.size(); ++i)
      if (p.points[i] == std::pair{x, y} && ages[i] > 0)
        return {DroneAct::click, static_cast<unsigned>(i)};
  if (e <= db + 2) return {step_toward(x, y, p.base_x, p.base_y), 0};
  if (p.points.empty()) return {DroneAct::idle, 0};
  std::size_t best = 0;
  for (std::size_t i = 1; i < ages.size(); ++i)
    if (ages[i] > ages[best]) best = i;
  return {step_toward(x, y, p.points[best].first, p.points[best].second), 0};
}

std::string gen_drone(const DroneParams& p) {
  check_params(p);
  const std::size_t np = p.points.size();
  const unsigned cells = (p.x_max + 1) * (p.y_max + 1);

  // Upper estimate before expanding anything.
  long double estimate = static_cast<long double>(p.drones) * cells * p.e_max;
  for (std::size_t i = 0; i < np; ++i) estimate *= p.M + 1;
  estimate += static_cast<long double>(p.winds.size()) + 3.0L * p.drones * p.e_max;
  if (estimate > static_cast<long double>(p.rule_ceiling))
    throw LimitError("drone scenario would expand to about " +
                     std::to_string(static_cast<unsigned long long>(estimate)) +
                     " rules (ceiling " + std::to_string(p.rule_ceiling) +
                     "); use a smaller grid, fewer points or a smaller M");

  std::ostringstream o;
  o << "timed-msr 1\n";
  o << "# drones " << p.drones << ", points " << np << ", grid " << p.x_max + 1 << "x"
    << p.y_max + 1 << ", base (" << p.base_x << "," << p.base_y << "), M " << p.M
    << ", e_max " << p.e_max << "\n";
  o << "sort Drone\n";
  if (np) o << "sort Pnt\n";
  std::vector<std::string> ds, ps;
  for (unsigned d = 1; d <= p.drones; ++d) ds.push_back("d" + std::to_string(d));
  for (std::size_t i = 1; i <= np; ++i) ps.push_back("p" + std::to_string(i));
  {
    std::string names = ds[0];
    for (std::size_t i = 1; i < ds.size(); ++i) names += " " + ds[i];
    if (p.station) names += " empty";
    o << "const " << names << " : Drone\n";
  }
  if (np) {
    std::string names = ps[0];
    for (std::size_t i = 1; i < ps.size(); ++i) names += " " + ps[i];
    o << "const " << names << " : Pnt\n";
  }
  o << "var Id : Drone\n";
  o << "var X Y E : Nat\n";
  o << "pred Dr : Drone Nat Nat Nat\n";
  if (np) o << "pred P : Pnt Nat Nat\n";
  if (p.station) {
    o << "pred St : Drone\n";
    o << "pred Dk : Drone Nat\n";
  }
  o << "param ticks = " << p.ticks.value_or(4 * p.M) << "\n";

  auto pfact = [&](std::size_t i) {
    return "P(" + ps[i] + "," + std::to_string(p.points[i].first) + "," +
           std::to_string(p.points[i].second) + ")";
  };
  auto dfact = [&](const std::string& d, unsigned x, unsigned y, unsigned e) {
    return "Dr(" + d + "," + std::to_string(x) + "," + std::to_string(y) + "," +
           std::to_string(e) + ")";
  };

  std::size_t count = 0;
  auto emit = [&](const std::string& name, const std::vector<std::string>& lhs,
                  const std::vector<std::string>& guard, const std::vector<std::string>& rhs) {
    if (++count > p.rule_ceiling)
      throw LimitError("drone scenario exceeds the rule ceiling of " +
                       std::to_string(p.rule_ceiling) + "; use a smaller grid or M");
    o << "rule \"" << name << "\": " << csv(lhs);
    if (!guard.empty()) o << " | " << csv(guard);
    o << " -> " << csv(rhs) << "\n";
  };

  for (const auto& d : ds) {
    for (unsigned x = 0; x <= p.x_max; ++x)
      for (unsigned y = 0; y <= p.y_max; ++y)
        for (unsigned e = 1; e <= p.e_max; ++e) {
          const std::string pos =
              std::to_string(x) + "," + std::to_string(y) + " e" + std::to_string(e);
          // Charging ignores the pictures, so one rule covers every age vector.
          if (x == p.base_x && y == p.base_y && e < p.e_max) {
            if (p.station) {
              emit(d + " dock e" + std::to_string(e),
                   {"Time@T", dfact(d, x, y, e) + "@Td", "St(empty)@Ts"}, {},
                   {"Time@T", "Dk(" + d + "," + std::to_string(e) + ")" + at("T", 1),
                    "St(" + d + ")@T"});
            } else {
              emit(d + " charge e" + std::to_string(e), {"Time@T", dfact(d, x, y, e) + "@Td"}, {},
                   {"Time@T", dfact(d, x, y, e + 1) + at("T", 1)});
            }
            continue;
          }
          std::vector<unsigned> ages(np, 0);
          while (true) {
            DroneDecision dec = drone_greedy(p, x, y, e, ages);
            if (dec.act != DroneAct::idle) {
              std::vector<std::string> lhs{"Time@T"}, rhs{"Time@T"}, guard;
              std::string tag;
              for (std::size_t i = 0; i < np; ++i) {
                std::string tv = "T" + std::to_string(i + 1);
                lhs.push_back(pfact(i) + "@" + tv);
                if (dec.act == DroneAct::click && dec.point == i)
                  rhs.push_back(pfact(i) + "@T");
                else
                  rhs.push_back(pfact(i) + "@" + tv);
                guard.push_back("T = " + tv + (ages[i] ? " + " + std::to_string(ages[i]) : ""));
                tag += (i ? "," : "") + std::to_string(ages[i]);
              }
              lhs.push_back(dfact(d, x, y, e) + "@Td");
              unsigned nx = x, ny = y;
              moved(dec.act, nx, ny);
              rhs.push_back(dfact(d, nx, ny, e - 1) + at("T", 1));
              std::string name = d + " " + act_name(dec.act);
              if (dec.act == DroneAct::click) name += " " + ps[dec.point];
              name += " at " + pos;
              if (np) name += " ages " + tag;
              emit(name, lhs, guard, rhs);
            }
            std::size_t i = 0;
            while (i < np && ages[i] == p.M) ages[i++] = 0;
            if (i == np) break;
            ++ages[i];
          }
        }
    if (p.station) {
      for (unsigned e = 1; e < p.e_max; ++e)
        emit(d + " recharge e" + std::to_string(e),
             {"Time@T", "Dk(" + d + "," + std::to_string(e) + ")@Td"}, {},
             {"Time@T", "Dk(" + d + "," + std::to_string(e + 1) + ")" + at("T", 1)});
      emit(d + " undock",
           {"Time@T", "Dk(" + d + "," + std::to_string(p.e_max) + ")@Td", "St(" + d + ")@Ts"}, {},
           {"Time@T", dfact(d, p.base_x, p.base_y, p.e_max) + at("T", 1), "St(empty)@T"});
    }
  }

  for (const auto& w : p.winds) {
    unsigned nx = w.x, ny = w.y;
    if ((w.dir == 'N' && w.y == p.y_max) || (w.dir == 'S' && w.y == 0) ||
        (w.dir == 'E' && w.x == p.x_max) || (w.dir == 'W' && w.x == 0))
      continue;
    DroneAct a = w.dir == 'N'   ? DroneAct::north
                 : w.dir == 'S' ? DroneAct::south
                 : w.dir == 'E' ? DroneAct::east
                                : DroneAct::west;
    moved(a, nx, ny);
    emit(std::string("wind ") + act_name(a) + " at " + std::to_string(w.x) + "," +
             std::to_string(w.y),
         {"Time@T", "Dr(Id," + std::to_string(w.x) + "," + std::to_string(w.y) + ",E)@Td"}, {},
         {"Time@T", "Dr(Id," + std::to_string(nx) + "," + std::to_string(ny) + ",E)" + at("T", 1)});
  }

  std::vector<std::string> init{"Time@0"};
  for (std::size_t i = 0; i < np; ++i) init.push_back(pfact(i) + "@0");
  for (const auto& d : ds) init.push_back(dfact(d, p.base_x, p.base_y, p.e_max) + "@0");
  if (p.station) init.push_back("St(empty)@0");
  o << "init: " << csv(init) << "\n";

  o << "critical \"empty battery\": { Dr(Id,X,Y,0)@T }\n";
  for (std::size_t i = 0; i < np; ++i)
    o << "critical \"stale " << ps[i] << "\": { " << pfact(i) << "@T1, Time@T | T > T1 + " << p.M
      << " }\n";
  if (p.station)
    for (const auto& d : ds)
      o << "critical \"" << d << " docked too long\": { St(" << d << ")@Ts, Time@T | T > Ts + "
        << p.station_limit << " }\n";
  return o.str();
}

std::string gen_3sat(const Cnf3& f) {
  const unsigned p = f.vars;
  const std::size_t n = f.clauses.size();
  if (n == 0) throw InputError("formula has no clauses");
  for (const auto& c : f.clauses)
    for (const auto& l : c)
      if (l.var < 1 || l.var > p)
        throw InputError("literal refers to variable " + std::to_string(l.var) + " of " +
                         std::to_string(p));

  auto lit = [](const Literal& l) { return (l.positive ? "x" : "~x") + std::to_string(l.var); };
  std::ostringstream o;
  o << "timed-msr 1\n# ";
  for (std::size_t j = 0; j < n; ++j) {
    o << (j ? " & " : "") << "(";
    for (int q = 0; q < 3; ++q) o << (q ? " | " : "") << lit(f.clauses[j][q]);
    o << ")";
  }
  o << "\n";
  o << "pred Start\n";
  for (unsigned i = 1; i <= p; ++i) o << "pred V" << i << "\npred A" << i << "\npred B" << i << "\n";
  // I0 is the whole formula, Ij the formula with the first j clauses discharged.
  for (std::size_t j = 0; j <= n; ++j) o << "pred I" << j << "\n";
  o << "param ticks = " << n << "\n";

  for (unsigned i = 1; i <= p; ++i) {
    o << "rule \"assign x" << i << " true\": Time@T, V" << i << "@T1 | T >= T1 -> Time@T, A" << i
      << "@(T+1)\n";
    o << "rule \"assign x" << i << " false\": Time@T, V" << i << "@T1 | T >= T1 -> Time@T, B" << i
      << "@(T+1)\n";
  }
  for (std::size_t j = 0; j < n; ++j)
    for (int q = 0; q < 3; ++q) {
      const Literal& l = f.clauses[j][q];
      std::string v = (l.positive ? "A" : "B") + std::to_string(l.var);
      o << "rule \"clause " << j + 1 << " by " << lit(l) << " (" << q + 1 << ")\": Time@T, " << v
        << "@T1, I" << j << "@T2 | T >= T1, T >= T2 -> Time@T, " << v << "@T1, I" << j + 1
        << "@(T+1)\n";
    }

  o << "init: Time@0";
  for (unsigned i = 1; i <= p; ++i) o << ", V" << i << "@0";
  o << ", I0@0, Start@0\n";

  // Under lazy sampling clause j is discharged at time j, so I(j-1) is still
  // present right after the j-th tick. A run stuck on clause j+1 is caught
  // at time j+2. The last clause would only be caught after the n-th tick,
  // so its pair also matches the facts falsifying it.
  for (std::size_t j = 0; j + 1 < n; ++j)
    o << "critical \"stuck at clause " << j + 1 << "\": { Start@T1, Time@T, I" << j
      << "@T2 | T > T1 + " << j + 1 << " }\n";
  {
    std::set<std::string> fals;
    for (const auto& l : f.clauses[n - 1])
      fals.insert((l.positive ? "B" : "A") + std::to_string(l.var));
    o << "critical \"clause " << n << " falsified\": { Start@T1, Time@T, I" << n - 1 << "@T2";
    unsigned t = 3;
    for (const auto& s : fals) o << ", " << s << "@T" << t++;
    o << " | T > T1 + " << n - 1 << " }\n";
  }
  return o.str();
}

std::string gen_tm(const TmSpec& t) {
  auto known = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  if (t.space < 1) throw InputError("space bound must be at least 1");
  if (!known(t.states, t.initial)) throw InputError("unknown initial state '" + t.initial + "'");
  if (!known(t.symbols, t.blank)) throw InputError("blank symbol is not in the alphabet");
  for (const auto& q : t.final_states)
    if (!known(t.states, q)) throw InputError("unknown final state '" + q + "'");
  if (t.input.size() > t.space) throw InputError("input longer than the space bound");
  for (const auto& s : t.input)
    if (!known(t.symbols, s)) throw InputError("unknown input symbol '" + s + "'");
  for (const auto& in : t.instructions) {
    if (!known(t.states, in.state) || !known(t.states, in.next))
      throw InputError("instruction uses an unknown state");
    if (!known(t.symbols, in.read) || !known(t.symbols, in.write))
      throw InputError("instruction uses an unknown symbol");
    if (in.move != 'L' && in.move != 'R' && in.move != 'S')
      throw InputError(std::string("unknown move '") + in.move + "'");
  }

  const unsigned last = t.space + 1;
  std::ostringstream o;
  o << "timed-msr 1\n";
  o << "sort State Sym Ins\n";
  o << "const";
  for (const auto& q : t.states) o << " q_" << q;
  o << " : State\nconst";
  for (const auto& s : t.symbols) o << " s_" << s;
  o << " : Sym\n";
  if (!t.instructions.empty()) {
    o << "const";
    for (std::size_t g = 0; g < t.instructions.size(); ++g) o << " g" << g + 1;
    o << " : Ins\n";
  }
  o << "var C : Nat\n";
  o << "pred S : Nat State\npred R : Nat Sym\n";
  o << "pred F : Nat Ins\npred G : Nat Ins\npred H : Nat Ins\n";

  // Each instruction step spans five rules, one time unit each.
  for (std::size_t g = 0; g < t.instructions.size(); ++g) {
    const auto& in = t.instructions[g];
    const std::string gi = "g" + std::to_string(g + 1);
    const std::string q = "q_" + in.state, q2 = "q_" + in.next;
    const std::string xi = "s_" + in.read, eta = "s_" + in.write;
    for (unsigned i = 0; i <= last; ++i) {
      unsigned j = i;
      if (in.move == 'L' && i > 0) --j;
      if (in.move == 'R' && i < last) ++j;
      const std::string c = std::to_string(i);
      const std::string tag = gi + " cell " + c;
      auto F = [&](const char* p) { return std::string(p) + "(" + c + "," + gi + ")"; };
      const std::string Rxi = "R(" + c + "," + xi + ")", Reta = "R(" + c + "," + eta + ")";
      o << "rule \"" << tag << " a\": Time@T, S(" << c << "," << q << ")@T1, " << Rxi
        << "@T2 -> Time@T, " << F("F") << "@(T+1), " << Rxi << "@(T+1)\n";
      o << "rule \"" << tag << " b\": Time@T, " << F("F") << "@T1, " << Rxi << "@T2 -> Time@T, "
        << F("F") << "@(T+1), " << F("H") << "@(T+1)\n";
      o << "rule \"" << tag << " c\": Time@T, " << F("F") << "@T1, " << F("H") << "@T2 -> Time@T, "
        << F("G") << "@(T+1), " << F("H") << "@(T+1)\n";
      o << "rule \"" << tag << " d\": Time@T, " << F("G") << "@T1, " << F("H") << "@T2 -> Time@T, "
        << F("G") << "@(T+1), " << Reta << "@(T+1)\n";
      o << "rule \"" << tag << " e\": Time@T, " << F("G") << "@T1, " << Reta << "@T2 -> Time@T, S("
        << j << "," << q2 << ")@(T+1), " << Reta << "@(T+1)\n";
    }
  }

  o << "init: Time@0, S(1," << "q_" << t.initial << ")@0";
  for (unsigned i = 0; i <= last; ++i) {
    std::string s = t.blank;
    if (i >= 1 && i <= t.input.size()) s = t.input[i - 1];
    o << ", R(" << i << ",s_" << s << ")@0";
  }
  o << "\n";
  for (const auto& q : t.final_states) o << "critical \"reached " << q << "\": { S(C,q_" << q << ")@T }\n";
  return o.str();
}

}  // namespace tmsr

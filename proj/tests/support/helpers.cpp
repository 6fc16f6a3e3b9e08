#include "helpers.hpp"

#include <stdexcept>

namespace th {

using namespace tmsr;

Configuration config(const Signature& sig, const std::string& text) {
  std::vector<TimedFact> out;
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    auto at = cur.rfind('@');
    if (at == std::string::npos) throw std::invalid_argument("missing @ in " + cur);
    out.push_back({parse_ground_fact(sig, cur.substr(0, at)), std::stoull(cur.substr(at + 1))});
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      flush();
      continue;
    }
    if (ch != ' ') cur += ch;
  }
  if (!cur.empty()) flush();
  return Configuration(std::move(out));
}

std::size_t rule_index(const System& sys, const std::string& name) {
  for (std::size_t i = 0; i < sys.rules().size(); ++i)
    if (sys.rules()[i].name == name) return i;
  throw std::invalid_argument("no rule " + name);
}

std::string drone_macros(const std::string& extra) {
  return R"(timed-msr 1
sort Drone Pnt
const d1 d2 : Drone
const p1 p2 : Pnt
var Id : Drone
var A B : Pnt
var X Y E X1 Y1 X2 Y2 : Nat
pred Dr : Drone Nat Nat Nat
pred P : Pnt Nat Nat
rule "north": Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,X,Y,s(E))@T -> Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,X,s(Y),E)@(T+1)
rule "south": Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,X,s(Y),s(E))@T -> Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,X,Y,E)@(T+1)
rule "east": Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,X,Y,s(E))@T -> Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,s(X),Y,E)@(T+1)
rule "west": Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,s(X),Y,s(E))@T -> Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,X,Y,E)@(T+1)
rule "charge": Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,1,1,E)@T -> Time@T, P(A,X1,Y1)@T1, P(B,X2,Y2)@T2, Dr(Id,1,1,s(E))@(T+1)
rule "click": Time@T, P(A,X1,Y1)@T1, P(B,X,Y)@T2, Dr(Id,X,Y,s(E))@T -> Time@T, P(A,X1,Y1)@T1, P(B,X,Y)@T, Dr(Id,X,Y,E)@(T+1)
rule "wind north": Time@T, Dr(Id,0,1,E)@T -> Time@T, Dr(Id,0,2,E)@(T+1)
init: Time@0, P(p1,0,0)@0, P(p2,2,2)@0, Dr(d1,1,1,5)@0
)" + extra;
}

}  // namespace th

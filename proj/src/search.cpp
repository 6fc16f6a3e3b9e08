#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "tmsr/error.hpp"
#include "tmsr/verify.hpp"

namespace tmsr {

SearchDiagnostics& diagnostics() {
  static SearchDiagnostics d;
  return d;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::fails: return "fails";
    case Outcome::unknown: return "unknown";
  }
  return "unknown";
}

std::size_t Trace::ticks() const {
  return static_cast<std::size_t>(std::count_if(
      steps.begin(), steps.end(), [](const TraceStep& s) { return s.rule == kTickRule; }));
}

Trace concretize(const System& sys, const Configuration& init, const std::vector<Edge>& edges) {
  Trace t{init, {}};
  Configuration cur = init;
  for (const auto& e : edges) {
    if (e.rule == kTickRule) {
      cur = tick(cur);
      t.steps.push_back({"tick", kTickRule, sys.empty_subst(), cur});
      continue;
    }
    const Rule& r = sys.rules().at(e.rule);
    auto m = match_at(sys, r, cur, e.positions);
    if (!m) throw Error("internal: recorded step '" + r.name + "' does not replay");
    cur = apply_match(sys, r, cur, *m);
    t.steps.push_back({r.name, e.rule, std::move(m->sigma), cur});
  }
  return t;
}

namespace {

using Clock = std::chrono::steady_clock;

void require_pts(const System& sys) {
  auto rep = check_progressive(sys);
  if (rep.ok) return;
  for (const auto& r : rep.rules)
    if (!r.ok)
      throw InputError("not a progressive timed system: rule '" + r.name + "' " + r.reason);
}

struct Node {
  Configuration state;
  std::int64_t parent = -1;
  Edge edge;
  std::uint32_t depth = 0;
  std::uint32_t since_tick = 0;
  std::uint64_t ticks = 0;
};

class Store {
 public:
  // Returns the id and whether the state was new.
  std::pair<std::size_t, bool> insert(Node n) {
    auto [it, fresh] = index_.try_emplace(n.state, nodes_.size());
    if (!fresh) return {it->second, false};
    nodes_.push_back(std::move(n));
    return {nodes_.size() - 1, true};
  }
  const Node& operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }

  std::vector<Edge> path(std::size_t id, std::int64_t stop = -1) const {
    std::vector<Edge> out;
    for (auto i = static_cast<std::int64_t>(id); i != stop && nodes_[i].parent >= 0;
         i = nodes_[i].parent)
      out.push_back(nodes_[i].edge);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<Node> nodes_;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> index_;
};

struct Succ {
  Edge edge;
  Configuration next;
  bool critical = false;
};

std::vector<Succ> successors(const System& sys, const CriticalSpec& cs, const Configuration& c,
                             bool allow_tick, std::optional<Timestamp> dmax) {
  std::vector<Succ> out;
  for (auto& e : enabled(sys, c)) {
    Configuration n = apply_match(sys, sys.rules()[e.rule], c, e.match);
    out.push_back({Edge{e.rule, std::move(e.match.positions)}, std::move(n)});
  }
  if (out.empty() && allow_tick) out.push_back({Edge{}, tick(c)});
  for (auto& s : out) {
    if (dmax) s.next = normalize(s.next, *dmax);
    s.critical = is_critical(sys, cs, s.next).has_value();
  }
  return out;
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
  if (workers <= 1 || n < 32) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard lk(mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> ts;
  for (unsigned w = 1; w < workers; ++w) ts.emplace_back(work);
  work();
  for (auto& t : ts) t.join();
  if (err) std::rethrow_exception(err);
}

class Run {
 public:
  Run(const System& sys, const Configuration& init, const CriticalSpec& cs,
      const SearchBudget& budget)
      : sys_(sys), init_(init), cs_(cs), budget_(budget), start_(Clock::now()) {
    m_ = init.size();
    stats_.m = m_;
    stats_.k = sys.declared_k();
    stats_.dmax = effective_dmax(sys, init, cs);
    stats_.l_sigma_decimal = count_bound(m_, stats_.k, stats_.dmax, sys.sig().predicate_symbols(),
                                         sys.sig().term_symbols())
                                 .str();
  }

  bool exhausted(std::size_t states) const {
    if (budget_.max_states && states > budget_.max_states) return true;
    if (budget_.timeout_seconds > 0) {
      std::chrono::duration<double> d = Clock::now() - start_;
      if (d.count() > budget_.timeout_seconds) return true;
    }
    return false;
  }

  // Records the per-tick step bound for an edge leaving a node with
  // `since` instantaneous steps since the last tick.
  std::uint32_t edge(const Edge& e, std::uint32_t since) const {
    auto& d = diagnostics();
    ++d.edges_checked;
    if (e.rule == kTickRule) return 0;
    std::uint32_t s = since + 1;
    auto prev = d.max_steps_between_ticks.load();
    while (s > prev && !d.max_steps_between_ticks.compare_exchange_weak(prev, s)) {
    }
    if (s >= m_) ++d.step_bound_violations;
    return s;
  }

  void depth(std::uint64_t depth, std::uint64_t n) const {
    auto& d = diagnostics();
    ++d.depth_checked;
    if (depth > (n + 2) * m_ + n) ++d.depth_bound_violations;
  }

  Verdict finish(Verdict v, std::uint64_t states) {
    stats_.states += states;
    stats_.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    v.stats = stats_;
    return v;
  }

  void add_states(std::uint64_t s) { stats_.states += s; }
  void peak(std::uint64_t p) { stats_.peak_frontier = std::max(stats_.peak_frontier, p); }

  std::optional<Verdict> critical_init() {
    auto hit = is_critical(sys_, cs_, init_);
    if (!hit) return std::nullopt;
    Verdict v;
    v.outcome = Outcome::fails;
    v.counterexample = Trace{init_, {}};
    v.critical_pair = hit->pair;
    v.note = "initial configuration is critical";
    return finish(std::move(v), 1);
  }

  Trace counterexample(const std::vector<Edge>& edges, Verdict& v) const {
    Trace t = concretize(sys_, init_, edges);
    if (auto hit = is_critical(sys_, cs_, t.last())) v.critical_pair = hit->pair;
    return t;
  }

  const System& sys_;
  const Configuration& init_;
  const CriticalSpec& cs_;
  SearchBudget budget_;
  Clock::time_point start_;
  std::size_t m_ = 0;
  Statistics stats_;
};

void certify(const System& sys, const CriticalSpec& cs, Verdict& v,
             std::optional<std::uint64_t> ticks) {
  auto& d = diagnostics();
  auto record = [&](const Validation& r, const char* what) {
    ++d.traces_certified;
    if (r.ok) return;
    ++d.certification_failures;
    v.note += std::string(v.note.empty() ? "" : "; ") + what + " failed validation: " + r.diagnostic;
  };
  if (v.witness) record(validate_trace(sys, cs, *v.witness, ticks), "witness");
  if (v.lasso) record(validate_lasso(sys, cs, *v.lasso, v.stats.dmax), "lasso");
  if (v.counterexample)
    record(validate_trace(sys, cs, *v.counterexample, std::nullopt, TraceKind::counterexample),
           "counterexample");
}

Verdict bounded_realizability_impl(Run& run, std::uint64_t n) {
  if (auto v = run.critical_init()) return *v;
  const System& sys = run.sys_;
  Store store;
  store.insert(Node{run.init_, -1, {}, 0, 0, 0});
  struct Frame {
    std::size_t id;
    std::vector<Succ> succs;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({0, successors(sys, run.cs_, run.init_, true, std::nullopt)});
  while (!stack.empty()) {
    run.peak(stack.size());
    Frame& f = stack.back();
    if (f.next == f.succs.size()) {
      stack.pop_back();
      continue;
    }
    Succ& s = f.succs[f.next++];
    const Node& parent = store[f.id];
    Node child;
    child.parent = static_cast<std::int64_t>(f.id);
    child.depth = parent.depth + 1;
    child.since_tick = run.edge(s.edge, parent.since_tick);
    child.ticks = parent.ticks + (s.edge.rule == kTickRule);
    child.edge = std::move(s.edge);
    child.state = std::move(s.next);
    run.depth(child.depth, n);
    bool crit = s.critical;
    std::uint64_t ticks = child.ticks;
    auto [id, fresh] = store.insert(std::move(child));
    if (!fresh || crit) continue;
    if (ticks == n) {
      Verdict v;
      v.outcome = Outcome::holds;
      v.witness = concretize(sys, run.init_, store.path(id));
      return run.finish(std::move(v), store.size());
    }
    if (run.exhausted(store.size())) {
      Verdict v;
      v.note = "search budget exhausted";
      return run.finish(std::move(v), store.size());
    }
    auto succs = successors(sys, run.cs_, store[id].state, true, std::nullopt);
    stack.push_back({id, std::move(succs)});
  }
  Verdict v;
  v.outcome = Outcome::fails;
  v.note = "no compliant trace reaches " + std::to_string(n) + " ticks";
  return run.finish(std::move(v), store.size());
}

void check_n(std::uint64_t n) {
  if (n == 0) throw InputError("tick bound must be at least 1");
}

// Breadth-first search for a reachable critical configuration. Concrete
// states when dmax is empty; delta states otherwise. Returns a verdict when
// the search ends early (critical found or budget), nothing when the whole
// space is clean.
std::optional<Verdict> find_critical(Run& run, std::optional<std::uint64_t> n,
                                     std::optional<Timestamp> dmax) {
  const System& sys = run.sys_;
  Store store;
  Configuration root = dmax ? normalize(run.init_, *dmax) : run.init_;
  store.insert(Node{root, -1, {}, 0, 0, 0});
  std::vector<std::size_t> frontier{0};
  unsigned workers = std::max(1u, run.budget_.workers);
  while (!frontier.empty()) {
    run.peak(frontier.size());
    std::vector<std::vector<Succ>> out(frontier.size());
    parallel_for(frontier.size(), workers, [&](std::size_t i) {
      const Node& nd = store[frontier[i]];
      bool allow_tick = !n || nd.ticks < *n;
      out[i] = successors(sys, run.cs_, nd.state, allow_tick, dmax);
    });
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (auto& s : out[i]) {
        const Node& parent = store[frontier[i]];
        Node child;
        child.parent = static_cast<std::int64_t>(frontier[i]);
        child.depth = parent.depth + 1;
        child.since_tick = run.edge(s.edge, parent.since_tick);
        child.ticks = parent.ticks + (s.edge.rule == kTickRule);
        child.edge = std::move(s.edge);
        child.state = std::move(s.next);
        if (n) run.depth(child.depth, *n);
        auto [id, fresh] = store.insert(std::move(child));
        if (!fresh) continue;
        if (s.critical) {
          Verdict v;
          v.outcome = Outcome::fails;
          v.counterexample = run.counterexample(store.path(id), v);
          return run.finish(std::move(v), store.size());
        }
        next.push_back(id);
      }
    }
    if (run.exhausted(store.size())) {
      Verdict v;
      v.note = "search budget exhausted";
      return run.finish(std::move(v), store.size());
    }
    frontier = std::move(next);
  }
  run.add_states(store.size());
  return std::nullopt;
}

Verdict realizability_impl(Run& run) {
  if (auto v = run.critical_init()) return *v;
  const System& sys = run.sys_;
  Timestamp dmax = run.stats_.dmax;
  Store store;
  enum : char { gray = 1, black = 2 };
  std::vector<char> color;
  store.insert(Node{normalize(run.init_, dmax), -1, {}, 0, 0, 0});
  color.push_back(gray);
  struct Frame {
    std::size_t id;
    std::vector<Succ> succs;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({0, successors(sys, run.cs_, store[0].state, true, dmax)});
  while (!stack.empty()) {
    run.peak(stack.size());
    Frame& f = stack.back();
    if (f.next == f.succs.size()) {
      color[f.id] = black;
      stack.pop_back();
      continue;
    }
    Succ& s = f.succs[f.next++];
    const Node& parent = store[f.id];
    std::uint32_t since = run.edge(s.edge, parent.since_tick);
    Node child;
    child.parent = static_cast<std::int64_t>(f.id);
    child.depth = parent.depth + 1;
    child.since_tick = since;
    child.ticks = parent.ticks + (s.edge.rule == kTickRule);
    child.edge = s.edge;
    child.state = std::move(s.next);
    bool crit = s.critical;
    auto [id, fresh] = store.insert(std::move(child));
    if (!fresh) {
      if (color[id] != gray) continue;
      // Back edge: the stack from id to f.id plus this edge is a cycle.
      std::vector<Edge> stem = store.path(id);
      std::vector<Edge> cyc = store.path(f.id, static_cast<std::int64_t>(id));
      cyc.push_back(s.edge);
      std::vector<Edge> all = stem;
      all.insert(all.end(), cyc.begin(), cyc.end());
      Trace t = concretize(sys, run.init_, all);
      Lasso l;
      l.stem.initial = t.initial;
      l.stem.steps.assign(t.steps.begin(), t.steps.begin() + static_cast<std::ptrdiff_t>(stem.size()));
      l.cycle.initial = l.stem.last();
      l.cycle.steps.assign(t.steps.begin() + static_cast<std::ptrdiff_t>(stem.size()), t.steps.end());
      Verdict v;
      v.outcome = Outcome::holds;
      v.lasso = std::move(l);
      return run.finish(std::move(v), store.size());
    }
    color.push_back(crit ? black : gray);
    if (crit) continue;
    if (run.exhausted(store.size())) {
      Verdict v;
      v.note = "search budget exhausted";
      return run.finish(std::move(v), store.size());
    }
    auto succs = successors(sys, run.cs_, store[id].state, true, dmax);
    stack.push_back({id, std::move(succs)});
  }
  Verdict v;
  v.outcome = Outcome::fails;
  v.note = "every trace eventually reaches a critical configuration";
  return run.finish(std::move(v), store.size());
}

}  // namespace

Verdict bounded_realizability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                              std::uint64_t n, const SearchBudget& budget) {
  require_pts(sys);
  check_n(n);
  Run run(sys, init, cs, budget);
  Verdict v = bounded_realizability_impl(run, n);
  certify(sys, cs, v, n);
  return v;
}

Verdict bounded_survivability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                              std::uint64_t n, const SearchBudget& budget) {
  require_pts(sys);
  check_n(n);
  Run run(sys, init, cs, budget);
  Verdict v;
  if (auto early = run.critical_init()) {
    v = *early;
  } else if (auto found = find_critical(run, n, std::nullopt)) {
    v = *found;
  } else {
    v = bounded_realizability_impl(run, n);
  }
  certify(sys, cs, v, v.witness ? std::optional<std::uint64_t>(n) : std::nullopt);
  return v;
}

Verdict realizability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                      const SearchBudget& budget) {
  require_pts(sys);
  Run run(sys, init, cs, budget);
  Verdict v = realizability_impl(run);
  certify(sys, cs, v, std::nullopt);
  return v;
}

Verdict survivability(const System& sys, const Configuration& init, const CriticalSpec& cs,
                      const SearchBudget& budget) {
  require_pts(sys);
  Run run(sys, init, cs, budget);
  Verdict v;
  if (auto early = run.critical_init()) {
    v = *early;
  } else if (auto found = find_critical(run, std::nullopt, run.stats_.dmax)) {
    v = *found;
  } else {
    v = realizability_impl(run);
  }
  certify(sys, cs, v, std::nullopt);
  return v;
}

}  // namespace tmsr

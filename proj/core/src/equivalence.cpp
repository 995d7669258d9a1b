#include "gkat/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace gkat {

std::string_view mode_name(Mode m) { return m == Mode::Trace ? "trace" : "bisim"; }

Mode parse_mode(std::string_view s) {
  if (s == "trace") return Mode::Trace;
  if (s == "bisim") return Mode::Bisim;
  throw InputError("unknown mode '" + std::string(s) + "' (expected trace or bisim)");
}

int condition_line(Condition c) {
  switch (c) {
    case Condition::LeftKnownDead: return 4;
    case Condition::RightKnownDead: return 6;
    case Condition::EpsMismatch: return 9;
    case Condition::LeftOnly: return 10;
    case Condition::RightOnly: return 11;
    case Condition::ActionMismatch: return 12;
  }
  return 0;
}

std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::LeftKnownDead: return "left state known dead, right state live";
    case Condition::RightKnownDead: return "right state known dead, left state live";
    case Condition::EpsMismatch: return "accepting guards differ";
    case Condition::LeftOnly: return "left moves to a live state where right rejects";
    case Condition::RightOnly: return "right moves to a live state where left rejects";
    case Condition::ActionMismatch: return "different actions on a shared atom, live successor";
  }
  return "?";
}

std::uint32_t UnionFind::index(std::uint64_t key) {
  auto [it, fresh] = ids_.emplace(key, static_cast<std::uint32_t>(parent_.size()));
  if (fresh) {
    parent_.push_back(it->second);
    rank_.push_back(0);
  }
  return it->second;
}

std::uint32_t UnionFind::find(std::uint64_t key) {
  std::uint32_t x = index(key);
  std::uint32_t root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const std::uint32_t next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

void UnionFind::unite(std::uint64_t a, std::uint64_t b) {
  std::uint32_t x = find(a), y = find(b);
  if (x == y) return;
  if (rank_[x] < rank_[y]) std::swap(x, y);
  parent_[y] = x;
  if (rank_[x] == rank_[y]) ++rank_[x];
}

CheckSession::CheckSession(SymbolicAutomaton& left, SymbolicAutomaton& right, SolverHandle& h, Mode mode,
                           std::size_t num_tests)
    : left_(left), right_(right), h_(h), mode_(mode), num_tests_(num_tests), queries_at_start_(h.queries()) {}

bool CheckSession::known_dead(int side, StateId s) const {
  return mode_ == Mode::Trace && dead_.count(key(side, s)) > 0;
}

bool CheckSession::is_dead(int i, StateId s) {
  if (mode_ == Mode::Bisim) return false;
  if (known_dead(i, s)) return true;
  ++dead_checks_;
  SymbolicAutomaton& a = side(i);
  std::vector<StateId> work{s};
  std::unordered_set<StateId> seen{s};
  while (!work.empty()) {
    const StateId x = work.back();
    work.pop_back();
    if (known_dead(i, x)) continue;
    closure_.insert(key(i, x));
    const StateEntries& e = a.entries(x);
    if (!h_.is_zero(eps_guard(e))) return false;
    for (const auto& d : e.delta)
      if (seen.insert(d.target).second) work.push_back(d.target);
  }
  for (StateId x : seen) dead_.insert(key(i, x));
  return true;
}

Stats CheckSession::stats() const {
  Stats st;
  st.states = left_.materialized() + right_.materialized();
  st.solver_queries = h_.queries() - queries_at_start_;
  st.dead_checks = dead_checks_;
  st.pairs = pairs_;
  st.closure_states = closure_.size();
  return st;
}

std::vector<std::pair<BExp, ActionId>> CheckSession::path_to_accept(int i, StateId s, BExp& final_eps) {
  SymbolicAutomaton& a = side(i);
  struct Back {
    StateId from;
    BExp guard;
    ActionId action;
  };
  std::unordered_map<StateId, std::optional<Back>> back;
  back[s] = std::nullopt;
  std::deque<StateId> work{s};
  while (!work.empty()) {
    const StateId x = work.front();
    work.pop_front();
    closure_.insert(key(i, x));
    const StateEntries& e = a.entries(x);
    const BExp acc = eps_guard(e);
    if (!h_.is_zero(acc)) {
      final_eps = acc;
      std::vector<std::pair<BExp, ActionId>> path;
      for (StateId y = x; back[y]; y = back[y]->from) path.emplace_back(back[y]->guard, back[y]->action);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& d : e.delta) {
      if (back.count(d.target)) continue;
      back[d.target] = Back{x, d.guard, d.action};
      work.push_back(d.target);
    }
  }
  throw InternalError("witness extension: live state has no path to acceptance");
}

Verdict CheckSession::fail(int fi, Condition c, BExp at, std::optional<ActionId> step_action, int live_side,
                           std::optional<StateId> live_state) {
  Witness w;
  w.condition = c;
  std::vector<int> chain;
  for (int f = fi; frames_[f].parent >= 0; f = frames_[f].parent) chain.push_back(f);
  std::reverse(chain.begin(), chain.end());
  auto model = [&](BExp g) {
    auto m = h_.least_model(g, num_tests_);
    if (!m) throw InternalError("witness: step guard is unsatisfiable");
    return *m;
  };
  for (int f : chain) {
    w.atoms.push_back(model(frames_[f].guard));
    w.actions.push_back(frames_[f].action);
  }
  w.prefix_length = chain.size();
  if (c == Condition::EpsMismatch) {
    const Atom a = model(at);
    w.atoms.push_back(a);
    w.accepted_by = eval(eps_guard(left_.entries(frames_[fi].s)), a) ? 0 : 1;
  } else {
    if (c != Condition::LeftKnownDead && c != Condition::RightKnownDead) {
      w.atoms.push_back(model(at));
      w.actions.push_back(*step_action);
    }
    if (mode_ == Mode::Trace && live_state) {
      BExp final_eps;
      for (const auto& [g, p] : path_to_accept(live_side, *live_state, final_eps)) {
        w.atoms.push_back(model(g));
        w.actions.push_back(p);
      }
      w.atoms.push_back(model(final_eps));
      w.accepted_by = live_side;
    }
  }
  Verdict v;
  v.equivalent = false;
  v.witness = std::move(w);
  v.stats = stats();
  return v;
}

Verdict CheckSession::run() {
  if (!frames_.empty()) throw InternalError("CheckSession::run called twice; sessions are single-use");
  frames_.push_back({left_.start(), right_.start(), -1, BExp::one(), 0});
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int fi = stack.back();
    stack.pop_back();
    const Frame f = frames_[fi];
    const std::uint64_t ks = key(0, f.s), ku = key(1, f.u);
    if (uf_.find(ks) == uf_.find(ku)) continue;
    uf_.unite(ks, ku);
    ++pairs_;
    if (known_dead(0, f.s)) {
      if (!is_dead(1, f.u)) return fail(fi, Condition::LeftKnownDead, BExp::one(), std::nullopt, 1, f.u);
      continue;
    }
    if (known_dead(1, f.u)) {
      if (!is_dead(0, f.s)) return fail(fi, Condition::RightKnownDead, BExp::one(), std::nullopt, 0, f.s);
      continue;
    }
    // Copies: later materialization may touch the automata's storage.
    const StateEntries es = left_.entries(f.s);
    const StateEntries eu = right_.entries(f.u);

    const BExp xs = eps_guard(es), xu = eps_guard(eu);
    if (!h_.equiv(xs, xu))
      return fail(fi, Condition::EpsMismatch, disj(conj(xs, neg(xu)), conj(neg(xs), xu)), std::nullopt, -1,
                  std::nullopt);

    std::vector<BExp> s_guards, u_guards;
    for (const auto& ds : es.delta) s_guards.push_back(ds.guard);
    for (const auto& du : eu.delta) u_guards.push_back(du.guard);
    const GuardIndex s_index(std::move(s_guards)), u_index(std::move(u_guards));

    const BExp rho_u = rho(eu);
    for (std::size_t i : s_index.overlapping(h_, rho_u)) {
      const auto& d = es.delta[i];
      if (!is_dead(0, d.target)) return fail(fi, Condition::LeftOnly, conj(d.guard, rho_u), d.action, 0, d.target);
    }
    const BExp rho_s = rho(es);
    for (std::size_t j : u_index.overlapping(h_, rho_s)) {
      const auto& d = eu.delta[j];
      if (!is_dead(1, d.target)) return fail(fi, Condition::RightOnly, conj(d.guard, rho_s), d.action, 1, d.target);
    }

    std::vector<Frame> children;
    for (const auto& ds : es.delta) {
      for (std::size_t j : u_index.overlapping(h_, ds.guard)) {
        const auto& du = eu.delta[j];
        const BExp g = conj(ds.guard, du.guard);
        if (ds.action != du.action) {
          if (!is_dead(0, ds.target)) return fail(fi, Condition::ActionMismatch, g, ds.action, 0, ds.target);
          if (!is_dead(1, du.target)) return fail(fi, Condition::ActionMismatch, g, du.action, 1, du.target);
        } else {
          children.push_back({ds.target, du.target, fi, g, ds.action});
        }
      }
    }
    // Accepting guards of every successor pair are compared before any of
    // them is expanded, so a terminating discrepancy is found one step early.
    const std::size_t first_child = frames_.size();
    for (const Frame& c : children) frames_.push_back(c);
    for (std::size_t k = 0; k < children.size(); ++k) {
      const Frame& c = children[k];
      if (uf_.find(key(0, c.s)) == uf_.find(key(1, c.u))) continue;
      const BExp cs = eps_guard(left_.entries(c.s)), cu = eps_guard(right_.entries(c.u));
      if (!h_.equiv(cs, cu))
        return fail(static_cast<int>(first_child + k), Condition::EpsMismatch,
                    disj(conj(cs, neg(cu)), conj(neg(cs), cu)), std::nullopt, -1, std::nullopt);
    }
    for (std::size_t k = children.size(); k-- > 0;) stack.push_back(static_cast<int>(first_child + k));
  }
  Verdict v;
  v.stats = stats();
  return v;
}

Verdict equiv_symbolic(SymbolicAutomaton& left, SymbolicAutomaton& right, SolverHandle& h, Mode mode,
                       std::size_t num_tests) {
  CheckSession session(left, right, h, mode, num_tests);
  return session.run();
}

namespace {

class ConcreteSession {
 public:
  ConcreteSession(const ConcreteAutomaton& l, const ConcreteAutomaton& r, Mode mode)
      : l_(l), r_(r), mode_(mode), atoms_(enumerate_atoms(l.num_tests())) {
    if (l.num_tests() != r.num_tests()) throw InternalError("equiv_concrete: automata over different test sets");
  }

  Verdict run() {
    frames_.push_back({l_.start(), r_.start(), -1, 0, 0, 0, false});
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int fi = stack.back();
      if (!frames_[fi].started) {
        frames_[fi].started = true;
        const StateId s = frames_[fi].s, u = frames_[fi].u;
        const std::uint64_t ks = key(0, s), ku = key(1, u);
        touched_.insert(ks);
        touched_.insert(ku);
        if (uf_.find(ks) == uf_.find(ku)) {
          stack.pop_back();
          continue;
        }
        uf_.unite(ks, ku);
        ++pairs_;
        if (known_dead(0, s)) {
          if (!is_dead(1, u)) return fail(fi, Condition::LeftKnownDead, std::nullopt, std::nullopt, 1, u);
          stack.pop_back();
          continue;
        }
        if (known_dead(1, u)) {
          if (!is_dead(0, s)) return fail(fi, Condition::RightKnownDead, std::nullopt, std::nullopt, 0, s);
          stack.pop_back();
          continue;
        }
      }
      Frame& f = frames_[fi];
      if (f.next == atoms_.size()) {
        stack.pop_back();
        continue;
      }
      const std::uint64_t ai = f.next++;
      const Atom& a = atoms_[ai];
      const ConcreteStep ss = l_.at(f.s, a), su = r_.at(f.u, a);
      const StateId s = f.s, u = f.u;
      if ((ss.kind == Outcome::Accept) != (su.kind == Outcome::Accept)) {
        return fail(fi, Condition::EpsMismatch, ai, std::nullopt, ss.kind == Outcome::Accept ? 0 : 1, std::nullopt);
      }
      if (ss.kind == Outcome::Step && su.kind == Outcome::Reject) {
        if (!is_dead(0, ss.target)) return fail(fi, Condition::LeftOnly, ai, ss.action, 0, ss.target);
      }
      if (su.kind == Outcome::Step && ss.kind == Outcome::Reject) {
        if (!is_dead(1, su.target)) return fail(fi, Condition::RightOnly, ai, su.action, 1, su.target);
      }
      if (ss.kind == Outcome::Step && su.kind == Outcome::Step) {
        if (ss.action != su.action) {
          if (!is_dead(0, ss.target)) return fail(fi, Condition::ActionMismatch, ai, ss.action, 0, ss.target);
          if (!is_dead(1, su.target)) return fail(fi, Condition::ActionMismatch, ai, su.action, 1, su.target);
        } else {
          frames_.push_back({ss.target, su.target, fi, ai, ss.action, 0, false});
          stack.push_back(static_cast<int>(frames_.size() - 1));
        }
      }
      (void)s;
      (void)u;
    }
    Verdict v;
    v.stats = stats();
    return v;
  }

 private:
  struct Frame {
    StateId s, u;
    int parent;
    std::uint64_t atom;
    ActionId action;
    std::size_t next;
    bool started;
  };

  static std::uint64_t key(int side, StateId s) { return (std::uint64_t(side) << 32) | s; }
  const ConcreteAutomaton& aut(int i) const { return i == 0 ? l_ : r_; }

  bool accepting(int i, StateId s) const {
    for (const Atom& a : atoms_)
      if (aut(i).at(s, a).kind == Outcome::Accept) return true;
    return false;
  }

  bool known_dead(int i, StateId s) const { return mode_ == Mode::Trace && dead_.count(key(i, s)) > 0; }

  bool is_dead(int i, StateId s) {
    if (mode_ == Mode::Bisim) return false;
    if (known_dead(i, s)) return true;
    ++dead_checks_;
    std::vector<StateId> work{s};
    std::unordered_set<StateId> seen{s};
    while (!work.empty()) {
      const StateId x = work.back();
      work.pop_back();
      touched_.insert(key(i, x));
      if (known_dead(i, x)) continue;
      if (accepting(i, x)) return false;
      for (const Atom& a : atoms_) {
        const ConcreteStep& st = aut(i).at(x, a);
        if (st.kind == Outcome::Step && seen.insert(st.target).second) work.push_back(st.target);
      }
    }
    for (StateId x : seen) dead_.insert(key(i, x));
    return true;
  }

  Verdict fail(int fi, Condition c, std::optional<std::uint64_t> atom, std::optional<ActionId> action,
               int live_side, std::optional<StateId> live_state) {
    Witness w;
    w.condition = c;
    std::vector<int> chain;
    for (int f = fi; frames_[f].parent >= 0; f = frames_[f].parent) chain.push_back(f);
    std::reverse(chain.begin(), chain.end());
    for (int f : chain) {
      w.atoms.push_back(atoms_[frames_[f].atom]);
      w.actions.push_back(frames_[f].action);
    }
    w.prefix_length = chain.size();
    if (atom) {
      w.atoms.push_back(atoms_[*atom]);
      if (action) w.actions.push_back(*action);
    }
    if (c == Condition::EpsMismatch) {
      w.accepted_by = live_side;
    } else if (mode_ == Mode::Trace && live_state) {
      // BFS to an accepting atom.
      const ConcreteAutomaton& a = aut(live_side);
      std::unordered_map<StateId, std::pair<StateId, std::uint64_t>> back;
      std::deque<StateId> work{*live_state};
      back[*live_state] = {*live_state, ~std::uint64_t{0}};
      while (!work.empty()) {
        const StateId x = work.front();
        work.pop_front();
        std::optional<std::uint64_t> acc;
        for (std::uint64_t k = 0; k < atoms_.size() && !acc; ++k)
          if (a.at(x, atoms_[k]).kind == Outcome::Accept) acc = k;
        if (acc) {
          std::vector<std::uint64_t> steps;
          for (StateId y = x; y != *live_state || back[y].second != ~std::uint64_t{0};) {
            if (back[y].second == ~std::uint64_t{0}) break;
            steps.push_back(back[y].second);
            y = back[y].first;
          }
          std::reverse(steps.begin(), steps.end());
          StateId cur = *live_state;
          for (std::uint64_t k : steps) {
            const ConcreteStep& st = a.at(cur, atoms_[k]);
            w.atoms.push_back(atoms_[k]);
            w.actions.push_back(st.action);
            cur = st.target;
          }
          w.atoms.push_back(atoms_[*acc]);
          break;
        }
        for (std::uint64_t k = 0; k < atoms_.size(); ++k) {
          const ConcreteStep& st = a.at(x, atoms_[k]);
          if (st.kind != Outcome::Step || back.count(st.target)) continue;
          back[st.target] = {x, k};
          work.push_back(st.target);
        }
      }
      w.accepted_by = live_side;
    }
    Verdict v;
    v.equivalent = false;
    v.witness = std::move(w);
    v.stats = stats();
    return v;
  }

  Stats stats() const {
    Stats st;
    st.states = touched_.size();
    st.dead_checks = dead_checks_;
    st.pairs = pairs_;
    return st;
  }

  const ConcreteAutomaton& l_;
  const ConcreteAutomaton& r_;
  Mode mode_;
  std::vector<Atom> atoms_;
  UnionFind uf_;
  std::unordered_set<std::uint64_t> dead_;
  std::unordered_set<std::uint64_t> touched_;
  std::vector<Frame> frames_;
  std::uint64_t dead_checks_ = 0;
  std::size_t pairs_ = 0;
};

}  // namespace

Verdict equiv_concrete(const ConcreteAutomaton& left, const ConcreteAutomaton& right, Mode mode) {
  ConcreteSession s(left, right, mode);
  return s.run();
}

std::string format_witness(const Witness& w, const Registry* reg) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.atoms.size(); ++i) {
    if (i) os << " ; ";
    if (reg) {
      os << reg->show(w.atoms[i]);
    } else {
      for (TestId t = 0; t < w.atoms[i].size(); ++t) os << (t ? " " : "") << (w.atoms[i][t] ? "" : "!") << 't' << t;
    }
    if (i < w.actions.size()) {
      os << " | ";
      if (reg && w.actions[i] < reg->num_actions()) os << reg->action_name(w.actions[i]);
      else os << 'p' << w.actions[i];
    }
  }
  return os.str();
}

std::string serialize(const Verdict& v, const Registry* reg, bool with_witness, bool with_stats) {
  std::ostringstream os;
  if (v.equivalent) {
    os << "EQUIVALENT\n";
  } else {
    os << "INEQUIVALENT\n";
    if (v.witness) {
      os << "witness: " << format_witness(*v.witness, reg) << '\n';
      os << "condition: line " << condition_line(v.witness->condition) << " (" << condition_name(v.witness->condition)
         << ")\n";
      if (with_witness && v.witness->accepted_by >= 0)
        os << "trace-of: " << (v.witness->accepted_by == 0 ? "left" : "right") << '\n';
    }
  }
  if (with_stats)
    os << "states=" << v.stats.states << " solver_queries=" << v.stats.solver_queries
       << " dead_checks=" << v.stats.dead_checks << '\n';
  return os.str();
}

}  // namespace gkat

#include "gkat/automata.hpp"

#include <atomic>
#include <deque>
#include <ostream>

namespace gkat {

std::string to_string(const Continuation& c) {
  auto show_pi = [&] {
    std::string s = "{";
    for (std::size_t i = 0; i < c.pi.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(c.pi.values()[i]);
    }
    return s + "}";
  };
  switch (c.kind) {
    case ContKind::Acc: return "acc " + show_pi();
    case ContKind::Ret: return "ret";
    case ContKind::Brk: return "brk " + show_pi();
    case ContKind::Cont: return "cont " + show_pi();
    case ContKind::Jmp: return "jmp(" + std::to_string(c.label) + ", " + show_pi() + ")";
  }
  return "?";
}

StateId ExplicitSymbolicAutomaton::add_state(std::string name) {
  states_.emplace_back();
  names_.push_back(std::move(name));
  seen_.push_back(0);
  return static_cast<StateId>(states_.size() - 1);
}

const StateEntries& ExplicitSymbolicAutomaton::entries(StateId s) {
  if (!seen_.at(s)) {
    seen_[s] = 1;
    ++touched_;
  }
  return states_[s];
}

std::string ExplicitSymbolicAutomaton::describe(StateId s) const {
  return names_.at(s).empty() ? std::to_string(s) : names_[s];
}

BExp rho(const StateEntries& e) {
  BExp r = BExp::one();
  for (BExp g : e.eps) r = conj(r, neg(g));
  for (const auto& d : e.delta) r = conj(r, neg(d.guard));
  return r;
}

BExp eps_guard(const StateEntries& e) { return disj_all(e.eps); }

ConcreteStep concretize(const StateEntries& e, const Atom& atom) {
  std::optional<ConcreteStep> hit;
  auto take = [&](ConcreteStep s) {
    if (hit) throw InternalError("concretize: two entries match one atom (disjointedness violated)");
    hit = s;
  };
  for (BExp g : e.eps)
    if (eval(g, atom)) take({Outcome::Accept, 0, 0});
  for (const auto& d : e.delta)
    if (eval(d.guard, atom)) take({Outcome::Step, d.target, d.action});
  return hit.value_or(ConcreteStep{});
}

namespace {
std::atomic<std::uint64_t> g_enumerations{0};
}

std::vector<Atom> enumerate_atoms(std::size_t num_tests, std::size_t limit) {
  if (num_tests > limit)
    throw InputError("atom enumeration refused: " + std::to_string(num_tests) + " tests exceeds the limit of " +
                     std::to_string(limit));
  ++g_enumerations;
  const std::uint64_t n = std::uint64_t{1} << num_tests;
  std::vector<Atom> out;
  out.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    Atom a(num_tests);
    for (std::size_t t = 0; t < num_tests; ++t) a.set(static_cast<TestId>(t), (k >> (num_tests - 1 - t)) & 1u);
    out.push_back(std::move(a));
  }
  return out;
}

std::uint64_t atom_enumeration_count() { return g_enumerations.load(); }

StateId ConcreteAutomaton::add_state() {
  table_.emplace_back(std::size_t{1} << num_tests_);
  return static_cast<StateId>(table_.size() - 1);
}

ConcreteAutomaton concretize_all(SymbolicAutomaton& a, std::size_t num_tests, std::vector<StateId>* symbolic_ids) {
  const auto atoms = enumerate_atoms(num_tests);
  ConcreteAutomaton out(num_tests);
  std::unordered_map<StateId, StateId> ids;
  std::vector<StateId> order;
  auto intern = [&](StateId s) {
    auto [it, fresh] = ids.emplace(s, 0);
    if (fresh) {
      it->second = out.add_state();
      order.push_back(s);
    }
    return it->second;
  };
  out.set_start(intern(a.start()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId sym = order[i];
    const StateEntries& e = a.entries(sym);
    for (const Atom& atom : atoms) {
      ConcreteStep st = concretize(e, atom);
      if (st.kind == Outcome::Step) st.target = intern(st.target);
      out.set(static_cast<StateId>(i), atom, st);
    }
  }
  if (symbolic_ids) *symbolic_ids = order;
  return out;
}

std::optional<std::string> check_disjoint(const StateEntries& e, SolverHandle& h) {
  std::vector<BExp> guards(e.eps.begin(), e.eps.end());
  for (const auto& d : e.delta) guards.push_back(d.guard);
  const GuardIndex index(guards);
  for (std::size_t i = 0; i < guards.size(); ++i)
    for (std::size_t j : index.overlapping(h, guards[i]))
      if (j != i)
        return "entries " + std::to_string(std::min(i, j)) + " and " + std::to_string(std::max(i, j)) +
               " overlap: " + to_string(guards[std::min(i, j)]) + " / " + to_string(guards[std::max(i, j)]);
  return std::nullopt;
}

bool check_total_coverage(const StateEntries& e, SolverHandle& h) {
  BExp all = rho(e);
  for (BExp g : e.eps) all = disj(all, g);
  for (const auto& d : e.delta) all = disj(all, d.guard);
  return h.is_zero(neg(all));
}

bool check_no_blocked(const StateEntries& e, SolverHandle& h) {
  for (BExp g : e.eps)
    if (h.is_zero(g)) return false;
  for (const auto& d : e.delta)
    if (h.is_zero(d.guard)) return false;
  return true;
}

void dump(std::ostream& os, SymbolicAutomaton& a, const Registry* reg) {
  auto show = [&](BExp b) { return reg ? reg->show(b) : to_string(b); };
  auto act = [&](ActionId p) {
    return reg && p < reg->num_actions() ? reg->action_name(p) : "p" + std::to_string(p);
  };
  std::unordered_map<StateId, bool> seen;
  std::deque<StateId> work{a.start()};
  seen[a.start()] = true;
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    const StateEntries& e = a.entries(s);
    os << "state " << s << " | eps: ";
    for (std::size_t i = 0; i < e.eps.size(); ++i) os << (i ? "," : "") << show(e.eps[i]);
    os << " | delta:";
    for (const auto& d : e.delta) {
      os << " (" << show(d.guard) << ", " << act(d.action) << ", " << d.target << ")";
      if (!seen[d.target]) {
        seen[d.target] = true;
        work.push_back(d.target);
      }
    }
    os << '\n';
  }
}

}  // namespace gkat

#include "gkat/oracle.hpp"

#include <deque>
#include <map>
#include <unordered_map>

#include "gkat/equivalence.hpp"

namespace gkat::oracle {

namespace {

struct Node {
  enum Kind { Branch, Act, Assign, Nop, Accept, Reject } kind;
  BExp guard;
  std::uint32_t a = 0;  // then / next
  std::uint32_t b = 0;  // else
  ActionId action = 0;
  VarId var = 0;
  Value value = 0;
};

class Lowering {
 public:
  explicit Lowering(std::size_t num_labels) : labels_(num_labels, kUnset) {
    accept_ = add({Node::Accept, BExp::zero()});
    reject_ = add({Node::Reject, BExp::zero()});
  }

  std::uint32_t entry(Exp e) {
    const std::uint32_t start = lower(e, accept_, reject_, reject_);
    for (auto& n : nodes_) {
      if (n.kind == Node::Nop && n.a >= kGotoBase) {
        const std::uint32_t target = labels_.at(n.a - kGotoBase);
        if (target == kUnset) throw InputError("goto to a missing label");
        n.a = target;
      }
    }
    return start;
  }

  const Node& at(std::uint32_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  static constexpr std::uint32_t kUnset = ~0u;
  static constexpr std::uint32_t kGotoBase = 0x80000000u;

  std::uint32_t add(Node n) {
    nodes_.push_back(n);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t lower(Exp e, std::uint32_t next, std::uint32_t brk, std::uint32_t cnt) {
    using K = Exp::Kind;
    switch (e.kind()) {
      case K::Test:
        return add({Node::Branch, e.guard(), next, reject_});
      case K::Action:
        return add({Node::Act, BExp::zero(), next, 0, e.action_id()});
      case K::Assign:
        return add({Node::Assign, BExp::zero(), next, 0, 0, e.var(), e.value()});
      case K::Seq:
        return lower(e.lhs(), lower(e.rhs(), next, brk, cnt), brk, cnt);
      case K::Unfold: {
        const std::uint32_t f = lower(e.rhs(), next, brk, cnt);
        return lower(e.lhs(), f, next, f);
      }
      case K::If: {
        const std::uint32_t t = lower(e.lhs(), next, brk, cnt);
        const std::uint32_t f = lower(e.rhs(), next, brk, cnt);
        return add({Node::Branch, e.guard(), t, f});
      }
      case K::While: {
        const std::uint32_t head = add({Node::Branch, e.guard(), 0, next});
        const std::uint32_t body = lower(e.body(), head, next, head);
        nodes_[head].a = body;
        return head;
      }
      case K::Break:
        return add({Node::Nop, BExp::zero(), brk});
      case K::Continue:
        return add({Node::Nop, BExp::zero(), cnt});
      case K::Return:
        return accept_;
      case K::Goto:
        return add({Node::Nop, BExp::zero(), kGotoBase + e.label_id()});
      case K::Label: {
        const std::uint32_t n = add({Node::Nop, BExp::zero(), next});
        if (labels_.at(e.label_id()) != kUnset) throw InputError("duplicate label");
        labels_[e.label_id()] = n;
        return n;
      }
    }
    throw InternalError("lowering: unknown node");
  }

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> labels_;
  std::uint32_t accept_, reject_;
};

struct Config {
  std::uint32_t node;
  IndicatorState pi;
  bool operator<(const Config& o) const {
    return node != o.node ? node < o.node : pi.values() < o.pi.values();
  }
};

ConcreteAutomaton run(const Lowering& g, std::uint32_t entry, const IndicatorState& start, std::size_t num_tests) {
  const std::vector<Atom> atoms = enumerate_atoms(num_tests);
  ConcreteAutomaton out(num_tests);
  std::map<Config, StateId> ids;
  std::deque<Config> work;
  auto intern = [&](const Config& c) {
    auto [it, fresh] = ids.emplace(c, 0);
    if (fresh) {
      it->second = out.add_state();
      work.push_back(c);
    }
    return it->second;
  };
  out.set_start(intern({entry, start}));
  while (!work.empty()) {
    const Config c = work.front();
    work.pop_front();
    const StateId sid = ids.at(c);
    for (const Atom& atom : atoms) {
      std::map<Config, bool> seen;
      Config cur = c;
      ConcreteStep step;
      for (;;) {
        if (!seen.emplace(cur, true).second) {
          step = {Outcome::Reject};
          break;
        }
        const Node& n = g.at(cur.node);
        if (n.kind == Node::Accept) {
          step = {Outcome::Accept};
          break;
        }
        if (n.kind == Node::Reject) {
          step = {Outcome::Reject};
          break;
        }
        if (n.kind == Node::Act) {
          step = {Outcome::Step, intern({n.a, cur.pi}), n.action};
          break;
        }
        if (n.kind == Node::Branch) {
          cur.node = eval(resolve(n.guard, cur.pi), atom) ? n.a : n.b;
        } else if (n.kind == Node::Assign) {
          cur.pi = reassign(cur.pi, n.var, n.value);
          cur.node = n.a;
        } else {
          cur.node = n.a;
        }
      }
      out.set(sid, atom, step);
    }
  }
  return out;
}

}  // namespace

ConcreteAutomaton reference_automaton(const Program& p, const IndicatorState& start, std::size_t num_tests) {
  Lowering g(p.labels.size());
  const std::uint32_t entry = g.entry(p.body);
  return run(g, entry, start, num_tests);
}

ConcreteAutomaton reference_automaton(Exp e, std::size_t num_tests) {
  Lowering g(0);
  const std::uint32_t entry = g.entry(e);
  return run(g, entry, IndicatorState{}, num_tests);
}

std::vector<bool> dead_states(const ConcreteAutomaton& a) {
  const std::uint64_t n_atoms = std::uint64_t{1} << a.num_tests();
  std::vector<std::vector<StateId>> back(a.size());
  std::vector<bool> live(a.size(), false);
  std::deque<StateId> work;
  for (StateId s = 0; s < a.size(); ++s) {
    for (std::uint64_t k = 0; k < n_atoms; ++k) {
      const ConcreteStep& st = a.at(s, k);
      if (st.kind == Outcome::Step) back[st.target].push_back(s);
      if (st.kind == Outcome::Accept && !live[s]) {
        live[s] = true;
        work.push_back(s);
      }
    }
  }
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    for (StateId p : back[s]) {
      if (!live[p]) {
        live[p] = true;
        work.push_back(p);
      }
    }
  }
  std::vector<bool> dead(a.size());
  for (StateId s = 0; s < a.size(); ++s) dead[s] = !live[s];
  return dead;
}

ConcreteAutomaton normalize(const ConcreteAutomaton& a) {
  const std::vector<bool> dead = dead_states(a);
  const std::uint64_t n_atoms = std::uint64_t{1} << a.num_tests();
  ConcreteAutomaton out(a.num_tests());
  for (StateId s = 0; s < a.size(); ++s) out.add_state();
  out.set_start(a.start());
  for (StateId s = 0; s < a.size(); ++s) {
    for (std::uint64_t k = 0; k < n_atoms; ++k) {
      ConcreteStep st = a.at(s, k);
      if (st.kind == Outcome::Step && dead[st.target]) st = {Outcome::Reject};
      out.set(s, Atom::from_index(a.num_tests(), k), st);
    }
  }
  return out;
}

bool naive_bisim(const ConcreteAutomaton& a, const ConcreteAutomaton& b) {
  if (a.num_tests() != b.num_tests()) throw InternalError("naive_bisim: different test sets");
  const std::uint64_t n_atoms = std::uint64_t{1} << a.num_tests();
  UnionFind uf;
  std::vector<std::pair<StateId, StateId>> work{{a.start(), b.start()}};
  while (!work.empty()) {
    auto [s, u] = work.back();
    work.pop_back();
    const std::uint64_t ks = s, ku = (std::uint64_t{1} << 32) | u;
    if (uf.find(ks) == uf.find(ku)) continue;
    uf.unite(ks, ku);
    for (std::uint64_t k = 0; k < n_atoms; ++k) {
      const ConcreteStep &x = a.at(s, k), &y = b.at(u, k);
      if (x.kind != y.kind) return false;
      if (x.kind != Outcome::Step) continue;
      if (x.action != y.action) return false;
      work.emplace_back(x.target, y.target);
    }
  }
  return true;
}

bool trace_equivalent(const ConcreteAutomaton& a, const ConcreteAutomaton& b) {
  return naive_bisim(normalize(a), normalize(b));
}

std::set<GuardedString> traces_up_to(const ConcreteAutomaton& a, StateId s, std::size_t k) {
  const std::uint64_t n_atoms = std::uint64_t{1} << a.num_tests();
  std::set<GuardedString> out;
  for (std::uint64_t i = 0; i < n_atoms; ++i) {
    const ConcreteStep& st = a.at(s, i);
    if (st.kind == Outcome::Accept) {
      out.insert({{i}, {}});
    } else if (st.kind == Outcome::Step && k > 0) {
      for (const GuardedString& w : traces_up_to(a, st.target, k - 1)) {
        GuardedString g{{i}, {st.action}};
        g.atoms.insert(g.atoms.end(), w.atoms.begin(), w.atoms.end());
        g.actions.insert(g.actions.end(), w.actions.begin(), w.actions.end());
        out.insert(std::move(g));
      }
    }
  }
  return out;
}

bool accepts(const ConcreteAutomaton& a, const std::vector<Atom>& atoms, const std::vector<ActionId>& actions) {
  if (atoms.size() != actions.size() + 1) return false;
  StateId s = a.start();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const ConcreteStep& st = a.at(s, atoms[i]);
    if (i + 1 == atoms.size()) return st.kind == Outcome::Accept;
    if (st.kind != Outcome::Step || st.action != actions[i]) return false;
    s = st.target;
  }
  return false;
}

}  // namespace gkat::oracle

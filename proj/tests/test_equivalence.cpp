#include <gtest/gtest.h>

#include "gkat/genbench.hpp"
#include "support.hpp"

using namespace gkat;
using namespace gkat::testing;

namespace {

BExp t(TestId i) { return BExp::test(i); }

class Backends : public ::testing::TestWithParam<BackendKind> {};

struct Pair {
  std::shared_ptr<Registry> reg = std::make_shared<Registry>();
  Program left, right;
  Pair(const std::string& a, const std::string& b, Lang lang = Lang::Cfgkat)
      : left(fixture(a, reg, lang)), right(fixture(b, reg, lang)) {}
};

Verdict check(const Pair& p, BackendKind k, Mode m = Mode::Trace) {
  SolverHandle h(k);
  const IndicatorState pi = zero_state(*p.reg);
  CfgkatAutomaton l(p.left, pi, h, {true}), r(p.right, pi, h, {true});
  return equiv_symbolic(l, r, h, m, p.reg->num_tests());
}

// One transition on `g` with action `p` into an accepting state.
ExplicitSymbolicAutomaton step_then_accept(BExp g, ActionId p) {
  ExplicitSymbolicAutomaton a;
  const StateId s = a.add_state("s"), f = a.add_state("f");
  a.add_delta(s, g, f, p);
  a.add_eps(f, BExp::one());
  return a;
}

ExplicitSymbolicAutomaton rejecting() {
  ExplicitSymbolicAutomaton a;
  a.add_state("r");
  return a;
}

ExplicitSymbolicAutomaton dead_cycle(ActionId p) {
  ExplicitSymbolicAutomaton a;
  for (int i = 0; i < 3; ++i) a.add_state("s" + std::to_string(i));
  for (StateId s = 0; s < 3; ++s) a.add_delta(s, BExp::one(), (s + 1) % 3, p);
  return a;
}

}  // namespace

TEST(UnionFind, MergesClasses) {
  UnionFind uf;
  EXPECT_NE(uf.find(1), uf.find(2));
  uf.unite(1, 2);
  uf.unite(3, 4);
  EXPECT_EQ(uf.find(1), uf.find(2));
  EXPECT_NE(uf.find(2), uf.find(3));
  uf.unite(2, 4);
  EXPECT_EQ(uf.find(1), uf.find(3));
}

TEST(Modes, Names) {
  EXPECT_EQ(parse_mode("trace"), Mode::Trace);
  EXPECT_EQ(parse_mode("bisim"), Mode::Bisim);
  EXPECT_EQ(mode_name(Mode::Bisim), "bisim");
  EXPECT_THROW(parse_mode("language"), InputError);
  EXPECT_EQ(condition_line(Condition::EpsMismatch), 9);
  EXPECT_EQ(condition_line(Condition::ActionMismatch), 12);
}

TEST_P(Backends, FixturePairs) {
  EXPECT_TRUE(check(Pair("while_loop.cfg", "goto_loop.cfg"), GetParam()).equivalent);
  EXPECT_TRUE(check(Pair("goto_loop.cfg", "while_loop.cfg"), GetParam()).equivalent);
  EXPECT_TRUE(check(Pair("while_loop.cfg", "while_loop.cfg"), GetParam()).equivalent);
  EXPECT_FALSE(check(Pair("while_loop.cfg", "goto_weakened.cfg"), GetParam()).equivalent);
}

TEST_P(Backends, EarlyTerminationOnFixtures) {
  const Pair p("while_loop.cfg", "goto_weakened.cfg");
  SolverHandle h(GetParam());
  const IndicatorState pi = zero_state(*p.reg);
  CfgkatAutomaton l(p.left, pi, h), r(p.right, pi, h);
  std::size_t bound = 2;
  std::unordered_set<StateId> ls, rs;
  for (const auto& d : l.entries(l.start()).delta) ls.insert(d.target);
  for (const auto& d : r.entries(r.start()).delta) rs.insert(d.target);
  bound += ls.size() + rs.size();
  const Verdict v = equiv_symbolic(l, r, h, Mode::Trace, p.reg->num_tests());
  ASSERT_FALSE(v.equivalent);
  EXPECT_LE(v.stats.states, bound);
  EXPECT_EQ(v.stats.dead_checks, 0u);
}

TEST_P(Backends, FixtureWitness) {
  const Pair p("while_loop.cfg", "goto_weakened.cfg");
  const Verdict v = check(p, GetParam());
  ASSERT_TRUE(v.witness);
  const Witness& w = *v.witness;
  EXPECT_EQ(w.condition, Condition::EpsMismatch);
  EXPECT_EQ(w.prefix_length, 1u);
  EXPECT_EQ(w.accepted_by, 1);
  EXPECT_EQ(format_witness(w, p.reg.get()), "t1 !t2 | p ; !t1 t2");
  EXPECT_EQ(serialize(v, p.reg.get()),
            "INEQUIVALENT\nwitness: t1 !t2 | p ; !t1 t2\ncondition: line 9 (accepting guards differ)\ntrace-of: right\n");
  const IndicatorState pi = zero_state(*p.reg);
  EXPECT_TRUE(witness_separates(w, oracle::reference_automaton(p.left, pi, 2),
                                oracle::reference_automaton(p.right, pi, 2)));
}

TEST_P(Backends, SerializeEquivalent) {
  const Verdict v = check(Pair("while_loop.cfg", "goto_loop.cfg"), GetParam());
  EXPECT_EQ(serialize(v, nullptr), "EQUIVALENT\n");
  const std::string with_stats = serialize(v, nullptr, true, true);
  EXPECT_EQ(with_stats.rfind("EQUIVALENT\nstates=", 0), 0u);
  EXPECT_NE(with_stats.find("dead_checks="), std::string::npos);
}

TEST_P(Backends, ModeSeparation) {
  const Pair loops("loop_p.gkat", "loop_q.gkat", Lang::Gkat);
  for (Mode m : {Mode::Trace, Mode::Bisim}) {
    SolverHandle h(GetParam());
    GkatAutomaton l(loops.left.body, h), r(loops.right.body, h);
    EXPECT_EQ(equiv_symbolic(l, r, h, m, loops.reg->num_tests()).equivalent, m == Mode::Trace);
  }
  for (Mode m : {Mode::Trace, Mode::Bisim}) {
    ExplicitSymbolicAutomaton a = dead_cycle(0), b = dead_cycle(1);
    SolverHandle h(GetParam());
    const Verdict v = equiv_symbolic(a, b, h, m, 0);
    EXPECT_EQ(v.equivalent, m == Mode::Trace);
    if (m == Mode::Bisim) {
      ASSERT_TRUE(v.witness);
      EXPECT_EQ(v.witness->condition, Condition::ActionMismatch);
      EXPECT_EQ(v.witness->accepted_by, -1);
    }
  }
}

TEST_P(Backends, DeadCycleIsVisitedOnce) {
  ExplicitSymbolicAutomaton a = dead_cycle(0), b = dead_cycle(1);
  SolverHandle h(GetParam());
  CheckSession s(a, b, h, Mode::Trace, 0);
  EXPECT_TRUE(s.run().equivalent);
  for (StateId x = 0; x < 3; ++x) EXPECT_TRUE(s.known_dead(0, x));
  EXPECT_EQ(a.materialized(), 3u);
}

TEST_P(Backends, EachConditionIsReported) {
  const std::size_t n = 1;
  {
    ExplicitSymbolicAutomaton a = step_then_accept(BExp::one(), 0), b = rejecting();
    SolverHandle h(GetParam());
    const Verdict v = equiv_symbolic(a, b, h, Mode::Trace, n);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->condition, Condition::LeftOnly);
    EXPECT_EQ(v.witness->accepted_by, 0);
    EXPECT_EQ(v.witness->actions, std::vector<ActionId>{0});
    EXPECT_EQ(v.witness->atoms.size(), 2u);
  }
  {
    ExplicitSymbolicAutomaton a = rejecting(), b = step_then_accept(t(0), 1);
    SolverHandle h(GetParam());
    const Verdict v = equiv_symbolic(a, b, h, Mode::Trace, n);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->condition, Condition::RightOnly);
    EXPECT_EQ(v.witness->accepted_by, 1);
    EXPECT_TRUE(v.witness->atoms[0][0]);
  }
  {
    ExplicitSymbolicAutomaton a = step_then_accept(BExp::one(), 0), b = step_then_accept(BExp::one(), 1);
    SolverHandle h(GetParam());
    const Verdict v = equiv_symbolic(a, b, h, Mode::Trace, n);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->condition, Condition::ActionMismatch);
    EXPECT_EQ(v.witness->accepted_by, 0);
  }
  {
    ExplicitSymbolicAutomaton a, b;
    a.add_state();
    b.add_state();
    a.add_eps(0, t(0));
    b.add_eps(0, neg(t(0)));
    SolverHandle h(GetParam());
    const Verdict v = equiv_symbolic(a, b, h, Mode::Trace, n);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->condition, Condition::EpsMismatch);
    EXPECT_EQ(v.witness->prefix_length, 0u);
    // least atom is !t0, accepted only on the right
    EXPECT_FALSE(v.witness->atoms[0][0]);
    EXPECT_EQ(v.witness->accepted_by, 1);
  }
}

TEST_P(Backends, KnownDeadShortcut) {
  // left: s0 -t0|p-> d, s0 -!t0|q-> d, d loops forever.
  // right: u0 -t0|q-> e (dead loop), u0 -!t0|q-> f -p-> g accepting.
  // The action mismatch marks d dead, so the pair (d, f) fails as left known dead.
  ExplicitSymbolicAutomaton a, b;
  const StateId s0 = a.add_state("s0"), d = a.add_state("d");
  a.add_delta(s0, t(0), d, 0);
  a.add_delta(s0, neg(t(0)), d, 1);
  a.add_delta(d, BExp::one(), d, 0);
  const StateId u0 = b.add_state("u0"), e = b.add_state("e"), f = b.add_state("f"), g = b.add_state("g");
  b.add_delta(u0, t(0), e, 1);
  b.add_delta(u0, neg(t(0)), f, 1);
  b.add_delta(e, BExp::one(), e, 0);
  b.add_delta(f, BExp::one(), g, 0);
  b.add_eps(g, BExp::one());
  a.set_start(s0);
  b.set_start(u0);
  SolverHandle h(GetParam());
  const Verdict v = equiv_symbolic(a, b, h, Mode::Trace, 1);
  ASSERT_FALSE(v.equivalent);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->condition, Condition::LeftKnownDead);
  EXPECT_EQ(v.witness->accepted_by, 1);
  EXPECT_EQ(v.witness->actions, (std::vector<ActionId>{1, 0}));
  const ConcreteAutomaton ca = concretize_all(a, 1), cb = concretize_all(b, 1);
  EXPECT_TRUE(witness_separates(*v.witness, ca, cb));
  EXPECT_FALSE(equiv_concrete(ca, cb, Mode::Trace).equivalent);
}

TEST(Concrete, SelfEquivalence) {
  auto reg = std::make_shared<Registry>();
  const Program p = fixture("while_loop.cfg", reg);
  const ConcreteAutomaton a = oracle::reference_automaton(p, zero_state(*reg), reg->num_tests());
  EXPECT_TRUE(equiv_concrete(a, a, Mode::Trace).equivalent);
  EXPECT_TRUE(equiv_concrete(a, a, Mode::Bisim).equivalent);
}

TEST_P(Backends, FreshSessionPerQueryIsOrderIndependent) {
  // the same pairs decided in two orders, each query on a fresh session
  std::vector<Verdict> forward, backward;
  std::vector<gen::GkatPair> pairs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    gen::GenConfig c;
    c.size = 15;
    pairs.push_back(gen::gen_pair(seed, c));
    if (seed % 2) pairs.back().right = gen::mutate(pairs.back().right, seed, c);
  }
  auto decide = [&](const gen::GkatPair& p) {
    SolverHandle h(GetParam());
    GkatAutomaton l(p.left, h), r(p.right, h);
    return equiv_symbolic(l, r, h, Mode::Trace, 3);
  };
  for (const auto& p : pairs) forward.push_back(decide(p));
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) backward.push_back(decide(*it));
  std::reverse(backward.begin(), backward.end());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    EXPECT_EQ(serialize(forward[i], nullptr), serialize(backward[i], nullptr)) << "pair " << i;
}

TEST_P(Backends, BisimRefinesTrace) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    gen::GenConfig c;
    c.size = 6 + seed % 15;
    c.tests = 1 + seed % 3;
    c.actions = 1 + seed % 3;
    const gen::GkatPair p = gen::gen_pair(seed, c);
    const Exp right = seed % 3 ? gen::mutate(p.right, seed, c) : p.right;
    const Outcomes bisim = decide_gkat(p.left, right, c.tests, GetParam(), Mode::Bisim);
    const Outcomes trace = decide_gkat(p.left, right, c.tests, GetParam(), Mode::Trace);
    EXPECT_EQ(bisim.symbolic.equivalent, bisim.oracle);
    EXPECT_EQ(trace.symbolic.equivalent, trace.oracle);
    if (bisim.symbolic.equivalent) {
      EXPECT_TRUE(trace.symbolic.equivalent);
    }
  }
}

TEST_P(Backends, SessionIsSingleUse) {
  ExplicitSymbolicAutomaton a = rejecting(), b = rejecting();
  SolverHandle h(GetParam());
  CheckSession s(a, b, h, Mode::Trace, 0);
  s.run();
  EXPECT_THROW(s.run(), InternalError);
}

INSTANTIATE_TEST_SUITE_P(Equivalence, Backends, ::testing::Values(BackendKind::Sat, BackendKind::Bdd),
                         [](const auto& info) { return std::string(backend_name(info.param)); });

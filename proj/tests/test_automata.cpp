#include <gtest/gtest.h>

#include <sstream>

#include "gkat/genbench.hpp"
#include "support.hpp"

using namespace gkat;
using namespace gkat::testing;

namespace {

BExp t(TestId i) { return BExp::test(i); }
Exp p() { return Exp::action(0); }
Exp q() { return Exp::action(1); }

Atom atom(std::initializer_list<bool> bits) {
  Atom a(bits.size());
  TestId i = 0;
  for (bool v : bits) a.set(i++, v);
  return a;
}

class Backends : public ::testing::TestWithParam<BackendKind> {};

}  // namespace

TEST(Concretize, PicksTheMatchingEntry) {
  StateEntries e;
  e.eps.push_back(conj(t(0), t(1)));
  e.delta.push_back({neg(t(0)), 3, 7});
  EXPECT_EQ(concretize(e, atom({true, true})).kind, Outcome::Accept);
  EXPECT_EQ(concretize(e, atom({false, true})), (ConcreteStep{Outcome::Step, 3, 7}));
  EXPECT_EQ(concretize(e, atom({true, false})).kind, Outcome::Reject);
}

TEST(Concretize, OverlapIsAnInternalError) {
  StateEntries e;
  e.eps.push_back(t(0));
  e.delta.push_back({t(0), 0, 0});
  EXPECT_THROW(concretize(e, atom({true})), InternalError);
}

TEST(Entries, RhoAndEpsGuard) {
  StateEntries e;
  e.eps.push_back(t(0));
  e.delta.push_back({t(1), 0, 0});
  SolverHandle h;
  EXPECT_TRUE(h.equiv(rho(e), conj(neg(t(0)), neg(t(1)))));
  EXPECT_TRUE(h.equiv(eps_guard(e), t(0)));
  EXPECT_EQ(rho(StateEntries{}), BExp::one());
  EXPECT_EQ(eps_guard(StateEntries{}), BExp::zero());
}

TEST_P(Backends, InvariantCheckers) {
  SolverHandle h(GetParam());
  StateEntries ok;
  ok.eps.push_back(t(0));
  ok.delta.push_back({neg(t(0)), 0, 0});
  EXPECT_FALSE(check_disjoint(ok, h));
  EXPECT_TRUE(check_total_coverage(ok, h));
  EXPECT_TRUE(check_no_blocked(ok, h));

  StateEntries bad = ok;
  bad.delta.push_back({conj(t(0), t(1)), 1, 0});
  bad.delta.push_back({conj(t(2), neg(t(2))), 1, 0});
  EXPECT_TRUE(check_disjoint(bad, h).has_value());
  EXPECT_FALSE(check_no_blocked(bad, h));
}

TEST(ConcreteAutomaton, BfsNumbering) {
  ExplicitSymbolicAutomaton a;
  const StateId s0 = a.add_state("s0"), s1 = a.add_state("s1"), s2 = a.add_state("s2");
  a.set_start(s2);
  a.add_delta(s2, t(0), s0, 0);
  a.add_delta(s2, neg(t(0)), s1, 1);
  a.add_eps(s0, BExp::one());
  a.add_delta(s1, BExp::one(), s2, 0);
  std::vector<StateId> ids;
  const ConcreteAutomaton c = concretize_all(a, 1, &ids);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(c.start(), 0u);
  // atoms are visited false first, so s1 is discovered before s0
  EXPECT_EQ(ids, (std::vector<StateId>{s2, s1, s0}));
  EXPECT_EQ(c.at(0, atom({false})), (ConcreteStep{Outcome::Step, 1, 1}));
  EXPECT_EQ(c.at(0, atom({true})), (ConcreteStep{Outcome::Step, 2, 0}));
  EXPECT_EQ(c.at(1, atom({true})), (ConcreteStep{Outcome::Step, 0, 0}));
  EXPECT_EQ(c.at(2, atom({false})).kind, Outcome::Accept);
  EXPECT_EQ(a.materialized(), 3u);
}

TEST(ConcreteAutomaton, RefusesLargeAlphabets) {
  SolverHandle h;
  GkatAutomaton a(p(), h);
  EXPECT_THROW(concretize_all(a, 40), InputError);
}

TEST_P(Backends, GkatDerivatives) {
  SolverHandle h(GetParam());
  const GkatEntries act = gkat_step(p(), h);
  ASSERT_EQ(act.delta.size(), 1u);
  EXPECT_TRUE(act.eps.empty());
  EXPECT_EQ(act.delta[0].target, Exp::skip());

  const GkatEntries ite = gkat_step(Exp::ite(t(0), p(), q()), h);
  ASSERT_EQ(ite.delta.size(), 2u);
  EXPECT_TRUE(h.equiv(ite.delta[0].guard, t(0)));
  EXPECT_TRUE(h.equiv(ite.delta[1].guard, neg(t(0))));

  const Exp loop = Exp::loop(t(0), p());
  const GkatEntries w = gkat_step(loop, h);
  ASSERT_EQ(w.eps.size(), 1u);
  EXPECT_TRUE(h.equiv(w.eps[0], neg(t(0))));
  ASSERT_EQ(w.delta.size(), 1u);
  EXPECT_EQ(w.delta[0].target, loop);

  // assert(0); p has no live entry at all
  const GkatEntries blocked = gkat_step(Exp::seq(Exp::test(conj(t(0), neg(t(0)))), p()), h);
  EXPECT_TRUE(blocked.eps.empty());
  EXPECT_TRUE(blocked.delta.empty());

  EXPECT_THROW(gkat_step(Exp::ret(), h), InputError);
}

TEST_P(Backends, CfDerivatives) {
  SolverHandle h(GetParam());
  const IndicatorState pi(std::vector<Value>{0});

  const CfEntries r = cf_step(pi, Exp::ret(), h);
  ASSERT_EQ(r.eps.size(), 1u);
  EXPECT_EQ(r.eps[0].cont, Continuation::ret());

  const CfEntries b = cf_step(pi, Exp::brk(), h);
  ASSERT_EQ(b.eps.size(), 1u);
  EXPECT_EQ(b.eps[0].cont, Continuation::brk(pi));

  const CfEntries g = cf_step(pi, Exp::go(2), h);
  ASSERT_EQ(g.eps.size(), 1u);
  EXPECT_EQ(g.eps[0].cont, Continuation::jmp(2, pi));

  // the assignment is visible to the following test
  const Exp branch = Exp::seq(Exp::assign(0, 1), Exp::ite(BExp::ind(0, 1), p(), q()));
  const CfEntries a = cf_step(pi, branch, h);
  ASSERT_EQ(a.delta.size(), 1u);
  EXPECT_EQ(a.delta[0].action, 0u);
  EXPECT_EQ(a.delta[0].target.pi.at(0), 1);

  // break leaves the loop as plain acceptance
  const CfEntries w = cf_step(pi, Exp::loop(t(0), Exp::brk()), h);
  EXPECT_TRUE(w.delta.empty());
  ASSERT_EQ(w.eps.size(), 2u);
  for (const CfEps& e : w.eps) EXPECT_EQ(e.cont, Continuation::acc(pi));
}

TEST_P(Backends, LoopExitGoldenAutomata) {
  auto reg = std::make_shared<Registry>();
  const Program prog = fixture("indicator_loop.cfg", reg);
  SolverHandle h(GetParam());
  CfgkatAutomaton a(prog, IndicatorState(std::vector<Value>{3}), h, {true});
  std::ostringstream os;
  dump(os, a, reg.get());
  EXPECT_EQ(os.str(),
            "state 0 | eps:  | delta: (!b & a, p, 0) (b & a, p, 1)\n"
            "state 1 | eps:  | delta: (a, p, 1)\n");
  CfgkatAutomaton two(prog, IndicatorState(std::vector<Value>{2}), h, {true});
  const StateEntries& e = two.entries(two.start());
  EXPECT_TRUE(e.delta.empty());
  EXPECT_TRUE(h.equiv(eps_guard(e), BExp::one()));
}

TEST_P(Backends, JumpsResolveToTheLabel) {
  auto reg = std::make_shared<Registry>();
  const Program prog = fixture("goto_loop.cfg", reg);
  SolverHandle h(GetParam());
  CfgkatAutomaton a(prog, zero_state(*reg), h, {true});
  const ConcreteAutomaton c = concretize_all(a, reg->num_tests());
  EXPECT_EQ(c.size(), 3u);
  EXPECT_GT(a.jump_stats().calls, 0u);
  // from the labelled state, t2 loops back through goto l
  Registry::Role role;
  std::uint32_t t2;
  reg->find("t2", role, t2);
  const StateEntries& first = a.entries(a.start());
  ASSERT_EQ(first.delta.size(), 1u);
  const StateEntries& lbl = a.entries(first.delta[0].target);
  ASSERT_EQ(lbl.delta.size(), 1u);
  EXPECT_TRUE(h.equiv(lbl.delta[0].guard, BExp::test(t2)));
  const StateEntries& again = a.entries(lbl.delta[0].target);
  ASSERT_EQ(again.delta.size(), 1u);
  EXPECT_EQ(again.delta[0].target, lbl.delta[0].target);
}

TEST_P(Backends, InvariantsHoldOnGeneratedPrograms) {
  const std::uint64_t before = invariant_checks();
  std::size_t states = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gen::GenConfig c;
    c.size = 12 + seed % 15;
    c.tests = 1 + seed % 3;
    c.vars = seed % 2;
    c.labels = seed % 3 == 0 ? 1 : 0;
    c.max_depth = 5;
    gen::Rng rng(seed);
    const Program prog = gen::gen_cf_program(rng, c, gen::make_registry(c));
    SolverHandle h(GetParam());
    CfgkatAutomaton a(prog, zero_state(*prog.registry), h, {true});
    ASSERT_NO_THROW(concretize_all(a, c.tests));
    states += a.materialized();
  }
  EXPECT_EQ(invariant_checks() - before, states);
}

TEST_P(Backends, AgreesWithReferenceAutomaton) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    gen::GenConfig c;
    c.size = 8 + seed % 20;
    c.tests = 1 + seed % 3;
    c.vars = seed % 2;
    c.labels = seed % 4 == 0 ? 1 : 0;
    c.max_depth = 5;
    gen::Rng rng(seed);
    const Program prog = gen::gen_cf_program(rng, c, gen::make_registry(c));
    SolverHandle h(GetParam());
    CfgkatAutomaton a(prog, zero_state(*prog.registry), h);
    const ConcreteAutomaton mine = concretize_all(a, c.tests);
    const ConcreteAutomaton ref = oracle::reference_automaton(prog, zero_state(*prog.registry), c.tests);
    EXPECT_TRUE(oracle::trace_equivalent(mine, ref)) << to_string(prog.body, prog.registry.get(), &prog.labels);
  }
}

INSTANTIATE_TEST_SUITE_P(Automata, Backends, ::testing::Values(BackendKind::Sat, BackendKind::Bdd),
                         [](const auto& info) { return std::string(backend_name(info.param)); });

#include <benchmark/benchmark.h>

#include "gkat/derivative.hpp"
#include "gkat/genbench.hpp"
#include "gkat/oracle.hpp"

using namespace gkat;

namespace {

gen::GenConfig config(std::size_t size, std::size_t tests, std::size_t bexp) {
  gen::GenConfig c;
  c.size = size;
  c.tests = tests;
  c.actions = 8;
  c.bexp_size = bexp;
  c.rewrite_steps = size / 5;
  c.spread_tests = tests > 16;
  return c;
}

void symbolic(benchmark::State& state, BackendKind k) {
  const gen::GenConfig c = config(state.range(0), state.range(1), 4);
  const gen::GkatPair p = gen::gen_pair(42, c);
  std::size_t states = 0;
  for (auto _ : state) {
    SolverHandle h(k);
    GkatAutomaton l(p.left, h), r(p.right, h);
    const Verdict v = equiv_symbolic(l, r, h, Mode::Trace, c.tests);
    states = v.stats.states;
    benchmark::DoNotOptimize(v.equivalent);
  }
  state.counters["states"] = static_cast<double>(states);
}

void BM_SymbolicSat(benchmark::State& s) { symbolic(s, BackendKind::Sat); }
void BM_SymbolicBdd(benchmark::State& s) { symbolic(s, BackendKind::Bdd); }

// Concrete path on the same small instances: atoms are enumerated per state.
void BM_Concrete(benchmark::State& state) {
  const gen::GenConfig c = config(state.range(0), state.range(1), 2);
  const gen::GkatPair p = gen::gen_pair(42, c);
  for (auto _ : state) {
    SolverHandle h;
    GkatAutomaton l(p.left, h), r(p.right, h);
    const Verdict v = equiv_concrete(concretize_all(l, c.tests), concretize_all(r, c.tests), Mode::Trace);
    benchmark::DoNotOptimize(v.equivalent);
  }
}

void BM_Oracle(benchmark::State& state) {
  const gen::GenConfig c = config(state.range(0), state.range(1), 2);
  const gen::GkatPair p = gen::gen_pair(42, c);
  for (auto _ : state) {
    const bool eq = oracle::trace_equivalent(oracle::reference_automaton(p.left, c.tests),
                                             oracle::reference_automaton(p.right, c.tests));
    benchmark::DoNotOptimize(eq);
  }
}

void BM_EarlyExit(benchmark::State& state) {
  const gen::GenConfig c = config(state.range(0), 8, 2);
  const gen::GkatPair p = gen::gen_pair(42, c);
  const Exp left = Exp::seq(Exp::action(0), p.left), right = Exp::seq(Exp::action(1), p.right);
  for (auto _ : state) {
    SolverHandle h;
    GkatAutomaton l(left, h), r(right, h);
    benchmark::DoNotOptimize(equiv_symbolic(l, r, h, Mode::Trace, c.tests).equivalent);
  }
}

}  // namespace

BENCHMARK(BM_SymbolicSat)->ArgsProduct({{25, 50, 100}, {4, 100, 1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymbolicBdd)->ArgsProduct({{25, 50, 100}, {4, 100, 1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Concrete)->ArgsProduct({{25, 50}, {2, 6, 10}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->ArgsProduct({{25, 50}, {2, 6, 10}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EarlyExit)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();

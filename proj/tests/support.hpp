#pragma once

#include <memory>
#include <string>

#include "gkat/derivative.hpp"
#include "gkat/equivalence.hpp"
#include "gkat/oracle.hpp"
#include "gkat/parser.hpp"

namespace gkat::testing {

inline const std::string kFixtures = GKAT_FIXTURE_DIR;

inline Program fixture(const std::string& name, std::shared_ptr<Registry> reg, Lang lang = Lang::Cfgkat) {
  return parse_file(kFixtures + "/" + name, std::move(reg), lang);
}

struct Outcomes {
  Verdict symbolic;
  bool concrete;
  bool oracle;
  std::size_t oracle_states;
};

inline IndicatorState zero_state(const Registry& reg) { return IndicatorState(reg.num_vars(), 0); }

/// Symbolic, concrete and oracle verdicts for a CF-GKAT pair. Invariants are
/// checked on every materialized state.
inline Outcomes decide_cf(const Program& a, const Program& b, BackendKind k, Mode mode = Mode::Trace) {
  const Registry& reg = *a.registry;
  const std::size_t n = reg.num_tests();
  const IndicatorState pi = zero_state(reg);
  Outcomes out;
  {
    SolverHandle h(k);
    CfgkatAutomaton l(a, pi, h, {true}), r(b, pi, h, {true});
    out.symbolic = equiv_symbolic(l, r, h, mode, n);
  }
  {
    SolverHandle h(k);
    CfgkatAutomaton l(a, pi, h), r(b, pi, h);
    out.concrete = equiv_concrete(concretize_all(l, n), concretize_all(r, n), mode).equivalent;
  }
  const ConcreteAutomaton ra = oracle::reference_automaton(a, pi, n);
  const ConcreteAutomaton rb = oracle::reference_automaton(b, pi, n);
  out.oracle = mode == Mode::Trace ? oracle::trace_equivalent(ra, rb) : oracle::naive_bisim(ra, rb);
  out.oracle_states = ra.size() + rb.size();
  return out;
}

inline Outcomes decide_gkat(Exp a, Exp b, std::size_t n, BackendKind k, Mode mode = Mode::Trace) {
  Outcomes out;
  {
    SolverHandle h(k);
    GkatAutomaton l(a, h, {true}), r(b, h, {true});
    out.symbolic = equiv_symbolic(l, r, h, mode, n);
  }
  {
    SolverHandle h(k);
    GkatAutomaton l(a, h), r(b, h);
    out.concrete = equiv_concrete(concretize_all(l, n), concretize_all(r, n), mode).equivalent;
  }
  const ConcreteAutomaton ra = oracle::reference_automaton(a, n);
  const ConcreteAutomaton rb = oracle::reference_automaton(b, n);
  out.oracle = mode == Mode::Trace ? oracle::trace_equivalent(ra, rb) : oracle::naive_bisim(ra, rb);
  out.oracle_states = ra.size() + rb.size();
  return out;
}

/// In trace mode a witness must be a trace of exactly the side it names.
inline bool witness_separates(const Witness& w, const ConcreteAutomaton& a, const ConcreteAutomaton& b) {
  if (w.accepted_by < 0) return false;
  const bool in_a = oracle::accepts(a, w.atoms, w.actions);
  const bool in_b = oracle::accepts(b, w.atoms, w.actions);
  return w.accepted_by == 0 ? in_a && !in_b : in_b && !in_a;
}

}  // namespace gkat::testing

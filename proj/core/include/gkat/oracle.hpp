#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "gkat/automata.hpp"
#include "gkat/syntax.hpp"

namespace gkat::oracle {

/// Reference concrete automaton of a program, built by lowering it to a
/// control-flow graph and running each atom through silent steps. Shares no
/// code with the derivative construction.
ConcreteAutomaton reference_automaton(const Program& p, const IndicatorState& start, std::size_t num_tests);
ConcreteAutomaton reference_automaton(Exp e, std::size_t num_tests);

/// States from which no accepting entry is reachable (backward search).
std::vector<bool> dead_states(const ConcreteAutomaton& a);

/// Transitions into dead states become Reject.
ConcreteAutomaton normalize(const ConcreteAutomaton& a);

/// Union-find bisimulation; on normalized inputs this decides trace equivalence.
bool naive_bisim(const ConcreteAutomaton& a, const ConcreteAutomaton& b);

/// Normalize both sides, then bisimulate.
bool trace_equivalent(const ConcreteAutomaton& a, const ConcreteAutomaton& b);

struct GuardedString {
  std::vector<std::uint64_t> atoms;  // atom indices; one more than actions
  std::vector<ActionId> actions;
  friend auto operator<=>(const GuardedString&, const GuardedString&) = default;
};

/// Traces of s with at most k actions.
std::set<GuardedString> traces_up_to(const ConcreteAutomaton& a, StateId s, std::size_t k);

/// Runs a guarded string from the start state; true iff it is a trace.
bool accepts(const ConcreteAutomaton& a, const std::vector<Atom>& atoms, const std::vector<ActionId>& actions);

}  // namespace gkat::oracle

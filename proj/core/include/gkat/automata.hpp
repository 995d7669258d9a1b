#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gkat/bexp.hpp"
#include "gkat/registry.hpp"
#include "gkat/solver.hpp"

namespace gkat {

enum class ContKind : std::uint8_t { Acc, Ret, Brk, Cont, Jmp };

/// Outcome of a CF-GKAT state: acc pi, ret, brk pi, cont pi, jmp(l, pi).
struct Continuation {
  ContKind kind = ContKind::Ret;
  IndicatorState pi;
  LabelId label = 0;

  static Continuation acc(IndicatorState p) { return {ContKind::Acc, std::move(p), 0}; }
  static Continuation ret() { return {ContKind::Ret, {}, 0}; }
  static Continuation brk(IndicatorState p) { return {ContKind::Brk, std::move(p), 0}; }
  static Continuation cont(IndicatorState p) { return {ContKind::Cont, std::move(p), 0}; }
  static Continuation jmp(LabelId l, IndicatorState p) { return {ContKind::Jmp, std::move(p), l}; }

  friend bool operator==(const Continuation&, const Continuation&) = default;
};

std::string to_string(const Continuation& c);

using StateId = std::uint32_t;

struct DeltaEntry {
  BExp guard;
  StateId target;
  ActionId action;
};

/// Entries of one symbolic GKAT automaton state; eps holds accepting guards.
struct StateEntries {
  std::vector<BExp> eps;
  std::vector<DeltaEntry> delta;
};

/// A symbolic GKAT automaton whose states are materialized on demand.
class SymbolicAutomaton {
 public:
  virtual ~SymbolicAutomaton() = default;
  virtual StateId start() = 0;
  virtual const StateEntries& entries(StateId s) = 0;
  /// States whose entries have been computed.
  virtual std::size_t materialized() const = 0;
  virtual std::string describe(StateId s) const { return std::to_string(s); }
};

/// Hand-built automaton, used for fixtures and tests.
class ExplicitSymbolicAutomaton final : public SymbolicAutomaton {
 public:
  StateId add_state(std::string name = {});
  void set_start(StateId s) { start_ = s; }
  void add_eps(StateId s, BExp g) { states_.at(s).eps.push_back(g); }
  void add_delta(StateId s, BExp g, StateId t, ActionId p) { states_.at(s).delta.push_back({g, t, p}); }
  std::size_t size() const { return states_.size(); }

  StateId start() override { return start_; }
  const StateEntries& entries(StateId s) override;
  std::size_t materialized() const override { return touched_; }
  std::string describe(StateId s) const override;

 private:
  StateId start_ = 0;
  std::vector<StateEntries> states_;
  std::vector<std::string> names_;
  std::vector<char> seen_;
  std::size_t touched_ = 0;
};

/// Conjunction of the negated guards of all entries (the rejecting atoms).
BExp rho(const StateEntries& e);
/// Disjunction of the accepting guards.
BExp eps_guard(const StateEntries& e);

enum class Outcome : std::uint8_t { Reject, Accept, Step };

struct ConcreteStep {
  Outcome kind = Outcome::Reject;
  StateId target = 0;
  ActionId action = 0;
  friend bool operator==(const ConcreteStep&, const ConcreteStep&) = default;
};

/// The concrete transition of a state under one atom. Throws InternalError
/// when two entries match (disjointedness violated).
ConcreteStep concretize(const StateEntries& e, const Atom& atom);

/// All 2^n atoms in lexicographic order (test 0 most significant, false
/// first). Refuses n > limit with InputError.
std::vector<Atom> enumerate_atoms(std::size_t num_tests, std::size_t limit = 16);
/// Number of enumerate_atoms calls made by this process.
std::uint64_t atom_enumeration_count();

/// Explicit concrete automaton, table indexed by Atom::index().
class ConcreteAutomaton {
 public:
  ConcreteAutomaton() = default;
  explicit ConcreteAutomaton(std::size_t num_tests) : num_tests_(num_tests) {}

  StateId add_state();
  void set(StateId s, const Atom& a, ConcreteStep step) { table_.at(s).at(a.index()) = step; }
  const ConcreteStep& at(StateId s, const Atom& a) const { return table_.at(s).at(a.index()); }
  const ConcreteStep& at(StateId s, std::uint64_t atom_index) const { return table_.at(s).at(atom_index); }

  StateId start() const { return start_; }
  void set_start(StateId s) { start_ = s; }
  std::size_t size() const { return table_.size(); }
  std::size_t num_tests() const { return num_tests_; }

 private:
  std::size_t num_tests_ = 0;
  StateId start_ = 0;
  std::vector<std::vector<ConcreteStep>> table_;
};

/// Concretizes every state reachable from the start. Concrete ids are
/// assigned in BFS order; the start state is 0.
ConcreteAutomaton concretize_all(SymbolicAutomaton& a, std::size_t num_tests,
                                 std::vector<StateId>* symbolic_ids = nullptr);

/// Pairwise disjointedness of all guards; returns a description of the
/// first violation.
std::optional<std::string> check_disjoint(const StateEntries& e, SolverHandle& h);
/// rho or any guard covers every atom.
bool check_total_coverage(const StateEntries& e, SolverHandle& h);
/// No stored guard is unsatisfiable.
bool check_no_blocked(const StateEntries& e, SolverHandle& h);

/// One line per reachable state:
/// `state <id> | eps: g,g | delta: (g, action, target)...`
void dump(std::ostream& os, SymbolicAutomaton& a, const Registry* reg = nullptr);

}  // namespace gkat

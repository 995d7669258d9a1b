#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gkat/automata.hpp"
#include "gkat/registry.hpp"
#include "gkat/solver.hpp"

namespace gkat {

enum class Mode { Trace, Bisim };

std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view s);

/// Which check of the decision procedure failed.
enum class Condition {
  LeftKnownDead,   // line 4: s known dead, u live
  RightKnownDead,  // line 6: u known dead, s live
  EpsMismatch,     // line 9: accepting guards differ
  LeftOnly,        // line 10: s moves where u rejects, s' live
  RightOnly,       // line 11: u moves where s rejects, u' live
  ActionMismatch,  // line 12: both move with different actions, one successor live
};

int condition_line(Condition c);
std::string_view condition_name(Condition c);

/// A guarded string: atoms[i] is followed by actions[i] when i < actions.size().
/// In trace mode the witness is a complete guarded string that is a trace of
/// exactly one side; `accepted_by` names that side (0 left, 1 right).
struct Witness {
  std::vector<Atom> atoms;
  std::vector<ActionId> actions;
  Condition condition = Condition::EpsMismatch;
  int accepted_by = -1;
  std::size_t prefix_length = 0;  // steps taken by both sides before the failing pair
};

struct Stats {
  std::size_t states = 0;  // materialized states, both sides
  std::uint64_t solver_queries = 0;
  std::uint64_t dead_checks = 0;
  std::size_t pairs = 0;  // pairs unioned
  std::size_t closure_states = 0;  // distinct states visited by dead checks and witness extension
};

struct Verdict {
  bool equivalent = true;
  std::optional<Witness> witness;
  Stats stats;
};

/// Union-find over (side, state) pairs.
class UnionFind {
 public:
  std::uint32_t find(std::uint64_t key);
  void unite(std::uint64_t a, std::uint64_t b);

 private:
  std::uint32_t index(std::uint64_t key);
  std::unordered_map<std::uint64_t, std::uint32_t> ids_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

/// Mutable context of one top-level symbolic query. Must not be reused.
class CheckSession {
 public:
  CheckSession(SymbolicAutomaton& left, SymbolicAutomaton& right, SolverHandle& h, Mode mode,
               std::size_t num_tests);

  Verdict run();

  /// True iff no accepting state is reachable from s on the given side.
  bool is_dead(int side, StateId s);
  bool known_dead(int side, StateId s) const;

 private:
  struct Frame {
    StateId s, u;
    int parent;
    BExp guard;  // guard of the joint step leading here
    ActionId action;
  };

  SymbolicAutomaton& side(int i) { return i == 0 ? left_ : right_; }
  static std::uint64_t key(int side, StateId s) { return (std::uint64_t(side) << 32) | s; }
  Verdict fail(int frame, Condition c, BExp at, std::optional<ActionId> step_action, int live_side,
               std::optional<StateId> live_state);
  std::vector<std::pair<BExp, ActionId>> path_to_accept(int side, StateId s, BExp& final_eps);
  Stats stats() const;

  SymbolicAutomaton& left_;
  SymbolicAutomaton& right_;
  SolverHandle& h_;
  Mode mode_;
  std::size_t num_tests_;
  UnionFind uf_;
  std::unordered_set<std::uint64_t> dead_;
  std::unordered_set<std::uint64_t> closure_;
  std::vector<Frame> frames_;
  std::uint64_t dead_checks_ = 0;
  std::uint64_t queries_at_start_ = 0;
  std::size_t pairs_ = 0;
};

Verdict equiv_symbolic(SymbolicAutomaton& left, SymbolicAutomaton& right, SolverHandle& h, Mode mode,
                       std::size_t num_tests);

/// The per-atom procedure over explicit concrete automata.
Verdict equiv_concrete(const ConcreteAutomaton& left, const ConcreteAutomaton& right, Mode mode);

/// `EQUIVALENT` or `INEQUIVALENT\nwitness: ...\ncondition: ...`, then an
/// optional stats line `states=<n> solver_queries=<n> dead_checks=<n>`.
std::string serialize(const Verdict& v, const Registry* reg, bool with_witness = true, bool with_stats = false);
std::string format_witness(const Witness& w, const Registry* reg);

}  // namespace gkat

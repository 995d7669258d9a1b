#pragma once

#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gkat/accumulate.hpp"
#include "gkat/automata.hpp"
#include "gkat/solver.hpp"
#include "gkat/syntax.hpp"

namespace gkat {

/// A CF-GKAT automaton state: indicator state and remaining program.
struct CfState {
  IndicatorState pi;
  Exp exp;
  friend bool operator==(const CfState&, const CfState&) = default;
};

}  // namespace gkat

template <>
struct std::hash<gkat::CfState> {
  std::size_t operator()(const gkat::CfState& s) const noexcept {
    return s.pi.hash() * 0x9e3779b97f4a7c15ull ^ s.exp.hash();
  }
};

namespace gkat {

struct CfEps {
  BExp guard;
  Continuation cont;
};

struct CfDelta {
  BExp guard;
  CfState target;
  ActionId action;
};

struct CfEntries {
  std::vector<CfEps> eps;
  std::vector<CfDelta> delta;
};

/// Symbolic CF-GKAT derivatives. Blocked entries are pruned with the
/// session's solver handle. Results are memoized per (pi, e).
class CfDerivatives {
 public:
  explicit CfDerivatives(SolverHandle& h) : h_(h) {}

  const CfEntries& step(const IndicatorState& pi, Exp e);
  CfEntries loop_step(const IndicatorState& pi, Exp body, BExp b);

  /// b[pi], computed through the fresh-variable encoding.
  BExp resolve_guard(BExp b, const IndicatorState& pi);

  SolverHandle& handle() { return h_; }
  std::size_t cache_size() const { return cache_.size(); }
  const AccuStats& loop_stats() const { return loop_stats_; }

 private:
  CfEntries compute(const IndicatorState& pi, Exp e);
  bool live(BExp g) { return !h_.is_zero(g); }
  // Appends the entries of (pi, f) guarded by b.
  void continue_into(CfEntries& out, BExp b, const IndicatorState& pi, Exp f);

  SolverHandle& h_;
  std::unordered_map<CfState, CfEntries> cache_;
  AccuStats loop_stats_;
};

struct GkatDelta {
  BExp guard;
  Exp target;
  ActionId action;
};

struct GkatEntries {
  std::vector<BExp> eps;
  std::vector<GkatDelta> delta;
};

/// Symbolic GKAT derivatives, memoized per expression.
class GkatDerivatives {
 public:
  explicit GkatDerivatives(SolverHandle& h) : h_(h) {}
  /// Throws InputError on constructs outside the GKAT fragment.
  const GkatEntries& step(Exp e);

 private:
  GkatEntries compute(Exp e);
  bool live(BExp g) { return !h_.is_zero(g); }

  SolverHandle& h_;
  std::unordered_map<Exp, GkatEntries> cache_;
};

/// One-shot helper over a fresh memo table.
GkatEntries gkat_step(Exp e, SolverHandle& h);
CfEntries cf_step(const IndicatorState& pi, Exp e, SolverHandle& h);

struct InvariantOptions {
  bool check = false;  // disjointedness, coverage and no-blocked on every state
};

/// Process-wide count of states whose invariants were checked.
std::uint64_t invariant_checks();

/// Lazily built symbolic GKAT automaton of a GKAT expression.
class GkatAutomaton final : public SymbolicAutomaton {
 public:
  GkatAutomaton(Exp e, SolverHandle& h, InvariantOptions opt = {});

  StateId start() override { return 0; }
  const StateEntries& entries(StateId s) override;
  std::size_t materialized() const override { return materialized_; }
  std::string describe(StateId s) const override;
  std::size_t known_states() const { return states_.size(); }
  Exp state(StateId s) const { return states_.at(s); }

 private:
  StateId intern(Exp e);

  SolverHandle& h_;
  GkatDerivatives deriv_;
  InvariantOptions opt_;
  std::vector<Exp> states_;
  std::unordered_map<Exp, StateId> ids_;
  std::deque<StateEntries> entries_;
  std::vector<char> done_;
  std::size_t materialized_ = 0;
};

/// Resolved entries of a CF-GKAT state (jumps connected to their labels).
struct ResolvedEntries {
  std::vector<BExp> eps;
  std::vector<CfDelta> delta;
};

/// Lazily built symbolic GKAT automaton <pi, e> with jumps resolved.
class CfgkatAutomaton final : public SymbolicAutomaton {
 public:
  CfgkatAutomaton(const Program& p, IndicatorState start, SolverHandle& h, InvariantOptions opt = {});

  StateId start() override { return 0; }
  const StateEntries& entries(StateId s) override;
  std::size_t materialized() const override { return materialized_; }
  std::string describe(StateId s) const override;
  std::size_t known_states() const { return states_.size(); }
  const CfState& state(StateId s) const { return states_.at(s); }

  ResolvedEntries resolve_jumps(const CfState& s);
  CfDerivatives& derivatives() { return deriv_; }
  /// Jump-resolution accumulate calls (instrumentation).
  const AccuStats& jump_stats() const { return jump_stats_; }

 private:
  StateId intern(const CfState& s);
  Exp extracted(LabelId l);

  const Program& prog_;
  SolverHandle& h_;
  CfDerivatives deriv_;
  InvariantOptions opt_;
  std::vector<CfState> states_;
  std::unordered_map<CfState, StateId> ids_;
  std::deque<StateEntries> entries_;
  std::vector<char> done_;
  std::unordered_map<LabelId, Exp> labels_;
  std::size_t materialized_ = 0;
  AccuStats jump_stats_;
};

}  // namespace gkat

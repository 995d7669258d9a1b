#pragma once

#include <cstdint>
#include <vector>

namespace gkat::detail {

/// Literal encoding: 2*var for the positive literal, 2*var+1 for its negation.
using Lit = std::int32_t;

inline Lit pos_lit(int var) { return 2 * var; }
inline Lit neg_lit(int var) { return 2 * var + 1; }
inline Lit negate(Lit l) { return l ^ 1; }
inline int lit_var(Lit l) { return l >> 1; }

/// Small conflict-driven clause-learning SAT solver: two watched literals,
/// first-UIP learning, VSIDS branching with phase saving, Luby restarts.
/// Not incremental; build one instance per query.
class CdclSolver {
 public:
  int new_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }

  /// Adds a clause; duplicate and complementary literals are handled.
  void add_clause(std::vector<Lit> lits);

  bool solve();
  bool model_value(int var) const { return model_[var] > 0; }

  std::uint64_t conflicts() const { return conflicts_; }

 private:
  std::int8_t value(Lit l) const {
    const std::int8_t v = assign_[lit_var(l)];
    return (l & 1) ? static_cast<std::int8_t>(-v) : v;
  }
  void enqueue(Lit l, int reason);
  int propagate();  // index of conflicting clause or -1
  void analyze(int conflict, std::vector<Lit>& learnt, int& backtrack_level);
  void backtrack(int level);
  int pick_branch_var();
  void bump(int var);
  void heap_insert(int var);
  void heap_up(int pos);
  void heap_down(int pos);
  int heap_pop();
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal
  std::vector<std::int8_t> assign_;        // +1 true, -1 false, 0 unassigned
  std::vector<std::int8_t> model_;
  std::vector<std::int8_t> phase_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<char> seen_;
  bool unsat_ = false;
  std::uint64_t conflicts_ = 0;
};

}  // namespace gkat::detail

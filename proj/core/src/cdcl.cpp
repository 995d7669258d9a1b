#include "gkat/detail/cdcl.hpp"

#include <algorithm>

namespace gkat::detail {

namespace {

// Luby sequence 1,1,2,1,1,2,4,...
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return std::uint64_t{1} << seq;
}

}  // namespace

int CdclSolver::new_var() {
  const int v = num_vars();
  assign_.push_back(0);
  phase_.push_back(-1);
  level_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0.0);
  seen_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void CdclSolver::add_clause(std::vector<Lit> lits) {
  if (unsat_) return;
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i] == negate(lits[i - 1])) return;  // tautology
  // Clauses are only added at level 0 before solving.
  std::vector<Lit> kept;
  for (Lit l : lits) {
    const auto v = value(l);
    if (v > 0) return;
    if (v == 0) kept.push_back(l);
  }
  if (kept.empty()) {
    unsat_ = true;
    return;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) unsat_ = true;
    return;
  }
  const int idx = static_cast<int>(clauses_.size());
  watches_[kept[0]].push_back(idx);
  watches_[kept[1]].push_back(idx);
  clauses_.push_back(std::move(kept));
}

void CdclSolver::enqueue(Lit l, int reason) {
  const int v = lit_var(l);
  assign_[v] = (l & 1) ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

int CdclSolver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = negate(p);
    std::vector<int>& ws = watches_[false_lit];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const int ci = ws[i++];
      std::vector<Lit>& c = clauses_[ci];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) > 0) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) >= 0) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (value(c[0]) < 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        return ci;
      }
      enqueue(c[0], ci);
    }
    ws.resize(j);
  }
  return -1;
}

void CdclSolver::bump(int var) {
  activity_[var] += var_inc_;
  if (activity_[var] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[var] >= 0) heap_up(heap_pos_[var]);
}

void CdclSolver::analyze(int conflict, std::vector<Lit>& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(0);  // placeholder for the asserting literal
  int counter = 0;
  Lit p = -1;
  int index = static_cast<int>(trail_.size()) - 1;
  int ci = conflict;
  do {
    const std::vector<Lit>& c = clauses_[ci];
    for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
      const Lit q = c[k];
      const int v = lit_var(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump(v);
      if (level_[v] >= decision_level()) ++counter;
      else learnt.push_back(q);
    }
    while (!seen_[lit_var(trail_[index])]) --index;
    p = trail_[index--];
    ci = reason_[lit_var(p)];
    seen_[lit_var(p)] = 0;
    --counter;
  } while (counter > 0);
  learnt[0] = negate(p);

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k)
      if (level_[lit_var(learnt[k])] > level_[lit_var(learnt[max_i])]) max_i = k;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[lit_var(learnt[1])];
  }
  for (std::size_t k = 1; k < learnt.size(); ++k) seen_[lit_var(learnt[k])] = 0;
  var_inc_ /= 0.95;
}

void CdclSolver::backtrack(int level) {
  if (decision_level() <= level) return;
  for (int k = static_cast<int>(trail_.size()) - 1; k >= trail_lim_[level]; --k) {
    const int v = lit_var(trail_[k]);
    phase_[v] = assign_[v];
    assign_[v] = 0;
    reason_[v] = -1;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

void CdclSolver::heap_insert(int var) {
  heap_pos_[var] = static_cast<int>(heap_.size());
  heap_.push_back(var);
  heap_up(heap_pos_[var]);
}

void CdclSolver::heap_up(int pos) {
  const int var = heap_[pos];
  while (pos > 0) {
    const int parent = (pos - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[var]) break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = pos;
    pos = parent;
  }
  heap_[pos] = var;
  heap_pos_[var] = pos;
}

void CdclSolver::heap_down(int pos) {
  const int var = heap_[pos];
  const int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[var]) break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = pos;
    pos = child;
  }
  heap_[pos] = var;
  heap_pos_[var] = pos;
}

int CdclSolver::heap_pop() {
  const int top = heap_[0];
  heap_pos_[top] = -1;
  const int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

int CdclSolver::pick_branch_var() {
  while (!heap_.empty()) {
    const int v = heap_pop();
    if (assign_[v] == 0) return v;
  }
  return -1;
}

bool CdclSolver::solve() {
  if (unsat_) return false;
  if (propagate() >= 0) return false;
  std::uint64_t restart_index = 0;
  std::uint64_t budget = 100 * luby(restart_index);
  std::uint64_t since_restart = 0;
  std::vector<Lit> learnt;
  for (;;) {
    const int conflict = propagate();
    if (conflict >= 0) {
      ++conflicts_;
      ++since_restart;
      if (decision_level() == 0) return false;
      int bt = 0;
      analyze(conflict, learnt, bt);
      backtrack(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        const int idx = static_cast<int>(clauses_.size());
        watches_[learnt[0]].push_back(idx);
        watches_[learnt[1]].push_back(idx);
        clauses_.push_back(learnt);
        enqueue(learnt[0], idx);
      }
      continue;
    }
    if (since_restart >= budget) {
      backtrack(0);
      since_restart = 0;
      budget = 100 * luby(++restart_index);
    }
    const int v = pick_branch_var();
    if (v < 0) {
      model_ = assign_;
      return true;
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(phase_[v] > 0 ? pos_lit(v) : neg_lit(v), -1);
  }
}

}  // namespace gkat::detail

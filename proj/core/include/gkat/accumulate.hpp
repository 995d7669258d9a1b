#pragma once

#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gkat/bexp.hpp"

namespace gkat {

/// res: results computed in one step from an input.
/// con: next inputs, each paired with the guard b of the transformer <b|.
/// prepend: applies <b| to a result.
/// keep: filters results after prepending (blocked-entry pruning); optional.
template <class Input, class Result>
struct AccuProblem {
  std::function<std::vector<Result>(const Input&)> res;
  std::function<std::vector<std::pair<Input, BExp>>(const Input&)> con;
  std::function<Result(BExp, const Result&)> prepend;
  std::function<bool(const Result&)> keep;
};

struct AccuStats {
  std::size_t calls = 0;
  std::size_t cuts = 0;
  std::size_t memo_hits = 0;
};

namespace detail {

template <class Input, class Result, class Hash>
class Accumulator {
 public:
  Accumulator(const AccuProblem<Input, Result>& p, AccuStats* stats) : p_(p), stats_(stats) {}

  // accu'(n, M): returns the results and whether the recursion hit M.
  std::pair<std::vector<Result>, bool> run(const Input& n) {
    if (stats_) ++stats_->calls;
    if (path_.count(n)) {
      if (stats_) ++stats_->cuts;
      return {{}, true};
    }
    if (auto it = memo_.find(n); it != memo_.end()) {
      if (stats_) ++stats_->memo_hits;
      return {it->second, false};
    }
    std::vector<Result> out = p_.res(n);
    bool cut = false;
    path_.insert(n);
    for (auto& [next, b] : p_.con(n)) {
      auto [sub, sub_cut] = run(next);
      cut = cut || sub_cut;
      for (const Result& r : sub) {
        Result g = p_.prepend(b, r);
        if (!p_.keep || p_.keep(g)) out.push_back(std::move(g));
      }
    }
    path_.erase(n);
    if (!cut) memo_.emplace(n, out);
    return {std::move(out), cut};
  }

 private:
  const AccuProblem<Input, Result>& p_;
  AccuStats* stats_;
  std::unordered_set<Input, Hash> path_;
  std::unordered_map<Input, std::vector<Result>, Hash> memo_;
};

}  // namespace detail

/// accu'(n, {}): res(n) together with h(r) for every (n', h) in con(n) and
/// r in accu'(n', M + {n}); returns nothing for inputs already on the path.
/// Subresults whose recursion never hit the path set are memoized.
template <class Input, class Result, class Hash = std::hash<Input>>
std::vector<Result> accumulate(const AccuProblem<Input, Result>& p, const Input& n, AccuStats* stats = nullptr) {
  detail::Accumulator<Input, Result, Hash> acc(p, stats);
  return acc.run(n).first;
}

}  // namespace gkat

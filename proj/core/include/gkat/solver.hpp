#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gkat/bexp.hpp"

namespace gkat {

enum class BackendKind { Sat, Bdd };

std::string_view backend_name(BackendKind kind);
BackendKind parse_backend(std::string_view name);  // "sat" | "bdd", InputError otherwise

/// One-shot satisfiability oracle over pure expressions.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string_view name() const = 0;
  virtual bool check_sat(BExp b) = 0;
};

std::unique_ptr<SolverBackend> make_backend(BackendKind kind);

/// An indicator constraint `x == i`.
struct IndicatorConstraint {
  VarId var;
  Value value;
  friend bool operator==(const IndicatorConstraint&, const IndicatorConstraint&) = default;
};

struct EncodedBExp {
  BExp formula;  // pure; fresh tests stand for indicator constraints
  std::vector<std::pair<IndicatorConstraint, TestId>> table;
};

/// Session-scoped solver context: backend, fresh-variable table for
/// indicator constraints, and query caches. Confined to one thread.
class SolverHandle {
 public:
  explicit SolverHandle(BackendKind kind = BackendKind::Sat);
  ~SolverHandle();
  SolverHandle(const SolverHandle&) = delete;
  SolverHandle& operator=(const SolverHandle&) = delete;

  BackendKind kind() const { return kind_; }
  std::string_view backend_name() const;

  /// b is unsatisfiable. b must be pure (or encoded).
  bool is_zero(BExp b);
  /// b <-> a is valid, decided as one UNSAT query on (b & !a) | (!b & a).
  bool equiv(BExp b, BExp a);
  /// b & a is satisfiable.
  bool overlaps(BExp b, BExp a);

  /// Lexicographically least satisfying atom over `num_tests` tests
  /// (false < true, test 0 most significant), or nullopt when unsatisfiable.
  std::optional<Atom> least_model(BExp b, std::size_t num_tests);

  EncodedBExp encode_indicators(BExp b);
  /// Fresh variable assigned to `x == i`, allocating one on first use.
  TestId fresh_for(IndicatorConstraint c);

  std::uint64_t queries() const { return queries_; }
  std::uint64_t cache_hits() const { return cache_hits_; }

 private:
  BackendKind kind_;
  std::unique_ptr<SolverBackend> backend_;
  std::unordered_map<std::uint64_t, TestId> fresh_;  // packed (var, value) -> fresh test
  std::unordered_map<std::uint64_t, bool> zero_cache_;
  std::unordered_map<std::uint64_t, EncodedBExp> encode_cache_;
  std::uint64_t queries_ = 0;
  std::uint64_t cache_hits_ = 0;
};

/// Finds which guards of a list overlap a query guard by halving: one
/// query per range whose disjunction overlaps, instead of one per guard.
class GuardIndex {
 public:
  explicit GuardIndex(std::vector<BExp> guards);

  /// Ascending indices i with overlaps(g, guards[i]).
  std::vector<std::size_t> overlapping(SolverHandle& h, BExp g) const;
  std::size_t size() const { return n_; }

 private:
  BExp build(std::size_t node, std::size_t lo, std::size_t hi, const std::vector<BExp>& guards);
  void search(SolverHandle& h, BExp g, std::size_t node, std::size_t lo, std::size_t hi,
              std::vector<std::size_t>& out) const;

  std::size_t n_;
  std::vector<BExp> tree_;  // disjunction of each range, heap layout
};

/// Substitutes every fresh variable in `enc.table` by One or Zero under pi.
/// Throws InternalError when the formula mentions a fresh variable the
/// table does not cover.
BExp instantiate_encoded(const EncodedBExp& enc, const IndicatorState& pi);

}  // namespace gkat

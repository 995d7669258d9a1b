#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gkat/errors.hpp"

namespace gkat {

using TestId = std::uint32_t;
using VarId = std::uint32_t;
using Value = std::int32_t;
using ActionId = std::uint32_t;
using LabelId = std::uint32_t;

/// Test ids at or above this bound are fresh solver variables standing for
/// indicator constraints; they never collide with registered primitive tests.
inline constexpr TestId kFreshTestBase = 0x80000000u;

inline bool is_fresh_test(TestId t) { return t >= kFreshTestBase; }

struct BExpNode;

/// Boolean expression over primitive tests and indicator tests `x == i`.
///
/// Values are hash-consed: two structurally equal expressions share one node,
/// so `==` is a pointer comparison. Construction through `conj`, `disj` and
/// `neg` applies constant folding only (0 & b = 0, 1 & b = b and duals).
class BExp {
 public:
  enum class Kind : std::uint8_t { Zero, One, Test, Ind, And, Or, Not };

  BExp();  // Zero

  static BExp zero();
  static BExp one();
  static BExp test(TestId t);
  static BExp ind(VarId x, Value i);

  Kind kind() const;
  bool is_zero_const() const { return kind() == Kind::Zero; }
  bool is_one_const() const { return kind() == Kind::One; }

  /// True when the expression contains no indicator test.
  bool is_pure() const;

  TestId test_id() const;
  VarId var() const;
  Value value() const;
  BExp lhs() const;
  BExp rhs() const;
  BExp operand() const;

  std::uint64_t id() const;
  std::size_t hash() const;
  std::size_t size() const;  // number of DAG-unfolded nodes, saturating

  friend bool operator==(BExp a, BExp b) { return a.node_ == b.node_; }
  friend bool operator!=(BExp a, BExp b) { return a.node_ != b.node_; }

  const BExpNode* node() const { return node_; }

 private:
  explicit BExp(const BExpNode* n) : node_(n) {}
  friend BExp make_bexp(BExp::Kind, std::uint32_t, std::int32_t, const BExpNode*,
                        const BExpNode*);
  const BExpNode* node_;
};

BExp conj(BExp a, BExp b);
BExp disj(BExp a, BExp b);
BExp neg(BExp a);

/// Unfolded constructors, used where a test needs the literal shape.
BExp raw_and(BExp a, BExp b);
BExp raw_or(BExp a, BExp b);
BExp raw_not(BExp a);

BExp conj_all(const std::vector<BExp>& xs);
BExp disj_all(const std::vector<BExp>& xs);

/// Number of distinct BExp nodes ever interned in this process.
std::size_t bexp_intern_count();

/// Total truth assignment over the registered tests `0..size()-1`.
class Atom {
 public:
  Atom() = default;
  explicit Atom(std::size_t num_tests) : bits_(num_tests, false) {}
  static Atom from_index(std::size_t num_tests, std::uint64_t index);

  std::size_t size() const { return bits_.size(); }
  bool operator[](TestId t) const { return t < bits_.size() && bits_[t]; }
  void set(TestId t, bool v) { bits_.at(t) = v; }
  std::uint64_t index() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  /// Lexicographic order with false < true, lowest test id most significant.
  friend bool operator<(const Atom& a, const Atom& b) { return a.bits_ < b.bits_; }

 private:
  std::vector<bool> bits_;
};

/// Evaluates a pure expression under an atom.
bool eval(BExp b, const Atom& atom);

/// Total map from declared indicator variables to values.
class IndicatorState {
 public:
  IndicatorState() = default;
  explicit IndicatorState(std::size_t num_vars, Value init = 0) : values_(num_vars, init) {}
  explicit IndicatorState(std::vector<Value> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool declared(VarId x) const { return x < values_.size(); }
  Value at(VarId x) const;
  const std::vector<Value>& values() const { return values_; }
  std::size_t hash() const;

  friend bool operator==(const IndicatorState&, const IndicatorState&) = default;

 private:
  std::vector<Value> values_;
};

/// pi[x -> i]; throws InputError when x is undeclared.
IndicatorState reassign(const IndicatorState& pi, VarId x, Value i);

/// b[pi]: every `x == i` becomes One when pi(x) == i and Zero otherwise.
BExp resolve(BExp b, const IndicatorState& pi);

/// Sorted, distinct tests occurring in b (fresh variables included).
std::vector<TestId> support(BExp b);

/// Renders with `!`, `&`, `|`; names come from the callbacks when given.
std::string to_string(BExp b, const std::function<std::string(TestId)>& test_name = {},
                      const std::function<std::string(VarId)>& var_name = {});
std::ostream& operator<<(std::ostream& os, BExp b);

}  // namespace gkat

template <>
struct std::hash<gkat::BExp> {
  std::size_t operator()(gkat::BExp b) const noexcept { return b.hash(); }
};

template <>
struct std::hash<gkat::IndicatorState> {
  std::size_t operator()(const gkat::IndicatorState& s) const noexcept { return s.hash(); }
};

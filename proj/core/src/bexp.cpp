#include "gkat/bexp.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace gkat {

struct BExpNode {
  BExp::Kind kind;
  bool pure;
  std::uint32_t a;
  std::int32_t b;
  const BExpNode* l;
  const BExpNode* r;
  std::size_t hash;
  std::uint64_t id;
  std::size_t size;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

struct NodeHash {
  std::size_t operator()(const BExpNode* n) const { return n->hash; }
};
struct NodeEq {
  bool operator()(const BExpNode* x, const BExpNode* y) const {
    return x->kind == y->kind && x->a == y->a && x->b == y->b && x->l == y->l && x->r == y->r;
  }
};

class InternTable {
 public:
  const BExpNode* intern(BExp::Kind kind, std::uint32_t a, std::int32_t b, const BExpNode* l,
                         const BExpNode* r) {
    BExpNode key{kind, true, a, b, l, r, 0, 0, 0};
    std::size_t h = mix(static_cast<std::size_t>(kind), a);
    h = mix(h, static_cast<std::size_t>(static_cast<std::uint32_t>(b)));
    h = mix(h, l ? l->hash : 0);
    h = mix(h, r ? r->hash : 0);
    key.hash = h;
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = set_.find(&key); it != set_.end()) return *it;
    key.pure = kind != BExp::Kind::Ind && (!l || l->pure) && (!r || r->pure);
    constexpr std::size_t cap = std::size_t{1} << 40;
    key.size = std::min(cap, 1 + (l ? l->size : 0) + (r ? r->size : 0));
    key.id = nodes_.size();
    nodes_.push_back(key);
    const BExpNode* stored = &nodes_.back();
    set_.insert(stored);
    return stored;
  }

  std::size_t count() {
    std::lock_guard<std::mutex> lock(mu_);
    return nodes_.size();
  }

 private:
  std::mutex mu_;
  std::deque<BExpNode> nodes_;
  std::unordered_set<const BExpNode*, NodeHash, NodeEq> set_;
};

InternTable& table() {
  static InternTable t;
  return t;
}

const BExpNode* zero_node() {
  static const BExpNode* n = table().intern(BExp::Kind::Zero, 0, 0, nullptr, nullptr);
  return n;
}
const BExpNode* one_node() {
  static const BExpNode* n = table().intern(BExp::Kind::One, 0, 0, nullptr, nullptr);
  return n;
}

}  // namespace

BExp make_bexp(BExp::Kind kind, std::uint32_t a, std::int32_t b, const BExpNode* l,
               const BExpNode* r) {
  return BExp(table().intern(kind, a, b, l, r));
}

BExp::BExp() : node_(zero_node()) {}
BExp BExp::zero() { return BExp(zero_node()); }
BExp BExp::one() { return BExp(one_node()); }
BExp BExp::test(TestId t) { return make_bexp(Kind::Test, t, 0, nullptr, nullptr); }
BExp BExp::ind(VarId x, Value i) { return make_bexp(Kind::Ind, x, i, nullptr, nullptr); }

BExp::Kind BExp::kind() const { return node_->kind; }
bool BExp::is_pure() const { return node_->pure; }
TestId BExp::test_id() const { return node_->a; }
VarId BExp::var() const { return node_->a; }
Value BExp::value() const { return node_->b; }
BExp BExp::lhs() const { return BExp(node_->l); }
BExp BExp::rhs() const { return BExp(node_->r); }
BExp BExp::operand() const { return BExp(node_->l); }
std::uint64_t BExp::id() const { return node_->id; }
std::size_t BExp::hash() const { return node_->hash; }
std::size_t BExp::size() const { return node_->size; }

BExp raw_and(BExp a, BExp b) { return make_bexp(BExp::Kind::And, 0, 0, a.node(), b.node()); }
BExp raw_or(BExp a, BExp b) { return make_bexp(BExp::Kind::Or, 0, 0, a.node(), b.node()); }
BExp raw_not(BExp a) { return make_bexp(BExp::Kind::Not, 0, 0, a.node(), nullptr); }

BExp conj(BExp a, BExp b) {
  if (a.is_zero_const() || b.is_zero_const()) return BExp::zero();
  if (a.is_one_const()) return b;
  if (b.is_one_const()) return a;
  return raw_and(a, b);
}

BExp disj(BExp a, BExp b) {
  if (a.is_one_const() || b.is_one_const()) return BExp::one();
  if (a.is_zero_const()) return b;
  if (b.is_zero_const()) return a;
  return raw_or(a, b);
}

BExp neg(BExp a) {
  if (a.is_zero_const()) return BExp::one();
  if (a.is_one_const()) return BExp::zero();
  return raw_not(a);
}

BExp conj_all(const std::vector<BExp>& xs) {
  BExp acc = BExp::one();
  for (BExp x : xs) acc = conj(acc, x);
  return acc;
}

BExp disj_all(const std::vector<BExp>& xs) {
  BExp acc = BExp::zero();
  for (BExp x : xs) acc = disj(acc, x);
  return acc;
}

std::size_t bexp_intern_count() { return table().count(); }

Atom Atom::from_index(std::size_t num_tests, std::uint64_t index) {
  Atom a(num_tests);
  for (std::size_t t = 0; t < num_tests && t < 64; ++t) a.bits_[t] = (index >> t) & 1u;
  return a;
}

std::uint64_t Atom::index() const {
  std::uint64_t idx = 0;
  for (std::size_t t = 0; t < bits_.size() && t < 64; ++t)
    if (bits_[t]) idx |= std::uint64_t{1} << t;
  return idx;
}

bool eval(BExp b, const Atom& atom) {
  switch (b.kind()) {
    case BExp::Kind::Zero: return false;
    case BExp::Kind::One: return true;
    case BExp::Kind::Test: return atom[b.test_id()];
    case BExp::Kind::Ind:
      throw InternalError("eval: indicator test in a guard that should be pure");
    case BExp::Kind::And: return eval(b.lhs(), atom) && eval(b.rhs(), atom);
    case BExp::Kind::Or: return eval(b.lhs(), atom) || eval(b.rhs(), atom);
    case BExp::Kind::Not: return !eval(b.operand(), atom);
  }
  return false;
}

Value IndicatorState::at(VarId x) const {
  if (!declared(x)) throw InputError("undeclared indicator variable #" + std::to_string(x));
  return values_[x];
}

std::size_t IndicatorState::hash() const {
  std::size_t h = values_.size();
  for (Value v : values_) h = mix(h, static_cast<std::size_t>(static_cast<std::uint32_t>(v)));
  return h;
}

IndicatorState reassign(const IndicatorState& pi, VarId x, Value i) {
  if (!pi.declared(x)) throw InputError("reassign: undeclared indicator variable #" + std::to_string(x));
  std::vector<Value> v = pi.values();
  v[x] = i;
  return IndicatorState(std::move(v));
}

namespace {

BExp resolve_rec(BExp b, const IndicatorState& pi, std::unordered_map<const BExpNode*, BExp>& memo) {
  if (b.is_pure()) return b;
  if (auto it = memo.find(b.node()); it != memo.end()) return it->second;
  BExp out;
  switch (b.kind()) {
    case BExp::Kind::Ind: out = pi.at(b.var()) == b.value() ? BExp::one() : BExp::zero(); break;
    case BExp::Kind::And: out = conj(resolve_rec(b.lhs(), pi, memo), resolve_rec(b.rhs(), pi, memo)); break;
    case BExp::Kind::Or: out = disj(resolve_rec(b.lhs(), pi, memo), resolve_rec(b.rhs(), pi, memo)); break;
    case BExp::Kind::Not: out = neg(resolve_rec(b.operand(), pi, memo)); break;
    default: out = b; break;
  }
  memo.emplace(b.node(), out);
  return out;
}

void support_rec(BExp b, std::unordered_set<const BExpNode*>& seen, std::vector<TestId>& out) {
  if (!seen.insert(b.node()).second) return;
  switch (b.kind()) {
    case BExp::Kind::Test: out.push_back(b.test_id()); break;
    case BExp::Kind::And:
    case BExp::Kind::Or:
      support_rec(b.lhs(), seen, out);
      support_rec(b.rhs(), seen, out);
      break;
    case BExp::Kind::Not: support_rec(b.operand(), seen, out); break;
    default: break;
  }
}

void print_rec(std::ostream& os, BExp b, int parent_prec,
               const std::function<std::string(TestId)>& test_name,
               const std::function<std::string(VarId)>& var_name) {
  switch (b.kind()) {
    case BExp::Kind::Zero: os << '0'; return;
    case BExp::Kind::One: os << '1'; return;
    case BExp::Kind::Test:
      if (test_name) os << test_name(b.test_id());
      else if (is_fresh_test(b.test_id())) os << "f" << (b.test_id() - kFreshTestBase);
      else os << 't' << b.test_id();
      return;
    case BExp::Kind::Ind:
      os << (var_name ? var_name(b.var()) : "x" + std::to_string(b.var())) << "==" << b.value();
      return;
    case BExp::Kind::Not:
      os << '!';
      print_rec(os, b.operand(), 3, test_name, var_name);
      return;
    case BExp::Kind::And:
    case BExp::Kind::Or: {
      const int prec = b.kind() == BExp::Kind::And ? 2 : 1;
      if (prec < parent_prec) os << '(';
      print_rec(os, b.lhs(), prec, test_name, var_name);
      os << (prec == 2 ? " & " : " | ");
      print_rec(os, b.rhs(), prec + 1, test_name, var_name);
      if (prec < parent_prec) os << ')';
      return;
    }
  }
}

}  // namespace

BExp resolve(BExp b, const IndicatorState& pi) {
  std::unordered_map<const BExpNode*, BExp> memo;
  return resolve_rec(b, pi, memo);
}

std::vector<TestId> support(BExp b) {
  std::unordered_set<const BExpNode*> seen;
  std::vector<TestId> out;
  support_rec(b, seen, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string to_string(BExp b, const std::function<std::string(TestId)>& test_name,
                      const std::function<std::string(VarId)>& var_name) {
  std::ostringstream os;
  print_rec(os, b, 0, test_name, var_name);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, BExp b) { return os << to_string(b); }

}  // namespace gkat

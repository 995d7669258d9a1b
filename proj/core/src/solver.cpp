#include "gkat/solver.hpp"

#include <algorithm>
#include <unordered_set>

#include "gkat/detail/bdd.hpp"
#include "gkat/detail/cdcl.hpp"

namespace gkat {

namespace {

class SatBackend final : public SolverBackend {
 public:
  std::string_view name() const override { return "sat"; }

  bool check_sat(BExp b) override {
    if (b.is_zero_const()) return false;
    if (b.is_one_const()) return true;
    detail::CdclSolver s;
    std::unordered_map<const BExpNode*, detail::Lit> lits;
    std::unordered_map<TestId, int> vars;
    const detail::Lit root = encode(b, s, lits, vars);
    s.add_clause({root});
    return s.solve();
  }

 private:
  // Tseitin encoding, shared subterms encoded once.
  static detail::Lit encode(BExp b, detail::CdclSolver& s,
                            std::unordered_map<const BExpNode*, detail::Lit>& lits,
                            std::unordered_map<TestId, int>& vars) {
    using detail::negate;
    if (auto it = lits.find(b.node()); it != lits.end()) return it->second;
    detail::Lit out = 0;
    switch (b.kind()) {
      case BExp::Kind::Zero:
      case BExp::Kind::One: {
        const int v = s.new_var();
        s.add_clause({b.is_one_const() ? detail::pos_lit(v) : detail::neg_lit(v)});
        out = detail::pos_lit(v);
        break;
      }
      case BExp::Kind::Test: {
        auto [it, fresh] = vars.emplace(b.test_id(), 0);
        if (fresh) it->second = s.new_var();
        out = detail::pos_lit(it->second);
        break;
      }
      case BExp::Kind::Ind:
        throw InternalError("sat backend: indicator test reached the solver");
      case BExp::Kind::Not:
        out = negate(encode(b.operand(), s, lits, vars));
        break;
      case BExp::Kind::And:
      case BExp::Kind::Or: {
        const detail::Lit x = encode(b.lhs(), s, lits, vars);
        const detail::Lit y = encode(b.rhs(), s, lits, vars);
        const detail::Lit g = detail::pos_lit(s.new_var());
        if (b.kind() == BExp::Kind::And) {
          s.add_clause({negate(g), x});
          s.add_clause({negate(g), y});
          s.add_clause({g, negate(x), negate(y)});
        } else {
          s.add_clause({g, negate(x)});
          s.add_clause({g, negate(y)});
          s.add_clause({negate(g), x, y});
        }
        out = g;
        break;
      }
    }
    lits.emplace(b.node(), out);
    return out;
  }
};

class BddBackend final : public SolverBackend {
 public:
  std::string_view name() const override { return "bdd"; }

  bool check_sat(BExp b) override { return builder_.build(b) != detail::BddManager::kFalse; }

 private:
  struct Builder {
    detail::BddManager mgr;
    std::unordered_map<TestId, std::uint32_t> levels;
    std::unordered_map<const BExpNode*, detail::BddManager::Node> cache;

    detail::BddManager::Node build(BExp b) {
      if (auto it = cache.find(b.node()); it != cache.end()) return it->second;
      detail::BddManager::Node out = detail::BddManager::kFalse;
      switch (b.kind()) {
        case BExp::Kind::Zero: out = detail::BddManager::kFalse; break;
        case BExp::Kind::One: out = detail::BddManager::kTrue; break;
        case BExp::Kind::Test: {
          auto [it, fresh] = levels.emplace(b.test_id(), 0);
          if (fresh) it->second = static_cast<std::uint32_t>(levels.size() - 1);
          out = mgr.var(it->second);
          break;
        }
        case BExp::Kind::Ind:
          throw InternalError("bdd backend: indicator test reached the solver");
        case BExp::Kind::Not: out = mgr.lnot(build(b.operand())); break;
        case BExp::Kind::And: {
          const auto l = build(b.lhs());
          out = l == detail::BddManager::kFalse ? l : mgr.land(l, build(b.rhs()));
          break;
        }
        case BExp::Kind::Or: {
          const auto l = build(b.lhs());
          out = l == detail::BddManager::kTrue ? l : mgr.lor(l, build(b.rhs()));
          break;
        }
      }
      cache.emplace(b.node(), out);
      return out;
    }
  };

  Builder builder_;
};

std::uint64_t pack(IndicatorConstraint c) {
  return (std::uint64_t{c.var} << 32) | static_cast<std::uint32_t>(c.value);
}

}  // namespace

std::string_view backend_name(BackendKind kind) {
  return kind == BackendKind::Sat ? "sat" : "bdd";
}

BackendKind parse_backend(std::string_view name) {
  if (name == "sat") return BackendKind::Sat;
  if (name == "bdd") return BackendKind::Bdd;
  throw InputError("unknown solver backend '" + std::string(name) + "' (expected sat or bdd)");
}

std::unique_ptr<SolverBackend> make_backend(BackendKind kind) {
  if (kind == BackendKind::Sat) return std::make_unique<SatBackend>();
  return std::make_unique<BddBackend>();
}

SolverHandle::SolverHandle(BackendKind kind) : kind_(kind), backend_(make_backend(kind)) {}
SolverHandle::~SolverHandle() = default;

std::string_view SolverHandle::backend_name() const { return backend_->name(); }

bool SolverHandle::is_zero(BExp b) {
  if (b.is_zero_const()) return true;
  if (b.is_one_const()) return false;
  if (!b.is_pure()) throw InternalError("is_zero: expression contains indicator tests; resolve or encode first");
  if (auto it = zero_cache_.find(b.id()); it != zero_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  ++queries_;
  bool sat = false;
  try {
    sat = backend_->check_sat(b);
  } catch (const SolverError&) {
    throw;
  } catch (const InternalError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(std::string(backend_->name()), e.what());
  }
  zero_cache_.emplace(b.id(), !sat);
  return !sat;
}

bool SolverHandle::equiv(BExp b, BExp a) {
  if (b == a) return true;
  return is_zero(disj(conj(b, neg(a)), conj(neg(b), a)));
}

bool SolverHandle::overlaps(BExp b, BExp a) { return !is_zero(conj(b, a)); }

std::optional<Atom> SolverHandle::least_model(BExp b, std::size_t num_tests) {
  if (is_zero(b)) return std::nullopt;
  Atom atom(num_tests);
  BExp fixed = b;
  for (TestId t : support(b)) {
    if (t >= num_tests) throw InternalError("least_model: test outside the atom width");
    const BExp lo = conj(fixed, neg(BExp::test(t)));
    if (!is_zero(lo)) {
      fixed = lo;
    } else {
      fixed = conj(fixed, BExp::test(t));
      atom.set(t, true);
    }
  }
  return atom;
}

TestId SolverHandle::fresh_for(IndicatorConstraint c) {
  auto [it, inserted] = fresh_.emplace(pack(c), 0);
  if (inserted) it->second = kFreshTestBase + static_cast<TestId>(fresh_.size() - 1);
  return it->second;
}

EncodedBExp SolverHandle::encode_indicators(BExp b) {
  if (b.is_pure()) return {b, {}};
  if (auto it = encode_cache_.find(b.id()); it != encode_cache_.end()) return it->second;
  EncodedBExp out;
  std::unordered_map<const BExpNode*, BExp> memo;
  std::unordered_set<TestId> listed;
  auto rec = [&](auto&& self, BExp e) -> BExp {
    if (e.is_pure()) return e;
    if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
    BExp r;
    switch (e.kind()) {
      case BExp::Kind::Ind: {
        const IndicatorConstraint c{e.var(), e.value()};
        const TestId t = fresh_for(c);
        if (listed.insert(t).second) out.table.emplace_back(c, t);
        r = BExp::test(t);
        break;
      }
      case BExp::Kind::And: r = raw_and(self(self, e.lhs()), self(self, e.rhs())); break;
      case BExp::Kind::Or: r = raw_or(self(self, e.lhs()), self(self, e.rhs())); break;
      case BExp::Kind::Not: r = raw_not(self(self, e.operand())); break;
      default: r = e; break;
    }
    memo.emplace(e.node(), r);
    return r;
  };
  out.formula = rec(rec, b);
  encode_cache_.emplace(b.id(), out);
  return out;
}

BExp instantiate_encoded(const EncodedBExp& enc, const IndicatorState& pi) {
  std::unordered_map<TestId, bool> value;
  for (const auto& [c, t] : enc.table) value[t] = pi.at(c.var) == c.value;
  std::unordered_map<const BExpNode*, BExp> memo;
  auto rec = [&](auto&& self, BExp e) -> BExp {
    if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
    BExp r;
    switch (e.kind()) {
      case BExp::Kind::Test:
        if (is_fresh_test(e.test_id())) {
          auto it = value.find(e.test_id());
          if (it == value.end())
            throw InternalError("instantiate_encoded: fresh variable f" +
                                std::to_string(e.test_id() - kFreshTestBase) + " not in table");
          r = it->second ? BExp::one() : BExp::zero();
        } else {
          r = e;
        }
        break;
      case BExp::Kind::Ind:
        throw InternalError("instantiate_encoded: formula still contains an indicator test");
      case BExp::Kind::And: r = conj(self(self, e.lhs()), self(self, e.rhs())); break;
      case BExp::Kind::Or: r = disj(self(self, e.lhs()), self(self, e.rhs())); break;
      case BExp::Kind::Not: r = neg(self(self, e.operand())); break;
      default: r = e; break;
    }
    memo.emplace(e.node(), r);
    return r;
  };
  return rec(rec, enc.formula);
}

GuardIndex::GuardIndex(std::vector<BExp> guards) : n_(guards.size()) {
  if (n_ == 0) return;
  tree_.resize(4 * n_);
  build(1, 0, n_, guards);
}

BExp GuardIndex::build(std::size_t node, std::size_t lo, std::size_t hi, const std::vector<BExp>& guards) {
  if (hi - lo == 1) return tree_[node] = guards[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  const BExp l = build(2 * node, lo, mid, guards);
  return tree_[node] = disj(l, build(2 * node + 1, mid, hi, guards));
}

void GuardIndex::search(SolverHandle& h, BExp g, std::size_t node, std::size_t lo, std::size_t hi,
                        std::vector<std::size_t>& out) const {
  if (!h.overlaps(g, tree_[node])) return;
  if (hi - lo == 1) {
    out.push_back(lo);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  search(h, g, 2 * node, lo, mid, out);
  search(h, g, 2 * node + 1, mid, hi, out);
}

std::vector<std::size_t> GuardIndex::overlapping(SolverHandle& h, BExp g) const {
  std::vector<std::size_t> out;
  if (n_ > 0) search(h, g, 1, 0, n_, out);
  return out;
}

}  // namespace gkat

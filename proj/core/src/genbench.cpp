#include "gkat/genbench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>

#include "gkat/derivative.hpp"

namespace gkat::gen {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

bool is_leaf(Exp e) {
  switch (e.kind()) {
    case Exp::Kind::Seq:
    case Exp::Kind::Unfold:
    case Exp::Kind::If:
    case Exp::Kind::While:
      return false;
    default:
      return true;
  }
}

void preorder(Exp e, std::vector<Exp>& out) {
  out.push_back(e);
  switch (e.kind()) {
    case Exp::Kind::Seq:
    case Exp::Kind::Unfold:
    case Exp::Kind::If:
      preorder(e.lhs(), out);
      preorder(e.rhs(), out);
      break;
    case Exp::Kind::While:
      preorder(e.body(), out);
      break;
    default:
      break;
  }
}

Exp rebuild(Exp e, Exp l, Exp r) {
  switch (e.kind()) {
    case Exp::Kind::Seq: return Exp::seq(l, r);
    case Exp::Kind::Unfold: return Exp::unfold(l, r);
    case Exp::Kind::If: return Exp::ite(e.guard(), l, r);
    case Exp::Kind::While: return Exp::loop(e.guard(), l);
    default: return e;
  }
}

// Replaces the node at preorder position idx by f(node).
Exp replace_walk(Exp e, std::size_t& idx, const std::function<Exp(Exp)>& f) {
  if (idx == 0) {
    idx = static_cast<std::size_t>(-1);
    return f(e);
  }
  --idx;
  if (is_leaf(e)) return e;
  Exp l = replace_walk(e.lhs(), idx, f);
  if (idx == static_cast<std::size_t>(-1)) return rebuild(e, l, e.kind() == Exp::Kind::While ? l : e.rhs());
  if (e.kind() == Exp::Kind::While) return e;
  Exp r = replace_walk(e.rhs(), idx, f);
  return idx == static_cast<std::size_t>(-1) ? rebuild(e, e.lhs(), r) : e;
}

Exp replace_at(Exp e, std::size_t idx, const std::function<Exp(Exp)>& f) {
  std::size_t i = idx;
  return replace_walk(e, i, f);
}

bool has_labels(Exp e) {
  std::vector<Exp> nodes;
  preorder(e, nodes);
  return std::any_of(nodes.begin(), nodes.end(), [](Exp n) { return n.kind() == Exp::Kind::Label; });
}

TestId next_test(Rng& rng, const GenConfig& c) {
  if (!c.spread_tests) return static_cast<TestId>(pick(rng, c.tests));
  if (rng.cursor >= rng.pool.size()) {
    rng.pool.resize(c.tests);
    std::iota(rng.pool.begin(), rng.pool.end(), TestId{0});
    std::shuffle(rng.pool.begin(), rng.pool.end(), rng);
    rng.cursor = 0;
  }
  return rng.pool[rng.cursor++];
}

BExp literal(Rng& rng, const GenConfig& c, bool indicators) {
  BExp b;
  if (indicators && c.vars > 0 && coin(rng, 0.35))
    b = BExp::ind(static_cast<VarId>(pick(rng, c.vars)), static_cast<Value>(pick(rng, c.values)));
  else
    b = BExp::test(next_test(rng, c));
  return coin(rng, 0.5) ? neg(b) : b;
}

// Applies one rewrite rule at e, or nullopt when it does not match.
std::optional<Exp> apply_rule(Rng& rng, const GenConfig& c, Exp e, int rule, bool cf) {
  using K = Exp::Kind;
  switch (rule) {
    case 0:  // e +_b f = f +_!b e
      if (e.kind() == K::If) return Exp::ite(neg(e.guard()), e.rhs(), e.lhs());
      break;
    case 1:  // e +_b e = e
      if (e.kind() == K::If && e.lhs() == e.rhs()) return e.lhs();
      break;
    case 2:  // e = e +_b e
      if (e.size() <= 8 && !(cf && has_labels(e))) return Exp::ite(gen_bexp(rng, c, cf), e, e);
      break;
    case 3:  // (b; e) +_b f = e +_b f
      if (e.kind() == K::If && e.lhs().kind() == K::Seq && e.lhs().lhs().kind() == K::Test &&
          e.lhs().lhs().guard() == e.guard())
        return Exp::ite(e.guard(), e.lhs().rhs(), e.rhs());
      break;
    case 4:
      if (e.kind() == K::If) return Exp::ite(e.guard(), Exp::seq(Exp::test(e.guard()), e.lhs()), e.rhs());
      break;
    case 5:  // associativity
      if (e.kind() == K::Seq && e.lhs().kind() == K::Seq)
        return Exp::seq(e.lhs().lhs(), Exp::seq(e.lhs().rhs(), e.rhs()));
      if (e.kind() == K::Seq && e.rhs().kind() == K::Seq)
        return Exp::seq(Exp::seq(e.lhs(), e.rhs().lhs()), e.rhs().rhs());
      break;
    case 6:  // (e +_b f); g = (e; g) +_b (f; g)
      if (e.kind() == K::Seq && e.lhs().kind() == K::If && e.rhs().size() <= 16 && !(cf && has_labels(e.rhs()))) {
        const Exp i = e.lhs();
        return Exp::ite(i.guard(), Exp::seq(i.lhs(), e.rhs()), Exp::seq(i.rhs(), e.rhs()));
      }
      break;
    case 7:  // factoring, the converse of 6
      if (e.kind() == K::If && e.lhs().kind() == K::Seq && e.rhs().kind() == K::Seq && e.lhs().rhs() == e.rhs().rhs())
        return Exp::seq(Exp::ite(e.guard(), e.lhs().lhs(), e.rhs().lhs()), e.lhs().rhs());
      break;
    case 8:  // skip identities
      if (e.kind() == K::Seq && e.lhs().is_skip()) return e.rhs();
      if (e.kind() == K::Seq && e.rhs().is_skip()) return e.lhs();
      return coin(rng, 0.5) ? Exp::seq(Exp::skip(), e) : Exp::seq(e, Exp::skip());
    case 9:  // loop unrolling
      if (e.kind() == K::While && !(cf && has_labels(e.body()))) {
        const Exp step = cf ? Exp::unfold(e.body(), e) : Exp::seq(e.body(), e);
        return Exp::ite(e.guard(), step, Exp::skip());
      }
      break;
    default:
      break;
  }
  return std::nullopt;
}

constexpr int kRules = 10;

Exp rewrite_once(Rng& rng, const GenConfig& c, Exp e, bool cf, const std::function<bool(Exp)>& ok) {
  std::vector<Exp> nodes;
  preorder(e, nodes);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::size_t idx = pick(rng, nodes.size());
    const int rule = static_cast<int>(pick(rng, kRules));
    std::optional<Exp> out = apply_rule(rng, c, nodes[idx], rule, cf);
    if (!out) continue;
    Exp next = replace_at(e, idx, [&](Exp) { return *out; });
    if (!ok || ok(next)) return next;
  }
  return e;
}

Exp gen_tree(Rng& rng, const GenConfig& c, std::size_t budget, bool cf, bool in_loop, std::size_t depth = 1) {
  if (budget <= 1 || (c.max_depth && depth >= c.max_depth)) {
    if (!cf) return coin(rng, 0.7) ? Exp::action(static_cast<ActionId>(pick(rng, c.actions))) : Exp::test(gen_bexp(rng, c));
    const double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < 0.45) return Exp::action(static_cast<ActionId>(pick(rng, c.actions)));
    if (r < 0.6) return Exp::test(gen_bexp(rng, c, true));
    if (r < 0.75 && c.vars > 0)
      return Exp::assign(static_cast<VarId>(pick(rng, c.vars)), static_cast<Value>(pick(rng, c.values)));
    if (r < 0.85 && in_loop) return coin(rng, 0.5) ? Exp::brk() : Exp::cont();
    if (r < 0.92 && c.labels > 0) return Exp::go(static_cast<LabelId>(pick(rng, c.labels)));
    if (r < 0.95) return Exp::ret();
    return Exp::action(static_cast<ActionId>(pick(rng, c.actions)));
  }
  const std::size_t rest = budget - 1;
  switch (pick(rng, 3)) {
    case 0: {
      const std::size_t l = rest <= 1 ? 1 : 1 + pick(rng, rest - 1);
      return Exp::seq(gen_tree(rng, c, l, cf, in_loop, depth + 1),
                      gen_tree(rng, c, std::max<std::size_t>(1, rest - l), cf, in_loop, depth + 1));
    }
    case 1: {
      const std::size_t l = rest <= 1 ? 1 : 1 + pick(rng, rest - 1);
      return Exp::ite(gen_bexp(rng, c, cf), gen_tree(rng, c, l, cf, in_loop, depth + 1),
                      gen_tree(rng, c, std::max<std::size_t>(1, rest - l), cf, in_loop, depth + 1));
    }
    default:
      return Exp::loop(gen_bexp(rng, c, cf), gen_tree(rng, c, rest, cf, true, depth + 1));
  }
}

}  // namespace

std::shared_ptr<Registry> make_registry(const GenConfig& c) {
  auto reg = std::make_shared<Registry>();
  for (std::size_t i = 0; i < c.tests; ++i) reg->test("t" + std::to_string(i));
  for (std::size_t i = 0; i < c.actions; ++i) reg->action("p" + std::to_string(i));
  for (std::size_t i = 0; i < c.vars; ++i) reg->var("x" + std::to_string(i));
  return reg;
}

BExp gen_bexp(Rng& rng, const GenConfig& c, bool indicators) {
  BExp b = literal(rng, c, indicators);
  for (std::size_t i = 1; i < c.bexp_size; ++i) {
    const BExp l = literal(rng, c, indicators);
    const bool left = coin(rng, 0.5);
    b = coin(rng, 0.5) ? (left ? conj(l, b) : conj(b, l)) : (left ? disj(l, b) : disj(b, l));
  }
  return b;
}

Exp gen_gkat(Rng& rng, const GenConfig& c) { return gen_tree(rng, c, std::max<std::size_t>(1, c.size), false, false); }

Exp gen_cf_body(Rng& rng, const GenConfig& c) {
  return gen_tree(rng, c, std::max<std::size_t>(1, c.size), true, true);
}

Exp rewrite_gkat(Rng& rng, const GenConfig& c, Exp e) { return rewrite_once(rng, c, e, false, {}); }

GkatPair gen_pair(std::uint64_t seed, const GenConfig& c) {
  Rng rng(seed);
  GkatPair p;
  p.registry = make_registry(c);
  p.left = gen_gkat(rng, c);
  p.right = p.left;
  for (std::size_t i = 0; i < c.rewrite_steps; ++i) p.right = rewrite_gkat(rng, c, p.right);
  return p;
}

Program gen_cf_program(Rng& rng, const GenConfig& c, std::shared_ptr<Registry> reg) {
  Program p;
  p.registry = std::move(reg);
  for (std::size_t l = 0; l < c.labels; ++l) p.labels.push_back("l" + std::to_string(l));
  for (;;) {
    Exp body = gen_tree(rng, c, std::max<std::size_t>(1, c.size), true, false);
    for (std::size_t l = 0; l < c.labels; ++l) {
      std::vector<Exp> nodes;
      preorder(body, nodes);
      std::vector<std::size_t> leaves;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (is_leaf(nodes[i]) && nodes[i].kind() != Exp::Kind::Label) leaves.push_back(i);
      const std::size_t at = leaves[pick(rng, leaves.size())];
      body = replace_at(body, at, [&](Exp x) { return Exp::seq(Exp::label(static_cast<LabelId>(l)), x); });
    }
    // One guarded jump per label, so every label is a target.
    for (std::size_t l = 0; l < c.labels; ++l) {
      std::vector<Exp> nodes;
      preorder(body, nodes);
      std::vector<std::size_t> leaves;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (is_leaf(nodes[i]) && nodes[i].kind() != Exp::Kind::Label) leaves.push_back(i);
      const std::size_t at = leaves[pick(rng, leaves.size())];
      const Exp jump = Exp::ite(gen_bexp(rng, c, true), Exp::go(static_cast<LabelId>(l)), Exp::skip());
      body = replace_at(body, at, [&](Exp x) { return Exp::seq(x, jump); });
    }
    p.body = Exp::seq(body, Exp::ret());
    if (well_formed(p.body, &p.labels).empty()) return p;
  }
}

Program rewrite_cf(Rng& rng, const GenConfig& c, const Program& p) {
  Program out = p;
  out.body = rewrite_once(rng, c, p.body, true, [&](Exp e) { return well_formed(e, &p.labels).empty(); });
  return out;
}

CfPair gen_cf_pair(std::uint64_t seed, const GenConfig& c) {
  Rng rng(seed);
  CfPair pair;
  pair.left = gen_cf_program(rng, c, make_registry(c));
  pair.right = pair.left;
  for (std::size_t i = 0; i < c.rewrite_steps; ++i) pair.right = rewrite_cf(rng, c, pair.right);
  return pair;
}

namespace {

std::optional<Exp> perturb(Rng& rng, const GenConfig& c, Exp e) {
  using K = Exp::Kind;
  switch (pick(rng, 4)) {
    case 0:  // guard polarity
      if (e.kind() == K::If) return Exp::ite(neg(e.guard()), e.lhs(), e.rhs());
      if (e.kind() == K::While) return Exp::loop(neg(e.guard()), e.body());
      if (e.kind() == K::Test) return Exp::test(neg(e.guard()));
      break;
    case 1: {  // drop one operand of a compound guard
      if (e.kind() != K::If && e.kind() != K::While) break;
      const BExp g = e.guard();
      if (g.kind() != BExp::Kind::And && g.kind() != BExp::Kind::Or) break;
      const BExp h = coin(rng, 0.5) ? g.lhs() : g.rhs();
      return e.kind() == K::If ? Exp::ite(h, e.lhs(), e.rhs()) : Exp::loop(h, e.body());
    }
    case 2:  // replace an action
      if (e.kind() == K::Action) {
        if (c.actions < 2) return Exp::skip();
        ActionId q = static_cast<ActionId>(pick(rng, c.actions - 1));
        if (q >= e.action_id()) ++q;
        return Exp::action(q);
      }
      break;
    default:  // drop a statement
      if (e.kind() == K::Seq) return coin(rng, 0.5) ? e.lhs() : e.rhs();
      break;
  }
  return std::nullopt;
}

Exp mutate_with(Rng& rng, const GenConfig& c, Exp e, const std::function<bool(Exp)>& ok) {
  std::vector<Exp> nodes;
  preorder(e, nodes);
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const std::size_t idx = pick(rng, nodes.size());
    std::optional<Exp> out = perturb(rng, c, nodes[idx]);
    if (!out || *out == nodes[idx]) continue;
    Exp next = replace_at(e, idx, [&](Exp) { return *out; });
    if (next != e && (!ok || ok(next))) return next;
  }
  return Exp::seq(Exp::action(0), e);
}

}  // namespace

Exp mutate(Exp e, std::uint64_t seed, const GenConfig& c) {
  Rng rng(seed);
  return mutate_with(rng, c, e, {});
}

Program mutate(const Program& p, std::uint64_t seed, const GenConfig& c) {
  Rng rng(seed);
  Program out = p;
  out.body = mutate_with(rng, c, p.body, [&](Exp e) { return well_formed(e, &p.labels).empty(); });
  if (!well_formed(out.body, &p.labels).empty()) out.body = Exp::seq(Exp::action(0), p.body);
  return out;
}

namespace {

std::size_t peak_rss_kb() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("VmHWM:", 0) == 0) return std::stoul(line.substr(6));
  return 0;
}

}  // namespace

BenchReport run_bench(const BenchConfig& c) {
  BenchReport rep;
  for (std::size_t size : c.sizes) {
    GenConfig g = c.gen;
    g.size = size;
    std::vector<double> times;
    double queries = 0;
    std::size_t timeouts = 0;
    for (std::size_t i = 0; i < c.pairs; ++i) {
      const std::uint64_t seed = c.seed * 1000003ull + size * 7919ull + i;
      const GkatPair pair = gen_pair(seed, g);
      BenchRow row{seed, size, g.tests, g.bexp_size, "", 0, 0, 0};
      const auto t0 = std::chrono::steady_clock::now();
      try {
        SolverHandle h(c.backend);
        GkatAutomaton left(pair.left, h), right(pair.right, h);
        const Verdict v = equiv_symbolic(left, right, h, Mode::Trace, g.tests);
        row.verdict = v.equivalent ? "equivalent" : "inequivalent";
        row.states = v.stats.states;
        row.solver_queries = v.stats.solver_queries;
      } catch (const std::exception&) {
        row.verdict = "error";
      }
      row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      if (row.runtime_ms > c.timeout_ms) {
        row.verdict = "timeout";
        ++timeouts;
      }
      times.push_back(row.runtime_ms);
      queries += static_cast<double>(row.solver_queries);
      rep.rows.push_back(row);
    }
    if (times.empty()) continue;
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2;
    rep.buckets.push_back({size, n, std::accumulate(times.begin(), times.end(), 0.0) / n, median, queries / n, timeouts});
  }
  rep.peak_rss_kb = peak_rss_kb();
  return rep;
}

void write_csv(std::ostream& os, const BenchReport& r) {
  os << "seed,size,tests,bexp_size,verdict,runtime_ms,states,solver_queries\n";
  for (const BenchRow& row : r.rows)
    os << row.seed << ',' << row.size << ',' << row.tests << ',' << row.bexp_size << ',' << row.verdict << ','
       << std::fixed << std::setprecision(3) << row.runtime_ms << std::defaultfloat << ',' << row.states << ','
       << row.solver_queries << '\n';
}

void write_summary(std::ostream& os, const BenchReport& r) {
  os << "size,cases,mean_ms,median_ms,mean_queries,timeouts\n";
  for (const BucketSummary& b : r.buckets)
    os << b.size << ',' << b.cases << ',' << std::fixed << std::setprecision(3) << b.mean_ms << ',' << b.median_ms
       << ',' << b.mean_queries << std::defaultfloat << ',' << b.timeouts << '\n';
  os << "peak_rss_kb=" << r.peak_rss_kb << '\n';
}

}  // namespace gkat::gen

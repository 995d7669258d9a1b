#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "gkat/genbench.hpp"
#include "support.hpp"

using namespace gkat;
using namespace gkat::testing;

namespace {

std::size_t depth(Exp e) {
  switch (e.kind()) {
    case Exp::Kind::Seq:
    case Exp::Kind::Unfold:
    case Exp::Kind::If: return 1 + std::max(depth(e.lhs()), depth(e.rhs()));
    case Exp::Kind::While: return 1 + depth(e.body());
    default: return 1;
  }
}

void guards(Exp e, std::set<TestId>& out) {
  if (e.kind() == Exp::Kind::Test || e.kind() == Exp::Kind::If || e.kind() == Exp::Kind::While)
    for (TestId t : support(e.guard())) out.insert(t);
  switch (e.kind()) {
    case Exp::Kind::Seq:
    case Exp::Kind::Unfold:
    case Exp::Kind::If:
      guards(e.lhs(), out);
      guards(e.rhs(), out);
      break;
    case Exp::Kind::While: guards(e.body(), out); break;
    default: break;
  }
}

}  // namespace

TEST(Generator, Reproducible) {
  gen::GenConfig c;
  c.size = 40;
  const gen::GkatPair a = gen::gen_pair(17, c), b = gen::gen_pair(17, c);
  EXPECT_EQ(a.left, b.left);
  EXPECT_EQ(a.right, b.right);
  EXPECT_NE(gen::gen_pair(18, c).left, a.left);
  c.labels = 1;
  c.vars = 1;
  const gen::CfPair x = gen::gen_cf_pair(5, c), y = gen::gen_cf_pair(5, c);
  EXPECT_EQ(x.left.body, y.left.body);
  EXPECT_EQ(x.right.body, y.right.body);
}

TEST(Generator, RespectsConfig) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::GenConfig c;
    c.size = 20;
    c.tests = 2;
    c.actions = 2;
    c.max_depth = 4;
    gen::Rng rng(seed);
    const Exp e = gen::gen_gkat(rng, c);
    EXPECT_TRUE(is_gkat(e));
    EXPECT_LE(depth(e), 4u + 1);
    std::set<TestId> ts;
    guards(e, ts);
    for (TestId t : ts) EXPECT_LT(t, c.tests);
  }
}

TEST(Generator, CfProgramsAreWellFormed) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gen::GenConfig c;
    c.size = 10 + seed % 20;
    c.vars = 1;
    c.labels = seed % 3;
    gen::Rng rng(seed);
    const Program p = gen::gen_cf_program(rng, c, gen::make_registry(c));
    EXPECT_TRUE(well_formed(p.body, &p.labels).empty()) << to_string(p.body, p.registry.get(), &p.labels);
    for (LabelId l = 0; l < c.labels; ++l) EXPECT_EQ(count_labels(p.body, l), 1u);
    const Program r = gen::rewrite_cf(rng, c, p);
    EXPECT_TRUE(well_formed(r.body, &r.labels).empty());
  }
}

TEST(Generator, SpreadSamplingCoversTheAlphabet) {
  gen::GenConfig c;
  c.size = 200;
  c.tests = 300;
  c.bexp_size = 6;
  c.spread_tests = true;
  gen::Rng rng(1);
  std::set<TestId> ts;
  guards(gen::gen_gkat(rng, c), ts);
  EXPECT_GT(ts.size(), 250u);
}

TEST(Generator, RewritesPreserveEquivalence) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    gen::GenConfig c;
    c.size = 8 + seed % 16;
    c.tests = 1 + seed % 3;
    c.rewrite_steps = 1 + seed % 8;
    const gen::GkatPair p = gen::gen_pair(seed, c);
    const ConcreteAutomaton a = oracle::reference_automaton(p.left, c.tests);
    const ConcreteAutomaton b = oracle::reference_automaton(p.right, c.tests);
    EXPECT_TRUE(oracle::trace_equivalent(a, b)) << "seed " << seed;
  }
}

TEST(Generator, MutantsDiffer) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    gen::GenConfig c;
    c.size = 5 + seed % 20;
    c.vars = seed % 2;
    c.labels = seed % 4 == 0;
    const gen::GkatPair p = gen::gen_pair(seed, c);
    EXPECT_NE(gen::mutate(p.right, seed, c), p.right);
    EXPECT_EQ(gen::mutate(p.right, seed, c), gen::mutate(p.right, seed, c));
    const gen::CfPair q = gen::gen_cf_pair(seed, c);
    const Program m = gen::mutate(q.right, seed, c);
    EXPECT_NE(m.body, q.right.body);
    EXPECT_TRUE(well_formed(m.body, &m.labels).empty());
  }
}

TEST(Bench, RowsAndSummary) {
  gen::BenchConfig bc;
  bc.sizes = {10, 20};
  bc.pairs = 3;
  bc.gen.tests = 4;
  const gen::BenchReport r = gen::run_bench(bc);
  ASSERT_EQ(r.rows.size(), 6u);
  ASSERT_EQ(r.buckets.size(), 2u);
  EXPECT_EQ(r.buckets[0].size, 10u);
  EXPECT_EQ(r.buckets[0].cases, 3u);
  for (const gen::BenchRow& row : r.rows) EXPECT_EQ(row.verdict, "equivalent");

  std::ostringstream csv, summary;
  gen::write_csv(csv, r);
  gen::write_summary(summary, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "seed,size,tests,bexp_size,verdict,runtime_ms,states,solver_queries");
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    ++n;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(n, 6u);
  EXPECT_EQ(summary.str().rfind("size,cases,mean_ms,median_ms,mean_queries,timeouts\n", 0), 0u);
  EXPECT_NE(summary.str().find("peak_rss_kb="), std::string::npos);
}

TEST(Bench, TimeoutsAreFlagged) {
  gen::BenchConfig bc;
  bc.sizes = {30};
  bc.pairs = 2;
  bc.timeout_ms = 0;
  const gen::BenchReport r = gen::run_bench(bc);
  for (const gen::BenchRow& row : r.rows) EXPECT_EQ(row.verdict, "timeout");
  EXPECT_EQ(r.buckets[0].timeouts, 2u);
}

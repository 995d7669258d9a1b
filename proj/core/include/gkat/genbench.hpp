#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gkat/equivalence.hpp"
#include "gkat/registry.hpp"
#include "gkat/solver.hpp"
#include "gkat/syntax.hpp"

namespace gkat::gen {

struct GenConfig {
  std::size_t size = 20;  // target node count of the generated program
  std::size_t tests = 3;
  std::size_t actions = 3;
  std::size_t rewrite_steps = 10;
  std::size_t bexp_size = 2;  // literals per guard
  std::size_t vars = 0;       // indicator variables (CF-GKAT only)
  std::size_t values = 3;     // values 0..values-1 per variable
  std::size_t labels = 0;     // CF-GKAT only
  std::size_t max_depth = 0;  // 0 = unbounded
  bool spread_tests = false;  // draw tests without replacement from a shuffled pool
};

/// The engine plus the pool used by spread test sampling.
class Rng : public std::mt19937_64 {
 public:
  using std::mt19937_64::mt19937_64;
  std::vector<TestId> pool;
  std::size_t cursor = 0;
};

/// Registry with tests t0.. and actions p0.. (and variables x0..).
std::shared_ptr<Registry> make_registry(const GenConfig& c);

BExp gen_bexp(Rng& rng, const GenConfig& c, bool indicators = false);
Exp gen_gkat(Rng& rng, const GenConfig& c);

/// One sound rewrite at a random position; returns e unchanged when no rewrite applies.
Exp rewrite_gkat(Rng& rng, const GenConfig& c, Exp e);

struct GkatPair {
  Exp left, right;
  std::shared_ptr<Registry> registry;
};

/// Random GKAT program and a rewritten copy; equivalent by construction.
GkatPair gen_pair(std::uint64_t seed, const GenConfig& c);

/// Random CF-GKAT loop body; break and continue may occur outside nested loops.
Exp gen_cf_body(Rng& rng, const GenConfig& c);

/// Random well-formed CF-GKAT program ending in return.
Program gen_cf_program(Rng& rng, const GenConfig& c, std::shared_ptr<Registry> reg);

/// One rewrite that is sound in CF-GKAT; the result is well-formed.
Program rewrite_cf(Rng& rng, const GenConfig& c, const Program& p);

struct CfPair {
  Program left, right;
};
CfPair gen_cf_pair(std::uint64_t seed, const GenConfig& c);

/// One random perturbation; never returns an identical tree.
Exp mutate(Exp e, std::uint64_t seed, const GenConfig& c);
/// As above, retried until the mutant is well-formed.
Program mutate(const Program& p, std::uint64_t seed, const GenConfig& c);

struct BenchConfig {
  std::vector<std::size_t> sizes{10, 50, 100};
  std::size_t pairs = 10;
  GenConfig gen;
  std::uint64_t seed = 1;
  BackendKind backend = BackendKind::Sat;
  double timeout_ms = 60000;
};

struct BenchRow {
  std::uint64_t seed;
  std::size_t size, tests, bexp_size;
  std::string verdict;  // equivalent | inequivalent | timeout | error
  double runtime_ms;
  std::size_t states;
  std::uint64_t solver_queries;
};

struct BucketSummary {
  std::size_t size;
  std::size_t cases;
  double mean_ms, median_ms;
  double mean_queries;
  std::size_t timeouts;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BucketSummary> buckets;
  std::size_t peak_rss_kb = 0;
};

BenchReport run_bench(const BenchConfig& c);
void write_csv(std::ostream& os, const BenchReport& r);
void write_summary(std::ostream& os, const BenchReport& r);

}  // namespace gkat::gen

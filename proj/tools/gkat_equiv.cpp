#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "gkat/derivative.hpp"
#include "gkat/equivalence.hpp"
#include "gkat/genbench.hpp"
#include "gkat/parser.hpp"

namespace {

constexpr int kEquivalent = 0;
constexpr int kInequivalent = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

struct CheckArgs {
  std::string left, right;
  std::string mode = "trace";
  std::string solver = "sat";
  std::string lang = "cfgkat";
  bool witness = false;
  bool stats = false;
  std::string dump;
  std::vector<std::string> init;
};

gkat::IndicatorState start_state(const gkat::Registry& reg, const std::vector<std::string>& init) {
  std::vector<gkat::Value> values(reg.num_vars(), 0);
  for (const std::string& kv : init) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw gkat::InputError("--init expects x=i, got '" + kv + "'");
    const std::string name = kv.substr(0, eq);
    gkat::Registry::Role role;
    std::uint32_t id;
    if (!reg.find(name, role, id) || role != gkat::Registry::Role::Var)
      throw gkat::InputError("--init: '" + name + "' is not an indicator variable of either program");
    try {
      values[id] = std::stoi(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw gkat::InputError("--init: bad value in '" + kv + "'");
    }
  }
  return gkat::IndicatorState(std::move(values));
}

int run_check(const CheckArgs& a) {
  const gkat::Mode mode = gkat::parse_mode(a.mode);
  const gkat::BackendKind backend = gkat::parse_backend(a.solver);
  const gkat::Lang lang = gkat::parse_lang(a.lang);
  auto reg = std::make_shared<gkat::Registry>();
  const gkat::Program left = gkat::parse_file(a.left, reg, lang);
  const gkat::Program right = gkat::parse_file(a.right, reg, lang);

  gkat::SolverHandle h(backend);
  std::unique_ptr<gkat::SymbolicAutomaton> la, ra;
  if (lang == gkat::Lang::Gkat) {
    la = std::make_unique<gkat::GkatAutomaton>(left.body, h);
    ra = std::make_unique<gkat::GkatAutomaton>(right.body, h);
  } else {
    const gkat::IndicatorState pi = start_state(*reg, a.init);
    la = std::make_unique<gkat::CfgkatAutomaton>(left, pi, h);
    ra = std::make_unique<gkat::CfgkatAutomaton>(right, pi, h);
  }
  const gkat::Verdict v = gkat::equiv_symbolic(*la, *ra, h, mode, reg->num_tests());
  std::cout << gkat::serialize(v, reg.get(), a.witness, a.stats);

  if (!a.dump.empty()) {
    std::ofstream out(a.dump);
    if (!out) throw gkat::InputError("cannot write '" + a.dump + "'");
    out << "# left: " << a.left << '\n';
    gkat::dump(out, *la, reg.get());
    out << "# right: " << a.right << '\n';
    gkat::dump(out, *ra, reg.get());
  }
  return v.equivalent ? kEquivalent : kInequivalent;
}

struct BenchArgs {
  std::vector<std::size_t> sizes{10, 50, 100};
  std::size_t pairs = 10;
  std::size_t tests = 10;
  std::size_t actions = 4;
  std::size_t bexp_size = 2;
  std::size_t rewrites = 20;
  std::uint64_t seed = 1;
  std::string solver = "sat";
  double timeout_ms = 60000;
  std::string csv;
};

int run_bench(const BenchArgs& a) {
  gkat::gen::BenchConfig c;
  c.sizes = a.sizes;
  c.pairs = a.pairs;
  c.seed = a.seed;
  c.backend = gkat::parse_backend(a.solver);
  c.timeout_ms = a.timeout_ms;
  c.gen.tests = a.tests;
  c.gen.actions = a.actions;
  c.gen.bexp_size = a.bexp_size;
  c.gen.rewrite_steps = a.rewrites;
  const gkat::gen::BenchReport r = gkat::gen::run_bench(c);
  if (!a.csv.empty()) {
    std::ofstream out(a.csv);
    if (!out) throw gkat::InputError("cannot write '" + a.csv + "'");
    gkat::gen::write_csv(out, r);
  }
  gkat::gen::write_summary(std::cout, r);
  for (const auto& row : r.rows)
    if (row.verdict != "equivalent") return kInequivalent;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivalence checker for GKAT and CF-GKAT programs"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Decide equivalence of two programs");
  check->add_option("left", ca.left, "First program")->required()->check(CLI::ExistingFile);
  check->add_option("right", ca.right, "Second program")->required()->check(CLI::ExistingFile);
  check->add_option("--mode", ca.mode, "trace or bisim")->check(CLI::IsMember({"trace", "bisim"}));
  check->add_option("--solver", ca.solver, "sat or bdd")->check(CLI::IsMember({"sat", "bdd"}));
  check->add_option("--lang", ca.lang, "gkat or cfgkat")->check(CLI::IsMember({"gkat", "cfgkat"}));
  check->add_flag("--witness", ca.witness, "Report which side the witness is a trace of");
  check->add_flag("--stats", ca.stats, "Print the stats line");
  check->add_option("--dump-automaton", ca.dump, "Write both symbolic automata to a file");
  check->add_option("--init", ca.init, "Starting indicator value, x=i (repeatable)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run the random-pair benchmark and emit CSV");
  bench->add_option("--sizes", ba.sizes, "Program sizes")->delimiter(',');
  bench->add_option("--pairs", ba.pairs, "Pairs per size");
  bench->add_option("--tests", ba.tests, "Primitive tests");
  bench->add_option("--actions", ba.actions, "Primitive actions");
  bench->add_option("--bexp-size", ba.bexp_size, "Literals per guard");
  bench->add_option("--rewrites", ba.rewrites, "Rewrite steps per pair");
  bench->add_option("--seed", ba.seed, "Base seed");
  bench->add_option("--solver", ba.solver, "sat or bdd")->check(CLI::IsMember({"sat", "bdd"}));
  bench->add_option("--timeout-ms", ba.timeout_ms, "Per-case timeout, flagged in the CSV");
  bench->add_option("--csv", ba.csv, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return run_check(ca);
    return run_bench(ba);
  } catch (const gkat::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const gkat::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

// Experiment runner: graph specs in, deterministic CSV out.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "percolab/acceptance.hpp"
#include "percolab/graph.hpp"
#include "percolab/runner.hpp"
#include "percolab/version.hpp"

namespace {

struct CommonOpts {
  std::string seed, out, cap;
  unsigned threads = 1;
};

struct SubSpec {
  CLI::App* cmd = nullptr;
  CommonOpts common;
  std::map<std::string, std::string> values;           // option key -> parsed value
  std::map<std::string, CLI::Option*> handles;         // option key -> CLI option
  std::string graph;
  CLI::Option* graph_opt = nullptr;
};

void add_common(SubSpec& s) {
  s.cmd->add_option("--seed", s.common.seed, "RNG seed (required for stochastic runs)");
  s.cmd->add_option("--threads", s.common.threads, "worker threads")->check(CLI::Range(1u, 256u));
  s.cmd->add_option("--out", s.common.out, "output CSV path (default: stdout)");
  s.cmd->add_option("--cap", s.common.cap, "vertex cap for graph construction");
}

void add_param(SubSpec& s, const std::string& flag, const std::string& key,
               const std::string& help) {
  s.handles[key] = s.cmd->add_option(flag, s.values[key], help);
}

void add_graph(SubSpec& s, bool required = true) {
  s.graph_opt = s.cmd->add_option("--graph", s.graph,
                                  "graph spec, e.g. tree:3:r8, torus:2:16, grid:2:r12");
  if (required) s.graph_opt->required();
}

int execute(const SubSpec& s, const std::string& op) {
  percolab::ExperimentConfig cfg;
  cfg.operation = op;
  cfg.graph_spec = s.graph;
  for (const auto& [key, handle] : s.handles)
    if (handle->count() > 0) cfg.params[key] = s.values.at(key);
  if (!s.common.seed.empty()) cfg.params["seed"] = s.common.seed;

  std::size_t cap = percolab::kDefaultVertexCap;
  if (!s.common.cap.empty()) {
    try {
      std::size_t used = 0;
      cap = std::stoull(s.common.cap, &used);
      if (used != s.common.cap.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      std::cerr << "error: --cap is not an unsigned integer\n";
      return 2;
    }
  }

  std::string csv = percolab::run(cfg, cap, s.common.threads);
  if (s.common.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(s.common.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open " << s.common.out << " for writing\n";
      return 1;
    }
    f << csv;
  }
  return 0;
}

int run_suite(const std::string& name, unsigned threads) {
  using namespace percolab::acceptance;
  std::vector<int> ids;
  if (name == "all") {
    for (int i = 1; i <= 14; ++i) ids.push_back(i);
  } else {
    for (const auto& [id, nm] : criterion_names())
      if (nm == name) ids.push_back(id);
  }
  if (ids.empty()) {
    std::cerr << "unknown suite '" << name << "'; available suites:\n  all\n";
    for (const auto& [id, nm] : criterion_names()) std::cerr << "  " << nm << "\n";
    return 2;
  }
  int failures = 0;
  for (int id : ids) {
    CriterionResult r = run_criterion(id, threads);
    std::printf("[%s] C%d %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(ids.size()) - failures,
              ids.size());
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("percolab ") + percolab::kVersion +
               " - percolation and random-walk laboratory"};
  // Long-only help: the short name would shadow trim's --h threshold flag.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  SubSpec gen;
  gen.cmd = app.add_subcommand("gen", "construct a graph and dump its edge list");
  add_graph(gen);
  add_common(gen);

  SubSpec perc;
  perc.cmd = app.add_subcommand("percolate", "sample percolation configurations");
  add_graph(perc);
  add_param(perc, "--mode", "mode", "bond or site (default bond)");
  add_param(perc, "--p", "p", "retention probability");
  add_param(perc, "--trials", "trials", "number of configurations");
  add_common(perc);

  SubSpec trim;
  trim.cmd = app.add_subcommand("trim", "run the iterative trimming pass");
  add_graph(trim);
  add_param(trim, "--mode", "mode", "bond or site (default bond)");
  add_param(trim, "--p", "p", "retention probability");
  add_param(trim, "--h", "h", "expansion threshold (decimal, default 0.1)");
  add_param(trim, "--sweeps", "sweeps", "sweep budget (0 = default)");
  add_common(trim);

  SubSpec walk;
  walk.cmd = app.add_subcommand(
      "walk", "walk statistics; tree:<d>:r<r> hosts use the exact radial chain");
  add_graph(walk);
  add_param(walk, "--kind", "kind",
            "speed | spectral | distribution | entropy | carne | concavity");
  add_param(walk, "--steps", "steps", "horizon / time bound");
  add_param(walk, "--trials", "trials", "Monte Carlo sample count");
  add_param(walk, "--eps", "eps", "concavity split parameter");
  add_common(walk);

  SubSpec resist;
  resist.cmd = app.add_subcommand("resist", "effective resistance to distance spheres");
  add_graph(resist);
  add_param(resist, "--radii", "radii", "comma-separated radii (required)");
  add_param(resist, "--mode", "mode", "percolation mode for conditioned profiles");
  add_param(resist, "--p", "p", "retention probability (enables percolated profile)");
  add_param(resist, "--samples", "samples", "conditioned samples per radius");
  add_common(resist);

  SubSpec forest;
  forest.cmd = app.add_subcommand("forest", "spanning forest sampling and reports");
  add_graph(forest);
  add_param(forest, "--kind", "kind", "degree | p0 | owsf | dichotomy");
  add_param(forest, "--flavor", "flavor", "free or wired (degree reports)");
  add_param(forest, "--trials", "trials", "Monte Carlo sample count");
  add_param(forest, "--p", "p", "bond retention for the dichotomy experiment");
  add_common(forest);

  SubSpec gap;
  gap.cmd = app.add_subcommand("ohd-gap", "free vs wired degree gap over radii");
  add_graph(gap);
  add_param(gap, "--radii", "radii", "comma-separated radii (required)");
  add_param(gap, "--trials", "trials", "paired samples per radius (0 = exact only)");
  add_common(gap);

  SubSpec probe;
  probe.cmd = app.add_subcommand("entropy-probe", "heat-kernel entropy monotonicity probe");
  add_param(probe, "--n", "n", "matrix dimension (2..8)");
  add_param(probe, "--trials", "trials", "random generators to test");
  add_param(probe, "--step", "step", "off-diagonal increment");
  add_param(probe, "--tgrid", "tgrid", "comma-separated times");
  add_common(probe);

  std::string suite_name;
  unsigned suite_threads = 1;
  CLI::App* suite_cmd = app.add_subcommand("suite", "run a named acceptance suite");
  suite_cmd->add_option("name", suite_name, "suite name ('all' or a criterion name)")
      ->required();
  suite_cmd->add_option("--threads", suite_threads, "worker threads")
      ->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // parse failures exit 2; --help exits 0
  }

  try {
    if (gen.cmd->parsed()) return execute(gen, "gen");
    if (perc.cmd->parsed()) return execute(perc, "percolate");
    if (trim.cmd->parsed()) return execute(trim, "trim");
    if (walk.cmd->parsed()) return execute(walk, "walk");
    if (resist.cmd->parsed()) return execute(resist, "resist");
    if (forest.cmd->parsed()) return execute(forest, "forest");
    if (gap.cmd->parsed()) return execute(gap, "ohd-gap");
    if (probe.cmd->parsed()) return execute(probe, "entropy-probe");
    if (suite_cmd->parsed()) return run_suite(suite_name, suite_threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

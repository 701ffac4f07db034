#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/csv.hpp"
#include "percolab/forests.hpp"
#include "percolab/generators.hpp"
#include "percolab/graph.hpp"
#include "percolab/graph_spec.hpp"
#include "percolab/heatkernel.hpp"
#include "percolab/percolation.hpp"
#include "percolab/tree_chain.hpp"
#include "percolab/trimming.hpp"
#include "percolab/version.hpp"
#include "percolab/walks.hpp"

namespace percolab {

// Flat key-value experiment description.  The canonical serialization (sorted
// keys) goes into the CSV header, so identical configs rerun byte-identical.
struct ExperimentConfig {
  std::string graph_spec;
  std::string operation;
  std::map<std::string, std::string> params;
  std::string output_path;  // consumed by the CLI; not part of the output

  std::vector<std::string> canonical_lines() const {
    std::vector<std::string> out;
    out.push_back("op = " + operation);
    if (!graph_spec.empty()) out.push_back("graph = " + graph_spec);
    for (const auto& [k, v] : params) out.push_back(k + " = " + v);
    return out;
  }
};

// Parses `key = value` lines ('#' comments, blank lines allowed).  Errors
// carry line and column.  Recognized structural keys: op, graph, out.
inline ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](int col, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line_no) + ", col " +
                                std::to_string(col) + ": " + msg);
  };
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') {
      if (pos > text.size()) break;
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(static_cast<int>(first) + 1, "expected key = value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto strip = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      std::size_t b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    key = strip(key);
    val = strip(val);
    if (key.empty()) fail(static_cast<int>(first) + 1, "empty key");
    if (key == "op")
      cfg.operation = val;
    else if (key == "graph")
      cfg.graph_spec = val;
    else if (key == "out")
      cfg.output_path = val;
    else if (cfg.params.count(key))
      fail(static_cast<int>(eq) + 1, "duplicate key '" + key + "'");
    else
      cfg.params[key] = val;
    if (pos > text.size()) break;
  }
  if (cfg.operation.empty()) throw std::invalid_argument("config: missing 'op' key");
  return cfg;
}

namespace detail_run {

inline void reject_unknown(const ExperimentConfig& cfg, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : cfg.params)
    if (!allowed.count(k))
      throw std::invalid_argument("config: unknown key '" + k + "' for op '" +
                                  cfg.operation + "'");
}

inline bool has(const ExperimentConfig& cfg, const std::string& key) {
  return cfg.params.count(key) != 0;
}

inline std::string get_str(const ExperimentConfig& cfg, const std::string& key,
                           const std::string& dflt) {
  auto it = cfg.params.find(key);
  return it == cfg.params.end() ? dflt : it->second;
}

inline long get_long(const ExperimentConfig& cfg, const std::string& key, long dflt,
                     long lo, long hi) {
  auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return dflt;
  long v = 0;
  try {
    std::size_t used = 0;
    v = std::stol(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' is not an integer");
  }
  if (v < lo || v > hi)
    throw std::invalid_argument("config: key '" + key + "' out of range");
  return v;
}

inline double get_double(const ExperimentConfig& cfg, const std::string& key, double dflt) {
  auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return dflt;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' is not a number");
  }
}

inline std::uint64_t require_seed(const ExperimentConfig& cfg) {
  auto it = cfg.params.find("seed");
  if (it == cfg.params.end())
    throw std::invalid_argument("config: 'seed' is mandatory for stochastic operations");
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: 'seed' is not an unsigned integer");
  }
}

inline PercMode parse_mode(const std::string& s) {
  if (s == "bond") return PercMode::kBond;
  if (s == "site") return PercMode::kSite;
  throw std::invalid_argument("config: mode must be 'bond' or 'site'");
}

inline std::vector<int> parse_int_list(const std::string& s, const std::string& key) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t c = s.find(',', pos);
    if (c == std::string::npos) c = s.size();
    std::string tok = s.substr(pos, c - pos);
    if (tok.empty())
      throw std::invalid_argument("config: empty entry in list '" + key + "'");
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("config: list '" + key + "' has a non-integer entry");
    }
    pos = c + 1;
    if (c == s.size()) break;
  }
  if (out.empty()) throw std::invalid_argument("config: list '" + key + "' is empty");
  return out;
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t c = s.find(',', pos);
    if (c == std::string::npos) c = s.size();
    std::string tok = s.substr(pos, c - pos);
    if (tok.empty())
      throw std::invalid_argument("config: empty entry in list '" + key + "'");
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("config: list '" + key + "' has a non-numeric entry");
    }
    pos = c + 1;
    if (c == s.size()) break;
  }
  if (out.empty()) throw std::invalid_argument("config: list '" + key + "' is empty");
  return out;
}

inline bool spec_is_stochastic(const std::string& spec) {
  return spec.rfind("gw:", 0) == 0 || spec.rfind("stretch(", 0) == 0;
}

// tree:<deg>:r<radius> walks run on the exact radial distance chain, so large
// radii cost nothing; returns deg > 0 on a match.
inline bool tree_chain_spec(const std::string& spec, int& deg, int& radius) {
  auto parts = percolab::detail::split(spec, ':');
  if (parts.size() != 3 || parts[0] != "tree") return false;
  if (parts[2].empty() || parts[2][0] != 'r') return false;
  try {
    std::size_t used = 0;
    deg = std::stoi(parts[1], &used);
    if (used != parts[1].size()) return false;
    std::string rr = parts[2].substr(1);
    radius = std::stoi(rr, &used);
    if (used != rr.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return deg >= 3 && radius >= 1;
}

inline void emit_header(CsvWriter& w, const ExperimentConfig& cfg) {
  w.comment(std::string("percolab ") + kVersion);
  for (const auto& line : cfg.canonical_lines()) w.comment(line);
}

inline std::string run_gen(const ExperimentConfig& cfg, std::size_t cap) {
  reject_unknown(cfg, {"seed"});
  std::uint64_t seed = spec_is_stochastic(cfg.graph_spec) ? require_seed(cfg) : 0;
  Graph g = parse_graph_spec(cfg.graph_spec, seed, cap);
  CsvWriter w;
  emit_header(w, cfg);
  w.comment("vertices = " + std::to_string(g.n));
  w.comment("edges = " + std::to_string(g.edge_count()));
  w.comment("boundary = " + std::to_string(g.boundary_list.size()));
  w.comment("basepoint = " + std::to_string(g.basepoint));
  w.comment("degree_bound = " + std::to_string(g.degree_bound));
  w.header({"edge", "src", "dst"});
  for (int e = 0; e < g.edge_count(); ++e)
    w.row({CsvWriter::num(e), CsvWriter::num(g.edges[e].first),
           CsvWriter::num(g.edges[e].second)});
  return w.str();
}

inline std::string run_percolate(const ExperimentConfig& cfg, std::size_t cap) {
  reject_unknown(cfg, {"seed", "mode", "p", "trials"});
  std::uint64_t seed = require_seed(cfg);
  Graph g = parse_graph_spec(cfg.graph_spec, counter_word(seed, stream::kProbe, 0), cap);
  PercMode mode = parse_mode(get_str(cfg, "mode", "bond"));
  double p = get_double(cfg, "p", -1.0);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("config: p must be in [0,1]");
  long trials = get_long(cfg, "trials", 1, 1, 100000000L);
  CsvWriter w;
  emit_header(w, cfg);
  w.header({"trial", "clusters", "base_cluster", "base_touches", "largest_cluster"});
  for (long i = 0; i < trials; ++i) {
    std::uint64_t s = counter_word(seed, stream::kTrial, i);
    PercConfig pc = mode == PercMode::kBond ? sample_bond(g, p, s) : sample_site(g, p, s);
    ClusterDecomposition cd = clusters(pc);
    long base_size = 0, largest = 0;
    int base_label = cd.label[g.basepoint];
    bool base_touch = false;
    for (std::size_t c = 0; c < cd.sizes.size(); ++c)
      largest = std::max(largest, cd.sizes[c]);
    if (base_label >= 0) {
      base_size = cd.sizes[base_label];
      base_touch = cd.touches_boundary[base_label] != 0;
    }
    w.row({CsvWriter::num(i), CsvWriter::num(cd.count), CsvWriter::num(base_size),
           CsvWriter::num(static_cast<int>(base_touch)), CsvWriter::num(largest)});
  }
  return w.str();
}

inline std::string run_trim(const ExperimentConfig& cfg, std::size_t cap) {
  reject_unknown(cfg, {"seed", "mode", "p", "h", "sweeps"});
  std::uint64_t seed = require_seed(cfg);
  Graph g = parse_graph_spec(cfg.graph_spec, counter_word(seed, stream::kProbe, 0), cap);
  PercMode mode = parse_mode(get_str(cfg, "mode", "bond"));
  double p = get_double(cfg, "p", -1.0);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("config: p must be in [0,1]");
  Rational h = parse_decimal(get_str(cfg, "h", "0.1"));
  long sweeps = get_long(cfg, "sweeps", 0, 0, 100000);
  std::uint64_t s = counter_word(seed, stream::kTrial, 0);
  PercConfig pc = mode == PercMode::kBond ? sample_bond(g, p, s) : sample_site(g, p, s);
  TrimTrace trace = trim(g, pc, h, counter_word(seed, stream::kTrial, 1),
                         static_cast<int>(sweeps));
  CsvWriter w;
  emit_header(w, cfg);
  w.comment(std::string("converged = ") + (trace.converged ? "1" : "0"));
  w.comment("trailing_empty = " + std::to_string(trace.trailing_empty));
  w.header({"sweep", "removed_components", "removed_vertices", "removed_edges",
            "vertices_left", "edges_left", "mean_degree"});
  for (std::size_t i = 0; i < trace.sweeps.size(); ++i) {
    const SweepRecord& rec = trace.sweeps[i];
    w.row({CsvWriter::num(i), CsvWriter::num(rec.removed.size()),
           CsvWriter::num(rec.removed_vertices), CsvWriter::num(rec.removed_edges),
           CsvWriter::num(rec.vertices_left), CsvWriter::num(rec.edges_left),
           CsvWriter::num(2.0 * static_cast<double>(rec.edges_left) / g.n)});
  }
  return w.str();
}

inline std::string run_walk(const ExperimentConfig& cfg, std::size_t cap, unsigned threads) {
  reject_unknown(cfg, {"seed", "kind", "steps", "trials", "eps"});
  std::string kind = get_str(cfg, "kind", "speed");
  long steps = get_long(cfg, "steps", 0, 0, 100000000L);
  long trials = get_long(cfg, "trials", 1000, 1, 100000000L);
  double eps = get_double(cfg, "eps", 0.5);
  int cdeg = 0, cradius = 0;
  bool chain = tree_chain_spec(cfg.graph_spec, cdeg, cradius);

  CsvWriter w;
  emit_header(w, cfg);
  w.comment(std::string("engine = ") + (chain ? "chain" : "graph"));

  if (chain) {
    RegularTreeChain rc(cdeg, false);
    if (kind == "speed") {
      std::uint64_t seed = require_seed(cfg);
      if (steps <= 0) steps = 1000;
      SpeedReport rep = speed_chain(rc, steps, trials, seed, threads);
      w.header({"T", "mean", "ci_half", "liminf_proxy", "used", "dropped", "exact_mean"});
      w.row({CsvWriter::num(steps), CsvWriter::num(rep.mean), CsvWriter::num(rep.ci.half_width),
             CsvWriter::num(rep.liminf_proxy), CsvWriter::num(rep.used),
             CsvWriter::num(rep.dropped), CsvWriter::num(rep.exact_mean)});
    } else if (kind == "spectral") {
      if (steps <= 0) steps = 40;
      if (2 * steps > cradius)
        throw std::invalid_argument("config: spectral needs radius >= 2*steps");
      SpectralProfile prof = spectral_radius_profile_chain(rc, steps, cradius);
      w.header({"t", "naive", "corrected"});
      for (std::size_t i = 0; i < prof.times.size(); ++i)
        w.row({CsvWriter::num(prof.times[i]), CsvWriter::num(prof.naive[i]),
               CsvWriter::num(prof.corrected[i])});
    } else if (kind == "distribution") {
      if (steps <= 0) steps = 10;
      if (steps > cradius)
        throw std::invalid_argument("config: distribution needs steps <= radius");
      std::vector<double> q = rc.distribution(steps, cradius);
      w.header({"distance", "mass", "mu_per_vertex"});
      for (std::size_t k = 0; k < q.size(); ++k)
        w.row({CsvWriter::num(k), CsvWriter::num(q[k]),
               CsvWriter::num(rc.mu_at_distance(q, static_cast<long>(k)))});
    } else if (kind == "carne") {
      if (steps <= 0) steps = 20;
      if (steps > cradius)
        throw std::invalid_argument("config: carne needs steps <= radius");
      w.header({"t", "max_excess", "arg_distance"});
      for (long t = 1; t <= steps; ++t) {
        CarneReport rep = carne_check_chain(rc, t);
        w.row({CsvWriter::num(t), CsvWriter::num(rep.max_violation),
               CsvWriter::num(rep.arg_distance)});
      }
    } else if (kind == "concavity") {
      if (steps <= 0) steps = 20;
      if (steps > cradius)
        throw std::invalid_argument("config: concavity needs steps <= radius");
      w.header({"t", "eps", "mass", "ball_lhs", "jensen_mid", "ball_rhs", "tail_lhs",
                "tail_rhs", "mass_ok", "jensen_ok", "ball_ok", "tail_ok"});
      for (long t = 1; t <= steps; ++t) {
        ConcavityReport c = entropy_concavity_bound_chain(rc, t, eps);
        w.row({CsvWriter::num(t), CsvWriter::num(eps), CsvWriter::num(c.mass),
               CsvWriter::num(c.ball_lhs), CsvWriter::num(c.jensen_mid),
               CsvWriter::num(c.ball_rhs), CsvWriter::num(c.tail_lhs),
               CsvWriter::num(c.tail_rhs), CsvWriter::num(static_cast<int>(c.mass_ok)),
               CsvWriter::num(static_cast<int>(c.jensen_ok)),
               CsvWriter::num(static_cast<int>(c.ball_ok)),
               CsvWriter::num(static_cast<int>(c.tail_ok))});
      }
    } else {
      throw std::invalid_argument("config: unknown walk kind '" + kind + "'");
    }
    return w.str();
  }

  std::uint64_t gen_seed =
      spec_is_stochastic(cfg.graph_spec) || has(cfg, "seed") ? require_seed(cfg) : 0;
  Graph g = parse_graph_spec(cfg.graph_spec, counter_word(gen_seed, stream::kProbe, 0), cap);
  if (kind == "speed") {
    std::uint64_t seed = require_seed(cfg);
    if (steps <= 0) steps = 1000;
    std::vector<WalkPath> paths(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
      paths[i] = walk_simple(g, steps, counter_word(seed, stream::kTrial, i));
    });
    SpeedReport rep = speed_from_paths(g, paths);
    w.header({"T", "mean", "ci_half", "liminf_proxy", "used", "dropped"});
    w.row({CsvWriter::num(steps), CsvWriter::num(rep.mean), CsvWriter::num(rep.ci.half_width),
           CsvWriter::num(rep.liminf_proxy), CsvWriter::num(rep.used),
           CsvWriter::num(rep.dropped)});
  } else if (kind == "spectral") {
    if (steps <= 0) steps = 10;
    SpectralProfile prof = spectral_radius_profile(g, steps);
    w.header({"t", "naive", "corrected"});
    for (std::size_t i = 0; i < prof.times.size(); ++i)
      w.row({CsvWriter::num(prof.times[i]), CsvWriter::num(prof.naive[i]),
             CsvWriter::num(prof.corrected[i])});
  } else if (kind == "distribution") {
    if (steps <= 0) steps = 10;
    DistVector mu = distribution_exact(g, steps);
    auto dist = bfs_distances(g, g.basepoint);
    w.header({"vertex", "distance", "mu"});
    for (int v = 0; v < g.n; ++v)
      if (mu.mu[v] > 0.0)
        w.row({CsvWriter::num(v), CsvWriter::num(dist[v]), CsvWriter::num(mu.mu[v])});
  } else if (kind == "entropy") {
    std::uint64_t seed = require_seed(cfg);
    if (steps <= 0) steps = 10;
    EntropyReport rep = entropy_estimate(g, steps, trials, seed, threads);
    w.header({"t", "plugin_rate", "plugin_half_width", "exact_rate", "undersampled", "trials"});
    w.row({CsvWriter::num(rep.t), CsvWriter::num(rep.plugin.mean),
           CsvWriter::num(rep.plugin.half_width), CsvWriter::num(rep.exact_rate),
           CsvWriter::num(rep.undersampled), CsvWriter::num(rep.trials)});
  } else if (kind == "carne") {
    if (steps <= 0) steps = 10;
    w.header({"t", "max_excess", "arg_vertex", "arg_distance"});
    for (long t = 1; t <= steps; ++t) {
      CarneReport rep = carne_check(g, t);
      w.row({CsvWriter::num(t), CsvWriter::num(rep.max_violation),
             CsvWriter::num(rep.arg_vertex), CsvWriter::num(rep.arg_distance)});
    }
  } else if (kind == "concavity") {
    if (steps <= 0) steps = 10;
    w.header({"t", "eps", "mass", "ball_lhs", "jensen_mid", "ball_rhs", "tail_lhs",
              "tail_rhs", "mass_ok", "jensen_ok", "ball_ok", "tail_ok"});
    for (long t = 1; t <= steps; ++t) {
      ConcavityReport c = entropy_concavity_bound(g, t, eps);
      w.row({CsvWriter::num(t), CsvWriter::num(eps), CsvWriter::num(c.mass),
             CsvWriter::num(c.ball_lhs), CsvWriter::num(c.jensen_mid),
             CsvWriter::num(c.ball_rhs), CsvWriter::num(c.tail_lhs),
             CsvWriter::num(c.tail_rhs), CsvWriter::num(static_cast<int>(c.mass_ok)),
             CsvWriter::num(static_cast<int>(c.jensen_ok)),
             CsvWriter::num(static_cast<int>(c.ball_ok)),
             CsvWriter::num(static_cast<int>(c.tail_ok))});
    }
  } else {
    throw std::invalid_argument("config: unknown walk kind '" + kind + "'");
  }
  return w.str();
}

inline std::string run_resist(const ExperimentConfig& cfg, std::size_t cap) {
  reject_unknown(cfg, {"seed", "radii", "mode", "p", "samples"});
  if (!has(cfg, "radii")) throw std::invalid_argument("config: 'radii' is required");
  std::vector<int> radii = parse_int_list(cfg.params.at("radii"), "radii");
  bool percolated = has(cfg, "p");
  std::uint64_t seed = percolated || spec_is_stochastic(cfg.graph_spec) ? require_seed(cfg) : 0;
  Graph g = parse_graph_spec(cfg.graph_spec, counter_word(seed, stream::kProbe, 0), cap);
  CsvWriter w;
  emit_header(w, cfg);
  w.header({"radius", "value", "residual", "samples", "discarded"});
  std::vector<TransiencePoint> prof;
  if (percolated) {
    PercMode mode = parse_mode(get_str(cfg, "mode", "bond"));
    double p = get_double(cfg, "p", -1.0);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("config: p must be in [0,1]");
    long samples = get_long(cfg, "samples", 100, 1, 10000000L);
    prof = transience_profile_percolated(g, mode, p, radii, samples, seed);
  } else {
    prof = transience_profile(g, radii);
  }
  for (const auto& pt : prof)
    w.row({CsvWriter::num(pt.radius), CsvWriter::num(pt.value), CsvWriter::num(pt.residual),
           CsvWriter::num(pt.samples), CsvWriter::num(pt.discarded)});
  return w.str();
}

inline std::string run_forest(const ExperimentConfig& cfg, std::size_t cap, unsigned threads) {
  reject_unknown(cfg, {"seed", "kind", "flavor", "trials", "p"});
  std::string kind = get_str(cfg, "kind", "degree");
  long trials = get_long(cfg, "trials", 1000, 1, 100000000L);
  std::uint64_t seed = require_seed(cfg);
  Graph g = parse_graph_spec(cfg.graph_spec, counter_word(seed, stream::kProbe, 0), cap);
  CsvWriter w;
  emit_header(w, cfg);
  if (kind == "degree") {
    std::string flavor = get_str(cfg, "flavor", "wired");
    if (flavor != "free" && flavor != "wired")
      throw std::invalid_argument("config: flavor must be 'free' or 'wired'");
    DegreeReport rep = degree_report(g, flavor == "wired", trials, seed, threads);
    w.header({"flavor", "trials", "mean", "stddev", "ci_half", "kirchhoff"});
    w.row({flavor, CsvWriter::num(rep.trials), CsvWriter::num(rep.mean),
           CsvWriter::num(rep.ci.stddev), CsvWriter::num(rep.ci.half_width),
           CsvWriter::num(rep.kirchhoff)});
  } else if (kind == "p0") {
    ThresholdReport rep = p0_threshold(g, trials, seed, threads);
    w.header({"value", "free_degree", "exact", "vacuous"});
    w.row({CsvWriter::num(rep.value), CsvWriter::num(rep.free_degree),
           CsvWriter::num(static_cast<int>(rep.exact)),
           CsvWriter::num(static_cast<int>(rep.vacuous))});
  } else if (kind == "owsf") {
    if (g.boundary_list.empty())
      throw std::invalid_argument("config: owsf needs a host with boundary");
    WGraph wg = wgraph_wired(g);
    long orient_ok = 0, sums_ok = 0;
    KahanSum base_in;
    for (long i = 0; i < trials; ++i) {
      ForestSample s = wilson_sample(wg, counter_word(seed, stream::kTrial, i));
      OwsfAudit audit = owsf_degree_audit(s);
      orient_ok += audit.orientation_ok ? 1 : 0;
      sums_ok += audit.sums_equal ? 1 : 0;
      base_in.add(audit.basepoint_in_degree);
    }
    w.header({"trials", "orientation_ok", "sums_ok", "mean_basepoint_in_degree"});
    w.row({CsvWriter::num(trials), CsvWriter::num(orient_ok), CsvWriter::num(sums_ok),
           CsvWriter::num(base_in.value() / static_cast<double>(trials))});
  } else if (kind == "dichotomy") {
    double p = get_double(cfg, "p", 0.55);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("config: p must be in [0,1]");
    DichotomyReport rep = degree_dichotomy_experiment(g, p, trials, seed);
    w.header({"p", "trials", "n_touching", "mean_touching", "ci_touching", "n_finite",
              "mean_finite", "ci_finite"});
    w.row({CsvWriter::num(p), CsvWriter::num(trials), CsvWriter::num(rep.n_touching),
           CsvWriter::num(rep.mean_touching), CsvWriter::num(rep.ci_touching.half_width),
           CsvWriter::num(rep.n_finite), CsvWriter::num(rep.mean_finite),
           CsvWriter::num(rep.ci_finite.half_width)});
  } else {
    throw std::invalid_argument("config: unknown forest kind '" + kind + "'");
  }
  return w.str();
}

inline std::string run_ohd_gap(const ExperimentConfig& cfg, std::size_t cap,
                               unsigned threads) {
  reject_unknown(cfg, {"seed", "radii", "trials"});
  if (!has(cfg, "radii")) throw std::invalid_argument("config: 'radii' is required");
  std::vector<int> radii = parse_int_list(cfg.params.at("radii"), "radii");
  long trials = get_long(cfg, "trials", 0, 0, 100000000L);
  std::uint64_t seed = trials > 0 ? require_seed(cfg) : 0;
  CsvWriter w;
  emit_header(w, cfg);
  w.header({"radius", "free", "wired", "gap", "mc_gap", "mc_sigma"});
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    int rad = radii[ri];
    std::string spec = cfg.graph_spec + ":r" + std::to_string(rad);
    Graph g = parse_graph_spec(spec, counter_word(seed, stream::kProbe, rad), cap);
    double free_v = expected_degree(g, false).value;
    double wired_v = expected_degree(g, true).value;
    double mc_gap = 0.0, mc_sigma = 0.0;
    if (trials > 0) {
      std::vector<double> diff(trials, 0.0);
      bool tree_host = g.edge_count() == g.n - 1;
      WGraph wf;
      if (!tree_host) wf = wgraph_free(g, g.basepoint);
      WGraph ww = wgraph_wired(g);
      std::uint64_t sf = counter_word(seed, stream::kTrial, 2 * ri);
      std::uint64_t sw = counter_word(seed, stream::kTrial, 2 * ri + 1);
      parallel_for(trials, threads, [&](std::size_t i) {
        double df = tree_host
                        ? static_cast<double>(g.degree(g.basepoint))
                        : sample_degree_at(
                              wilson_sample(wf, counter_word(sf, stream::kTrial, i)),
                              g.basepoint);
        double dw = sample_degree_at(
            wilson_sample(ww, counter_word(sw, stream::kTrial, i)), g.basepoint);
        diff[i] = df - dw;
      });
      MeanCi ci = mean_ci(diff);
      mc_gap = ci.mean;
      mc_sigma = ci.stddev / std::sqrt(static_cast<double>(trials));
    }
    w.row({CsvWriter::num(rad), CsvWriter::num(free_v), CsvWriter::num(wired_v),
           CsvWriter::num(free_v - wired_v), CsvWriter::num(mc_gap),
           CsvWriter::num(mc_sigma)});
  }
  return w.str();
}

inline std::string run_entropy_probe(const ExperimentConfig& cfg) {
  reject_unknown(cfg, {"seed", "n", "trials", "step", "tgrid"});
  std::uint64_t seed = require_seed(cfg);
  long n = get_long(cfg, "n", 5, 2, 8);
  long trials = get_long(cfg, "trials", 10000, 1, 100000000L);
  double step = get_double(cfg, "step", 0.05);
  std::vector<double> tgrid = has(cfg, "tgrid")
                                  ? parse_double_list(cfg.params.at("tgrid"), "tgrid")
                                  : std::vector<double>{0.1, 1.0, 10.0};
  ProbeReport rep = monotonicity_probe(static_cast<int>(n), trials, tgrid, step, seed);
  CsvWriter w;
  emit_header(w, cfg);
  w.comment("comparisons = " + std::to_string(rep.comparisons));
  w.comment(std::string("conclusive = ") + (rep.conclusive() ? "1" : "0"));
  w.header({"candidate", "t", "i", "j", "h_base", "h_pert", "verified"});
  for (std::size_t c = 0; c < rep.candidates.size(); ++c) {
    const auto& v = rep.candidates[c];
    w.row({CsvWriter::num(c), CsvWriter::num(v.t), CsvWriter::num(v.i), CsvWriter::num(v.j),
           CsvWriter::num(v.h_base), CsvWriter::num(v.h_pert),
           CsvWriter::num(static_cast<int>(v.verified))});
  }
  return w.str();
}

}  // namespace detail_run

// Dispatch an experiment; returns the CSV text (the CLI decides where it goes).
inline std::string run(const ExperimentConfig& cfg, std::size_t vertex_cap = kDefaultVertexCap,
                       unsigned threads = 1) {
  const std::string& op = cfg.operation;
  bool needs_graph = op != "entropy-probe";
  if (needs_graph && cfg.graph_spec.empty())
    throw std::invalid_argument("config: missing 'graph' key");
  if (op == "gen") return detail_run::run_gen(cfg, vertex_cap);
  if (op == "percolate") return detail_run::run_percolate(cfg, vertex_cap);
  if (op == "trim") return detail_run::run_trim(cfg, vertex_cap);
  if (op == "walk") return detail_run::run_walk(cfg, vertex_cap, threads);
  if (op == "resist") return detail_run::run_resist(cfg, vertex_cap);
  if (op == "forest") return detail_run::run_forest(cfg, vertex_cap, threads);
  if (op == "ohd-gap") return detail_run::run_ohd_gap(cfg, vertex_cap, threads);
  if (op == "entropy-probe") return detail_run::run_entropy_probe(cfg);
  throw std::invalid_argument("config: unknown op '" + op + "'");
}

}  // namespace percolab

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/generators.hpp"
#include "percolab/graph.hpp"
#include "percolab/rng.hpp"
#include "percolab/stats.hpp"

namespace percolab {

enum class PercMode { kBond, kSite };

inline std::string perc_mode_name(PercMode m) { return m == PercMode::kBond ? "bond" : "site"; }

// A percolation sample: independent coins per edge (bond) or per vertex
// (site), reproducible from (seed, index) alone.
struct PercConfig {
  const Graph* host = nullptr;
  PercMode mode = PercMode::kBond;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> mask;  // per edge (bond) or per vertex (site)

  bool vertex_active(int v) const { return mode == PercMode::kBond ? true : mask[v] != 0; }
  bool edge_active(int e) const {
    if (mode == PercMode::kBond) return mask[e] != 0;
    auto [u, v] = host->edges[e];
    return mask[u] && mask[v];
  }
};

inline PercConfig sample_bond(const Graph& g, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_bond: p outside [0,1]");
  PercConfig cfg;
  cfg.host = &g;
  cfg.mode = PercMode::kBond;
  cfg.p = p;
  cfg.seed = seed;
  cfg.mask.resize(g.edge_count());
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e)
    cfg.mask[e] = uniform_from_word(counter_word(seed, stream::kBondMask, e)) < p;
  return cfg;
}

inline PercConfig sample_site(const Graph& g, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_site: p outside [0,1]");
  PercConfig cfg;
  cfg.host = &g;
  cfg.mode = PercMode::kSite;
  cfg.p = p;
  cfg.seed = seed;
  cfg.mask.resize(g.n);
  for (int v = 0; v < g.n; ++v)
    cfg.mask[v] = uniform_from_word(counter_word(seed, stream::kSiteMask, v)) < p;
  return cfg;
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // returns false if x and y were already joined
  bool unite(int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return false;
    if (size_[rx] < size_[ry]) std::swap(rx, ry);
    parent_[ry] = rx;
    size_[rx] += size_[ry];
    return true;
  }
  long size(int x) { return size_[find(x)]; }

 private:
  std::vector<int> parent_;
  std::vector<long> size_;
};

struct ClusterDecomposition {
  std::vector<int> label;                  // -1 for inactive vertices
  std::vector<long> sizes;                 // per cluster
  std::vector<std::uint8_t> touches_boundary;
  std::vector<long> edge_boundary;         // host edges leaving the cluster
  int count = 0;
};

inline ClusterDecomposition clusters(const PercConfig& cfg) {
  const Graph& g = *cfg.host;
  UnionFind uf(g.n);
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e)
    if (cfg.edge_active(e)) uf.unite(g.edges[e].first, g.edges[e].second);
  ClusterDecomposition out;
  out.label.assign(g.n, -1);
  std::vector<int> root_label(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    if (!cfg.vertex_active(v)) continue;
    int r = uf.find(v);
    if (root_label[r] < 0) {
      root_label[r] = out.count++;
      out.sizes.push_back(0);
      out.touches_boundary.push_back(0);
      out.edge_boundary.push_back(0);
    }
    out.label[v] = root_label[r];
    ++out.sizes[root_label[r]];
    if (g.is_boundary[v]) out.touches_boundary[root_label[r]] = 1;
  }
  for (const auto& [u, v] : g.edges) {
    int cu = out.label[u], cv = out.label[v];
    if (cu == cv) continue;
    if (cu >= 0) ++out.edge_boundary[cu];
    if (cv >= 0) ++out.edge_boundary[cv];
  }
  return out;
}

struct ReachEstimate {
  double p_hat = 0.0;
  double half_width = 0.0;  // normal-approximation 95% interval
  long trials = 0;
  long hits = 0;
};

// Monte Carlo estimate of P[basepoint cluster meets the boundary].
inline ReachEstimate boundary_reach_probability(const Graph& g, PercMode mode, double p,
                                                long trials, std::uint64_t seed,
                                                int threads = 0) {
  if (g.boundary_list.empty())
    throw std::invalid_argument("boundary_reach_probability: host has no boundary");
  if (trials < 1) throw std::invalid_argument("boundary_reach_probability: trials must be >= 1");
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, threads, [&](long t) {
    std::uint64_t trial_seed = counter_word(seed, stream::kTrial, static_cast<std::uint64_t>(t));
    PercConfig cfg = mode == PercMode::kBond ? sample_bond(g, p, trial_seed)
                                             : sample_site(g, p, trial_seed);
    if (!cfg.vertex_active(g.basepoint)) return;
    std::vector<std::uint8_t> seen(g.n, 0);
    std::vector<int> stack{g.basepoint};
    seen[g.basepoint] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (g.is_boundary[v]) {
        hit[t] = 1;
        return;
      }
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k) {
        int u = g.adj_vtx[k];
        if (!seen[u] && cfg.edge_active(g.adj_eid[k])) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
  });
  ReachEstimate out;
  out.trials = trials;
  for (long t = 0; t < trials; ++t) out.hits += hit[t];
  out.p_hat = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.half_width = binomial_half_width(out.p_hat, trials);
  return out;
}

// --- plain-text round trip for a sampled configuration ---

inline void write_perc_config(const PercConfig& cfg, std::ostream& os) {
  os << "mode " << perc_mode_name(cfg.mode) << "\n";
  os << "p " << cfg.p << "\n";
  os << "seed " << cfg.seed << "\n";
  os << "bits " << cfg.mask.size() << "\n";
  static const char* hex = "0123456789abcdef";
  std::string line;
  for (std::size_t i = 0; i < cfg.mask.size(); i += 4) {
    int nibble = 0;
    for (std::size_t j = 0; j < 4 && i + j < cfg.mask.size(); ++j)
      if (cfg.mask[i + j]) nibble |= 1 << j;
    line.push_back(hex[nibble]);
  }
  os << "mask " << line << "\n";
}

inline PercConfig parse_perc_config(const Graph& g, std::istream& is) {
  PercConfig cfg;
  cfg.host = &g;
  std::string key;
  std::size_t bits = 0;
  bool saw_mode = false, saw_mask = false;
  while (is >> key) {
    if (key == "mode") {
      std::string m;
      is >> m;
      if (m == "bond") cfg.mode = PercMode::kBond;
      else if (m == "site") cfg.mode = PercMode::kSite;
      else throw std::invalid_argument("parse_perc_config: unknown mode '" + m + "'");
      saw_mode = true;
    } else if (key == "p") {
      is >> cfg.p;
    } else if (key == "seed") {
      is >> cfg.seed;
    } else if (key == "bits") {
      is >> bits;
    } else if (key == "mask") {
      std::string line;
      is >> line;
      cfg.mask.assign(bits, 0);
      if (line.size() != (bits + 3) / 4)
        throw std::invalid_argument("parse_perc_config: mask length mismatch");
      for (std::size_t i = 0; i < bits; ++i) {
        char c = line[i / 4];
        int nibble = c >= 'a' ? c - 'a' + 10 : c - '0';
        if (nibble < 0 || nibble > 15)
          throw std::invalid_argument("parse_perc_config: bad mask digit");
        cfg.mask[i] = (nibble >> (i % 4)) & 1;
      }
      saw_mask = true;
    } else {
      throw std::invalid_argument("parse_perc_config: unknown key '" + key + "'");
    }
  }
  if (!saw_mode || !saw_mask) throw std::invalid_argument("parse_perc_config: incomplete input");
  std::size_t want = cfg.mode == PercMode::kBond ? g.edge_count() : static_cast<std::size_t>(g.n);
  if (cfg.mask.size() != want)
    throw std::invalid_argument("parse_perc_config: mask does not fit the host");
  return cfg;
}

// --- level-coupled percolation on the level-organized binary tree ---

// eta keeps, per tree level, either every edge crossing from that level to the
// next or none of them (one coin per level).  eta_prime then adds, for every
// finite (non boundary-touching) eta-component, exactly one uniformly chosen
// downward edge out of the component's bottom level.
struct HoroConfig {
  const HorocyclicTree* host = nullptr;
  double p0 = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> level_on;   // index k <-> level k - depth
  std::vector<std::uint8_t> eta;        // per host edge
  std::vector<int> eta_prime;           // host edge ids, disjoint from eta
  std::vector<std::uint8_t> omega_edge; // eta union eta_prime

  PercConfig omega() const {
    PercConfig cfg;
    cfg.host = &host->graph;
    cfg.mode = PercMode::kBond;
    cfg.p = p0;
    cfg.seed = seed;
    cfg.mask = omega_edge;
    return cfg;
  }
};

inline HoroConfig horocyclic_percolation(const HorocyclicTree& ht, double p0,
                                         std::uint64_t seed) {
  if (p0 < 0.0 || p0 > 1.0) throw std::invalid_argument("horocyclic_percolation: p0 outside [0,1]");
  const Graph& g = ht.graph;
  HoroConfig cfg;
  cfg.host = &ht;
  cfg.p0 = p0;
  cfg.seed = seed;
  cfg.level_on.resize(2 * ht.depth);
  for (int k = 0; k < 2 * ht.depth; ++k)
    cfg.level_on[k] = uniform_from_word(counter_word(seed, stream::kLevel, k)) < p0;
  cfg.eta.assign(g.edge_count(), 0);
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    auto [u, v] = g.edges[e];
    int top = std::min(ht.level[u], ht.level[v]);  // edge joins levels top, top+1
    cfg.eta[e] = cfg.level_on[top + ht.depth];
  }

  UnionFind uf(g.n);
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e)
    if (cfg.eta[e]) uf.unite(g.edges[e].first, g.edges[e].second);
  std::vector<std::vector<int>> comp_members(g.n);
  std::vector<int> comp_of(g.n);
  for (int v = 0; v < g.n; ++v) {
    comp_of[v] = uf.find(v);
    comp_members[comp_of[v]].push_back(v);
  }

  cfg.omega_edge = cfg.eta;
  for (int r = 0; r < g.n; ++r) {
    const auto& members = comp_members[r];
    if (members.empty()) continue;
    bool touches = false;
    int bottom = -ht.depth - 1;
    for (int v : members) {
      if (g.is_boundary[v]) touches = true;
      bottom = std::max(bottom, ht.level[v]);
    }
    if (touches) continue;
    // candidate edges: downward host edges out of the component's bottom level
    std::vector<int> candidates;
    for (int v : members) {
      if (ht.level[v] != bottom) continue;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k)
        if (ht.level[g.adj_vtx[k]] == bottom + 1) candidates.push_back(g.adj_eid[k]);
    }
    if (candidates.empty())
      throw std::logic_error("horocyclic_percolation: finite component with no downward edge");
    CounterRng rng(seed, substream(stream::kChoice, members.front()));
    int pick = candidates[rng.below(candidates.size())];
    cfg.eta_prime.push_back(pick);
    if (cfg.omega_edge[pick]) throw std::logic_error("horocyclic_percolation: duplicate edge");
    cfg.omega_edge[pick] = 1;
  }
  return cfg;
}

struct HoroAudit {
  bool ok = true;
  std::string issue;
  long interior_components = 0;   // eta-components not touching the boundary
  long boundary_components = 0;
  long added_edges = 0;
  bool omega_acyclic = true;
};

// Recomputes the eta-component structure independently and verifies the
// one-extra-edge-per-finite-component invariant plus acyclicity of omega.
inline HoroAudit audit_horocyclic(const HorocyclicTree& ht, const HoroConfig& cfg) {
  const Graph& g = ht.graph;
  HoroAudit out;
  auto fail = [&](const std::string& why) {
    out.ok = false;
    if (out.issue.empty()) out.issue = why;
  };

  // eta must match the level coins
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    auto [u, v] = g.edges[e];
    int top = std::min(ht.level[u], ht.level[v]) + ht.depth;
    if (cfg.eta[e] != cfg.level_on[top]) fail("eta edge disagrees with its level coin");
  }

  UnionFind uf(g.n);
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e)
    if (cfg.eta[e]) uf.unite(g.edges[e].first, g.edges[e].second);

  std::vector<int> extra_count(g.n, 0);
  for (int e : cfg.eta_prime) {
    if (e < 0 || e >= static_cast<int>(g.edge_count())) {
      fail("eta_prime edge id out of range");
      continue;
    }
    if (cfg.eta[e]) fail("eta_prime edge already present in eta");
    auto [u, v] = g.edges[e];
    int upper = ht.level[u] < ht.level[v] ? u : v;
    ++extra_count[uf.find(upper)];
  }

  std::vector<std::uint8_t> seen_root(g.n, 0), comp_touches(g.n, 0);
  std::vector<int> comp_bottom(g.n, -ht.depth - 1);
  for (int v = 0; v < g.n; ++v) {
    int r = uf.find(v);
    seen_root[r] = 1;
    if (g.is_boundary[v]) comp_touches[r] = 1;
    comp_bottom[r] = std::max(comp_bottom[r], ht.level[v]);
  }
  for (int r = 0; r < g.n; ++r) {
    if (!seen_root[r]) continue;
    if (comp_touches[r]) {
      ++out.boundary_components;
      if (extra_count[r] != 0) fail("boundary-touching component received an extra edge");
    } else {
      ++out.interior_components;
      if (extra_count[r] != 1) fail("finite component extra-edge count is not 1");
    }
  }
  // each extra edge must leave from the bottom level of its component
  for (int e : cfg.eta_prime) {
    if (e < 0 || e >= static_cast<int>(g.edge_count())) continue;
    auto [u, v] = g.edges[e];
    int upper = ht.level[u] < ht.level[v] ? u : v;
    if (ht.level[upper] != comp_bottom[uf.find(upper)])
      fail("eta_prime edge does not leave from the component bottom level");
  }
  out.added_edges = static_cast<long>(cfg.eta_prime.size());

  // omega mask consistency and acyclicity
  UnionFind uf2(g.n);
  long omega_edges = 0;
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    bool in_eta_prime = false;
    for (int x : cfg.eta_prime)
      if (x == e) in_eta_prime = true;
    bool want = cfg.eta[e] || in_eta_prime;
    if (static_cast<bool>(cfg.omega_edge[e]) != want) fail("omega mask mismatch");
    if (cfg.omega_edge[e]) {
      ++omega_edges;
      if (!uf2.unite(g.edges[e].first, g.edges[e].second)) {
        out.omega_acyclic = false;
        fail("omega contains a cycle");
      }
    }
  }
  (void)omega_edges;
  return out;
}

}  // namespace percolab

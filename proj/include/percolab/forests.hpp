#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/exact.hpp"
#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"
#include "percolab/resistance.hpp"
#include "percolab/rng.hpp"
#include "percolab/stats.hpp"

namespace percolab {

// Multigraph working copy for the loop-erased-walk sampler.  Wiring collapses
// the whole boundary into one terminal state; parallel edges that collapse
// creates are kept (merging them would change the spanning-tree measure).
struct WGraph {
  int n = 0;                             // states; wired: interiors + terminal
  std::vector<std::array<int, 2>> ends;  // per multi-edge
  std::vector<int> host_eid;             // multi-edge -> host edge id
  std::vector<int> off, nbr, eid;        // CSR adjacency over multi-edges
  int root = 0;
  std::vector<int> state_of;             // host vertex -> state
  const Graph* host = nullptr;
  bool wired = false;

  int other_end(int medge, int state) const {
    return ends[medge][0] == state ? ends[medge][1] : ends[medge][0];
  }
};

namespace detail {

inline void wgraph_finish_adjacency(WGraph& w) {
  std::vector<int> deg(w.n, 0);
  for (const auto& e : w.ends) {
    ++deg[e[0]];
    ++deg[e[1]];
  }
  w.off.assign(w.n + 1, 0);
  for (int v = 0; v < w.n; ++v) w.off[v + 1] = w.off[v] + deg[v];
  w.nbr.assign(w.off[w.n], 0);
  w.eid.assign(w.off[w.n], 0);
  std::vector<int> cur(w.off.begin(), w.off.end() - 1);
  for (int m = 0; m < static_cast<int>(w.ends.size()); ++m) {
    for (int side = 0; side < 2; ++side) {
      int v = w.ends[m][side];
      w.nbr[cur[v]] = w.ends[m][1 - side];
      w.eid[cur[v]] = m;
      ++cur[v];
    }
  }
}

}  // namespace detail

inline WGraph wgraph_free(const Graph& g, int root) {
  if (root < 0 || root >= g.n) throw std::invalid_argument("wgraph_free: root out of range");
  WGraph w;
  w.host = &g;
  w.n = g.n;
  w.root = root;
  w.state_of.resize(g.n);
  for (int v = 0; v < g.n; ++v) w.state_of[v] = v;
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    w.ends.push_back({g.edges[e].first, g.edges[e].second});
    w.host_eid.push_back(e);
  }
  detail::wgraph_finish_adjacency(w);
  return w;
}

inline WGraph wgraph_wired(const Graph& g) {
  if (g.boundary_list.empty()) throw std::invalid_argument("wgraph_wired: host has no boundary");
  WGraph w;
  w.host = &g;
  w.wired = true;
  w.state_of.assign(g.n, -1);
  int next = 0;
  for (int v = 0; v < g.n; ++v)
    if (!g.is_boundary[v]) w.state_of[v] = next++;
  const int super = next;
  for (int v = 0; v < g.n; ++v)
    if (g.is_boundary[v]) w.state_of[v] = super;
  w.n = next + 1;
  w.root = super;
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    int a = w.state_of[g.edges[e].first], b = w.state_of[g.edges[e].second];
    if (a == super && b == super) continue;  // boundary-boundary edges vanish
    w.ends.push_back({a, b});
    w.host_eid.push_back(e);
  }
  detail::wgraph_finish_adjacency(w);
  return w;
}

struct ForestSample {
  const Graph* host = nullptr;
  std::vector<int> edges;          // host edge ids, ascending
  std::vector<int> parent_vertex;  // per host vertex; -1 at roots/boundary
  std::vector<int> parent_edge;    // host edge id toward the root; -1 likewise
  bool wired = false;
  int root = -1;  // free: the root vertex; wired: -1 (collapsed terminal)
};

// Loop-erased-walk spanning-tree sampler; states are attacked in index order
// and walks follow adjacency slots, so a seed fixes the sample exactly.
inline ForestSample wilson_sample(const WGraph& w, std::uint64_t seed) {
  for (int v = 0; v < w.n; ++v)
    if (w.off[v + 1] == w.off[v] && v != w.root)
      throw std::invalid_argument("wilson_sample: isolated state");
  CounterRng rng(seed, stream::kTrial);
  std::vector<std::uint8_t> in_tree(w.n, 0);
  std::vector<int> exit_edge(w.n, -1);
  in_tree[w.root] = 1;
  for (int s = 0; s < w.n; ++s) {
    if (in_tree[s]) continue;
    int v = s;
    long guard = 0;
    const long guard_cap = 400L * w.n * (w.n + 4);
    while (!in_tree[v]) {
      int d = w.off[v + 1] - w.off[v];
      if (d == 0) throw std::runtime_error("wilson_sample: walk trapped");
      int k = static_cast<int>(rng.below(d));
      int m = w.eid[w.off[v] + k];
      exit_edge[v] = m;
      v = w.other_end(m, v);
      if (++guard > guard_cap)
        throw std::runtime_error("wilson_sample: walk exceeded the step guard (disconnected?)");
    }
    v = s;
    while (!in_tree[v]) {
      in_tree[v] = 1;
      v = w.other_end(exit_edge[v], v);
    }
  }

  const Graph& g = *w.host;
  ForestSample out;
  out.host = &g;
  out.wired = w.wired;
  out.parent_vertex.assign(g.n, -1);
  out.parent_edge.assign(g.n, -1);
  if (!w.wired) out.root = w.root;
  for (int v = 0; v < g.n; ++v) {
    int s = w.state_of[v];
    if (s == w.root && w.wired) continue;  // boundary vertices live in the terminal
    if (s == w.root) continue;
    int m = exit_edge[s];
    if (m < 0) throw std::logic_error("wilson_sample: tree state without an exit edge");
    int he = w.host_eid[m];
    out.edges.push_back(he);
    out.parent_edge[v] = he;
    out.parent_vertex[v] =
        g.edges[he].first == v ? g.edges[he].second : g.edges[he].first;
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

// The spanning-tree edge set is acyclic, spans every state, and has exactly
// states-1 edges; orientation has one outgoing edge per non-root state.
inline bool audit_forest_sample(const ForestSample& s) {
  const Graph& g = *s.host;
  std::vector<int> state(g.n, -1);
  int count = 0;
  if (s.wired) {
    for (int v = 0; v < g.n; ++v) state[v] = g.is_boundary[v] ? -2 : count++;
    int super = count++;
    for (int v = 0; v < g.n; ++v)
      if (state[v] == -2) state[v] = super;
  } else {
    for (int v = 0; v < g.n; ++v) state[v] = count++;
  }
  if (static_cast<int>(s.edges.size()) != count - 1) return false;
  UnionFind uf(count);
  for (int he : s.edges)
    if (!uf.unite(state[g.edges[he].first], state[g.edges[he].second])) return false;
  long outgoing = 0;
  for (int v = 0; v < g.n; ++v) {
    bool is_root_side = s.wired ? g.is_boundary[v] != 0 : v == s.root;
    if (is_root_side) {
      if (s.parent_edge[v] != -1) return false;
    } else {
      if (s.parent_edge[v] == -1) return false;
      ++outgoing;
    }
  }
  return outgoing == static_cast<long>(s.edges.size());
}

inline ForestSample wilson_ust(const Graph& g, int root, std::uint64_t seed) {
  return wilson_sample(wgraph_free(g, root), seed);
}

inline ForestSample ust_free(const Graph& g, std::uint64_t seed) {
  if (g.edge_count() == g.n - 1) {
    // a connected host with n-1 edges is its own unique spanning tree; walking
    // to the root on a tree is painfully slow, so build the sample directly
    ForestSample out;
    out.host = &g;
    out.root = g.basepoint;
    out.parent_vertex.assign(g.n, -1);
    out.parent_edge.assign(g.n, -1);
    auto dist = bfs_distances(g, g.basepoint);
    for (int v = 0; v < g.n; ++v) {
      if (dist[v] < 0) throw std::invalid_argument("ust_free: host is disconnected");
      if (v == g.basepoint) continue;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k)
        if (dist[g.adj_vtx[k]] == dist[v] - 1) {
          out.parent_vertex[v] = g.adj_vtx[k];
          out.parent_edge[v] = g.adj_eid[k];
          break;
        }
      out.edges.push_back(out.parent_edge[v]);
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
  }
  return wilson_ust(g, g.basepoint, seed);
}

inline ForestSample ust_wired(const Graph& g, std::uint64_t seed) {
  return wilson_sample(wgraph_wired(g), seed);
}

// All spanning trees of a tiny host, as sorted edge-id sets.
inline std::vector<std::vector<int>> enumerate_spanning_trees(const Graph& g,
                                                              int max_edges = 20) {
  int m = static_cast<int>(g.edge_count());
  if (m > max_edges)
    throw std::invalid_argument("enumerate_spanning_trees: host exceeds the edge cap");
  std::vector<std::vector<int>> out;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == g.n - 1) {
      UnionFind uf(g.n);
      for (int e : pick)
        if (!uf.unite(g.edges[e].first, g.edges[e].second)) return;
      out.push_back(pick);
      return;
    }
    int need = g.n - 1 - static_cast<int>(pick.size());
    for (int e = from; e + need <= m; ++e) {
      pick.push_back(e);
      rec(e + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

// P[e in UST] = effective resistance across e's endpoints (unit conductances).
inline Rational edge_prob_exact(const Graph& g, int e, int exact_cap = 300) {
  if (e < 0 || e >= static_cast<int>(g.edge_count()))
    throw std::invalid_argument("edge_prob_exact: edge out of range");
  return resistance_from_edges_rational(g.n, graph_edges(g), g.edges[e].first,
                                        {g.edges[e].second}, exact_cap);
}

struct RayleighCheck {
  Rational p_sub, p_full;
  bool ok = false;
};

// Deleting edges never lowers the inclusion probability of a surviving edge.
inline RayleighCheck rayleigh_monotonicity_check(const Graph& g, const PercConfig& sub, int e,
                                                 int exact_cap = 300) {
  if (e < 0 || e >= static_cast<int>(g.edge_count()))
    throw std::invalid_argument("rayleigh_monotonicity_check: edge out of range");
  if (!sub.edge_active(e))
    throw std::invalid_argument("rayleigh_monotonicity_check: edge absent from the subgraph");
  RayleighCheck out;
  out.p_full = edge_prob_exact(g, e, exact_cap);
  std::vector<WeightedEdge> kept;
  for (int i = 0; i < static_cast<int>(g.edge_count()); ++i)
    if (sub.edge_active(i)) kept.emplace_back(g.edges[i].first, g.edges[i].second, 1);
  out.p_sub = resistance_from_edges_rational(g.n, kept, g.edges[e].first, {g.edges[e].second},
                                             exact_cap);
  out.ok = out.p_sub >= out.p_full;
  return out;
}

// --- expected forest degree of the basepoint, by Kirchhoff sums ---------------

struct KirchhoffDegree {
  double value = 0.0;
  bool exact = false;     // rational arithmetic end to end
  Rational exact_value;
  bool wired = false;
};

// E[deg_F(o)] = sum over incident host edges of P[edge in the sample] = sum of
// effective resistances across the (collapsed) endpoints.
inline KirchhoffDegree expected_degree(const Graph& g, bool wired, int exact_cap = 300) {
  WGraph w = wired ? wgraph_wired(g) : wgraph_free(g, g.basepoint);
  std::vector<WeightedEdge> edges;
  std::map<std::pair<int, int>, long> mult;
  for (const auto& e : w.ends)
    ++mult[{std::min(e[0], e[1]), std::max(e[0], e[1])}];
  for (const auto& [key, m] : mult) edges.emplace_back(key.first, key.second, m);

  KirchhoffDegree out;
  out.wired = wired;
  out.exact = w.n <= exact_cap;
  const int o = g.basepoint;
  if (g.is_boundary[o] && wired)
    throw std::invalid_argument("expected_degree: basepoint is wired away");
  Rational total(0);
  double total_d = 0.0;
  std::map<std::pair<int, int>, Rational> cache_r;
  std::map<std::pair<int, int>, double> cache_d;
  int b = g.adj_off[o], e2 = g.adj_off[o + 1];
  for (int k = b; k < e2; ++k) {
    int a = w.state_of[o], c = w.state_of[g.adj_vtx[k]];
    std::pair<int, int> kp{std::min(a, c), std::max(a, c)};
    if (out.exact) {
      auto it = cache_r.find(kp);
      if (it == cache_r.end())
        it = cache_r.emplace(kp, resistance_from_edges_rational(w.n, edges, a, {c}, exact_cap))
                 .first;
      total += it->second;
    } else {
      auto it = cache_d.find(kp);
      if (it == cache_d.end())
        it = cache_d.emplace(kp, resistance_from_edges(w.n, edges, a, {c}).value).first;
      total_d += it->second;
    }
  }
  if (out.exact) {
    out.exact_value = total;
    out.value = to_double(total);
  } else {
    out.value = total_d;
  }
  return out;
}

// --- Monte Carlo degree reports ------------------------------------------------

struct DegreeReport {
  double mean = 0.0;
  MeanCi ci;
  long trials = 0;
  bool wired = false;
  std::string host_tag;
  double kirchhoff = std::numeric_limits<double>::quiet_NaN();
};

inline int sample_degree_at(const ForestSample& s, int v) {
  const Graph& g = *s.host;
  int d = 0;
  for (int he : s.edges)
    if (g.edges[he].first == v || g.edges[he].second == v) ++d;
  return d;
}

inline DegreeReport degree_report(const Graph& g, bool wired, long trials, std::uint64_t seed,
                                  int threads = 1, bool with_kirchhoff = true,
                                  int exact_cap = 300) {
  if (trials < 1) throw std::invalid_argument("degree_report: trials must be >= 1");
  DegreeReport out;
  out.wired = wired;
  out.trials = trials;
  out.host_tag = g.family_tag;
  std::vector<double> degs(trials, 0.0);
  if (!wired && g.edge_count() == g.n - 1) {
    // unique spanning tree: the report is deterministic
    std::fill(degs.begin(), degs.end(), static_cast<double>(g.degree(g.basepoint)));
  } else {
    WGraph w = wired ? wgraph_wired(g) : wgraph_free(g, g.basepoint);
    const int o_state = w.state_of[g.basepoint];
    if (wired && o_state == w.root)
      throw std::invalid_argument("degree_report: basepoint is wired away");
    parallel_for(trials, threads, [&](std::size_t i) {
      ForestSample s = wilson_sample(w, counter_word(seed, stream::kTrial, i));
      degs[i] = static_cast<double>(sample_degree_at(s, g.basepoint));
    });
  }
  out.ci = mean_ci(degs);
  out.mean = out.ci.mean;
  if (with_kirchhoff) out.kirchhoff = expected_degree(g, wired, exact_cap).value;
  return out;
}

struct ThresholdReport {
  double value = 0.0;        // 2 / E_free[deg(o)]
  bool exact = false;
  Rational exact_value;
  bool vacuous = false;      // free degree <= 2 puts the threshold at >= 1
  double free_degree = 0.0;
};

// Retention threshold from the free forest degree at the basepoint.
inline ThresholdReport p0_threshold(const Graph& g, long trials, std::uint64_t seed,
                                    int threads = 1, int exact_cap = 300) {
  ThresholdReport out;
  if (g.edge_count() == g.n - 1) {
    // tree host: the free forest is the host itself
    int d = g.degree(g.basepoint);
    out.free_degree = d;
    out.exact = true;
    out.exact_value = make_rational(2, d);
    out.value = to_double(out.exact_value);
    out.vacuous = d <= 2;
    return out;
  }
  if (g.n <= exact_cap) {
    auto kd = expected_degree(g, false, exact_cap);
    out.free_degree = kd.value;
    out.exact = kd.exact;
    if (kd.exact && kd.exact_value > 0) out.exact_value = Rational(2) / kd.exact_value;
    out.value = 2.0 / kd.value;
    out.vacuous = kd.value <= 2.0;
    return out;
  }
  auto rep = degree_report(g, false, trials, seed, threads, false);
  out.free_degree = rep.mean;
  out.value = 2.0 / rep.mean;
  out.vacuous = rep.mean <= 2.0;
  return out;
}

// --- oriented-sample bookkeeping -------------------------------------------------

struct OwsfAudit {
  bool orientation_ok = false;  // exactly one outgoing edge per non-root vertex
  long edges = 0;
  long out_sum = 0;
  long in_sum = 0;
  bool sums_equal = false;
  int basepoint_in_degree = 0;
  double interior_mean_in_degree = 0.0;
};

inline OwsfAudit owsf_degree_audit(const ForestSample& s) {
  const Graph& g = *s.host;
  OwsfAudit out;
  out.edges = static_cast<long>(s.edges.size());
  std::vector<int> indeg(g.n, 0);
  out.orientation_ok = true;
  for (int v = 0; v < g.n; ++v) {
    bool is_root_side = s.wired ? g.is_boundary[v] != 0 : v == s.root;
    if (is_root_side) {
      if (s.parent_edge[v] != -1) out.orientation_ok = false;
      continue;
    }
    if (s.parent_edge[v] == -1 || s.parent_vertex[v] < 0) {
      out.orientation_ok = false;
      continue;
    }
    ++out.out_sum;
    ++indeg[s.parent_vertex[v]];
  }
  for (int v = 0; v < g.n; ++v) out.in_sum += indeg[v];
  out.sums_equal = out.out_sum == out.in_sum && out.out_sum == out.edges;
  out.basepoint_in_degree = indeg[g.basepoint];
  long interior = 0, acc = 0;
  for (int v = 0; v < g.n; ++v) {
    if (g.is_boundary[v]) continue;
    ++interior;
    acc += indeg[v];
  }
  out.interior_mean_in_degree =
      interior > 0 ? static_cast<double>(acc) / static_cast<double>(interior) : 0.0;
  return out;
}

// --- degree dichotomy on tree hosts ----------------------------------------------

struct DichotomyReport {
  double mean_touching = 0.0;   // E[deg(o) | cluster meets the boundary]
  double mean_finite = 0.0;     // E[deg(o) | cluster stays interior]
  MeanCi ci_touching, ci_finite;
  long n_touching = 0, n_finite = 0, skipped = 0;
};

// On a tree host every percolation cluster is a tree and equals its own wired
// spanning forest, so cluster degrees are forest degrees.  Conditioning on
// whether the basepoint's component reaches the frontier is the finite stand-in
// for the infinite/finite component dichotomy.
inline DichotomyReport degree_dichotomy_experiment(const Graph& g, double p, long trials,
                                                   std::uint64_t seed) {
  if (g.edge_count() != g.n - 1)
    throw std::invalid_argument("degree_dichotomy_experiment: host must be a tree");
  DichotomyReport out;
  std::vector<double> touch, finite;
  for (long i = 0; i < trials; ++i) {
    PercConfig cfg = sample_bond(g, p, counter_word(seed, stream::kTrial, i));
    // cluster of o: degree and boundary reach in one sweep
    std::vector<std::uint8_t> seen(g.n, 0);
    std::vector<int> stack{g.basepoint};
    seen[g.basepoint] = 1;
    bool touches = false;
    int deg_o = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (g.is_boundary[v]) touches = true;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k) {
        if (!cfg.edge_active(g.adj_eid[k])) continue;
        if (v == g.basepoint) ++deg_o;
        int u = g.adj_vtx[k];
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    (touches ? touch : finite).push_back(static_cast<double>(deg_o));
  }
  out.n_touching = static_cast<long>(touch.size());
  out.n_finite = static_cast<long>(finite.size());
  if (!touch.empty()) {
    out.ci_touching = mean_ci(touch);
    out.mean_touching = out.ci_touching.mean;
  }
  if (!finite.empty()) {
    out.ci_finite = mean_ci(finite);
    out.mean_finite = out.ci_finite.mean;
  }
  return out;
}

}  // namespace percolab

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/exact.hpp"
#include "percolab/graph.hpp"

namespace percolab {

constexpr int kDefaultExhaustiveCap = 20;

// Average degree of the subgraph induced on the given vertex set.
inline Rational alpha_of_set(const Graph& g, const std::vector<int>& members) {
  if (members.empty()) throw std::invalid_argument("alpha_of_set: empty set");
  std::vector<std::uint8_t> in(g.n, 0);
  for (int v : members) in[v] = 1;
  long twice_edges = 0;
  for (int v : members)
    for (int u : g.neighbors(v))
      if (in[u]) ++twice_edges;
  return make_rational(twice_edges, static_cast<long>(members.size()));
}

struct SetVisit {
  const std::vector<int>& members;  // insertion order, members[0] is the seed vertex
  long induced_edges;               // edges with both endpoints in the set
  long boundary_edges;              // host edges with exactly one endpoint in the set
};

// Enumerates every connected vertex set of size <= max_size within the
// allowed universe exactly once (each set is grown from its smallest allowed
// vertex; declined extension candidates stay excluded along a branch).
// With root >= 0 only sets containing the root are produced.
inline void for_each_connected_set(const Graph& g, int max_size,
                                   const std::vector<std::uint8_t>& allowed, int root,
                                   const std::function<void(const SetVisit&)>& visit) {
  if (max_size < 1) return;
  std::vector<std::uint8_t> in_set(g.n, 0), forbidden(g.n, 0), seen(g.n, 0);
  std::vector<int> members;
  members.reserve(max_size);
  long induced = 0, boundary = 0;

  auto add_vertex = [&](int u) {
    long to_set = 0;
    for (int w : g.neighbors(u))
      if (in_set[w]) ++to_set;
    induced += to_set;
    boundary += g.degree(u) - 2 * to_set;
    in_set[u] = 1;
    members.push_back(u);
  };
  auto drop_vertex = [&]() {
    int u = members.back();
    members.pop_back();
    in_set[u] = 0;
    long to_set = 0;
    for (int w : g.neighbors(u))
      if (in_set[w]) ++to_set;
    induced -= to_set;
    boundary -= g.degree(u) - 2 * to_set;
  };

  // Branch on each frontier vertex in turn: first the sets containing it,
  // then (with it excluded for the rest of this level) the sets avoiding it.
  // The frontier is recomputed per level, so no candidate storage is shared
  // between levels.
  std::function<void()> rec = [&]() {
    visit(SetVisit{members, induced, boundary});
    if (static_cast<int>(members.size()) == max_size) return;
    std::vector<int> cand;
    for (int v : members)
      for (int w : g.neighbors(v))
        if (allowed[w] && !in_set[w] && !forbidden[w] && !seen[w]) {
          seen[w] = 1;
          cand.push_back(w);
        }
    for (int w : cand) seen[w] = 0;
    for (int u : cand) {
      add_vertex(u);
      rec();
      drop_vertex();
      forbidden[u] = 1;
    }
    for (int u : cand) forbidden[u] = 0;  // all were unforbidden at entry
  };

  if (root >= 0) {
    if (root >= g.n) throw std::invalid_argument("for_each_connected_set: root out of range");
    if (!allowed[root]) return;
    add_vertex(root);
    rec();
    drop_vertex();
    return;
  }
  for (int v = 0; v < g.n; ++v) {
    if (!allowed[v]) continue;
    add_vertex(v);
    rec();
    drop_vertex();
    forbidden[v] = 1;  // later seeds never revisit sets containing v
  }
}

namespace detail {
// ratio a1/b1 < a2/b2 for positive denominators, exact
inline bool ratio_less(long a1, long b1, long a2, long b2) {
  return static_cast<__int128>(a1) * b2 < static_cast<__int128>(a2) * b1;
}
inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return a < b;
}
}  // namespace detail

struct IsoEdgeResult {
  Rational value;            // min |boundary| / |S|
  std::vector<int> witness;  // sorted, lexicographically smallest among minimizers
  bool any_admissible = false;
  int max_size = 0;
};

// Exhaustive edge-isoperimetry scan over connected interior sets of size
// <= max_size; on boundary-free hosts sets larger than half the graph are
// excluded.  Refuses caps beyond the exhaustive limit.
inline IsoEdgeResult iso_edge_bruteforce(const Graph& g, int max_size,
                                         int exhaustive_cap = kDefaultExhaustiveCap) {
  if (max_size < 1) throw std::invalid_argument("iso_edge_bruteforce: max_size must be >= 1");
  if (max_size > exhaustive_cap)
    throw std::invalid_argument("iso_edge_bruteforce: max_size exceeds the exhaustive cap");
  std::vector<std::uint8_t> allowed(g.n);
  for (int v = 0; v < g.n; ++v) allowed[v] = !g.is_boundary[v];
  const bool halve = g.boundary_list.empty();
  const int size_limit = halve ? std::min(max_size, g.n / 2) : max_size;
  IsoEdgeResult out;
  out.max_size = max_size;
  long best_b = 0, best_s = 0;
  std::vector<int> best;
  for_each_connected_set(g, size_limit, allowed, -1, [&](const SetVisit& s) {
    long size = static_cast<long>(s.members.size());
    if (!out.any_admissible || detail::ratio_less(s.boundary_edges, size, best_b, best_s)) {
      out.any_admissible = true;
      best_b = s.boundary_edges;
      best_s = size;
      best = s.members;
      std::sort(best.begin(), best.end());
    } else if (s.boundary_edges * best_s == best_b * size) {
      std::vector<int> cand = s.members;
      std::sort(cand.begin(), cand.end());
      if (detail::lex_less(cand, best)) best = std::move(cand);
    }
  });
  if (!out.any_admissible)
    throw std::invalid_argument("iso_edge_bruteforce: no admissible interior set");
  out.value = make_rational(best_b, best_s);
  out.witness = std::move(best);
  return out;
}

struct AnchoredProfile {
  // per_size_min[k-1] = min ratio among anchored connected interior sets of
  // size exactly k (exact rationals, with the minimizing witness)
  std::vector<Rational> per_size_min;
  std::vector<std::vector<int>> per_size_witness;
  // values[n-1] = min ratio over sizes in [n, achieved max]; nondecreasing
  std::vector<Rational> values;
  std::vector<std::vector<int>> witnesses;
};

// Anchored expansion scan: connected interior sets containing the basepoint.
inline AnchoredProfile anchored_expansion_bruteforce(const Graph& g, int max_size,
                                                     int exhaustive_cap = kDefaultExhaustiveCap) {
  if (max_size < 1) throw std::invalid_argument("anchored_expansion_bruteforce: max_size must be >= 1");
  if (max_size > exhaustive_cap)
    throw std::invalid_argument("anchored_expansion_bruteforce: max_size exceeds the exhaustive cap");
  if (g.is_boundary[g.basepoint])
    throw std::invalid_argument("anchored_expansion_bruteforce: basepoint lies on the boundary");
  std::vector<std::uint8_t> allowed(g.n);
  for (int v = 0; v < g.n; ++v) allowed[v] = !g.is_boundary[v];
  std::vector<long> best_b(max_size, -1), best_s(max_size, 0);
  std::vector<std::vector<int>> best_w(max_size);
  for_each_connected_set(g, max_size, allowed, g.basepoint, [&](const SetVisit& s) {
    int k = static_cast<int>(s.members.size());
    long size = k;
    auto& bb = best_b[k - 1];
    auto& bs = best_s[k - 1];
    if (bb < 0 || detail::ratio_less(s.boundary_edges, size, bb, bs)) {
      bb = s.boundary_edges;
      bs = size;
      best_w[k - 1] = s.members;
      std::sort(best_w[k - 1].begin(), best_w[k - 1].end());
    } else if (s.boundary_edges * bs == bb * size) {
      std::vector<int> cand = s.members;
      std::sort(cand.begin(), cand.end());
      if (detail::lex_less(cand, best_w[k - 1])) best_w[k - 1] = std::move(cand);
    }
  });
  AnchoredProfile out;
  int achieved = 0;
  for (int k = 0; k < max_size; ++k)
    if (best_b[k] >= 0) achieved = k + 1;
  if (achieved == 0)
    throw std::invalid_argument("anchored_expansion_bruteforce: no admissible anchored set");
  for (int k = 0; k < achieved; ++k) {
    if (best_b[k] < 0)
      throw std::logic_error("anchored_expansion_bruteforce: size gap in connected enumeration");
    out.per_size_min.push_back(make_rational(best_b[k], best_s[k]));
    out.per_size_witness.push_back(best_w[k]);
  }
  out.values.resize(achieved);
  out.witnesses.resize(achieved);
  Rational run = out.per_size_min[achieved - 1];
  std::vector<int> run_w = out.per_size_witness[achieved - 1];
  out.values[achieved - 1] = run;
  out.witnesses[achieved - 1] = run_w;
  for (int k = achieved - 2; k >= 0; --k) {
    if (out.per_size_min[k] < run) {
      run = out.per_size_min[k];
      run_w = out.per_size_witness[k];
    }
    out.values[k] = run;
    out.witnesses[k] = run_w;
  }
  return out;
}

struct AlphaSup {
  Rational value;
  std::vector<int> witness;
  int cap = 0;
};

// Max induced average degree over connected sets of size <= cap.
inline AlphaSup alpha_sup_enumerated(const Graph& g, int cap) {
  if (cap < 1) throw std::invalid_argument("alpha_sup_enumerated: cap must be >= 1");
  std::vector<std::uint8_t> allowed(g.n, 1);
  long best_num = -1, best_den = 1;
  std::vector<int> best;
  for_each_connected_set(g, cap, allowed, -1, [&](const SetVisit& s) {
    long num = 2 * s.induced_edges;
    long den = static_cast<long>(s.members.size());
    if (best_num < 0 || detail::ratio_less(best_num, best_den, num, den)) {
      best_num = num;
      best_den = den;
      best = s.members;
      std::sort(best.begin(), best.end());
    }
  });
  AlphaSup out;
  out.value = make_rational(best_num, best_den);
  out.witness = std::move(best);
  out.cap = cap;
  return out;
}

struct GrowthProfile {
  std::vector<long> sphere_sizes;     // sphere_sizes[n] = # vertices at distance n
  std::vector<double> root_estimates; // sphere_sizes[n]^(1/n) for n >= 1
  double gr_estimate = 0.0;           // min of the root estimates
};

// Sphere counts around the basepoint; valid only while the ball is not
// truncated, so every vertex closer than r_max must be interior.
inline GrowthProfile growth_profile(const Graph& g, int r_max) {
  if (r_max < 1) throw std::invalid_argument("growth_profile: r_max must be >= 1");
  auto dist = bfs_distances(g, g.basepoint);
  for (int v = 0; v < g.n; ++v)
    if (g.is_boundary[v] && dist[v] >= 0 && dist[v] < r_max)
      throw std::invalid_argument("growth_profile: host ball is shallower than r_max");
  GrowthProfile out;
  out.sphere_sizes.assign(r_max + 1, 0);
  for (int v = 0; v < g.n; ++v)
    if (dist[v] >= 0 && dist[v] <= r_max) ++out.sphere_sizes[dist[v]];
  for (int n = 1; n <= r_max; ++n) {
    if (out.sphere_sizes[n] == 0)
      throw std::invalid_argument("growth_profile: empty sphere inside requested range");
    out.root_estimates.push_back(
        std::pow(static_cast<double>(out.sphere_sizes[n]), 1.0 / static_cast<double>(n)));
  }
  out.gr_estimate = *std::min_element(out.root_estimates.begin(), out.root_estimates.end());
  return out;
}

}  // namespace percolab

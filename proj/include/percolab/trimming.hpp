#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/exact.hpp"
#include "percolab/expansion.hpp"
#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Vertex/edge indicator masks for a subgraph of the host.
struct SubgraphState {
  std::vector<std::uint8_t> v_in;
  std::vector<std::uint8_t> e_in;

  long vertex_count() const {
    long c = 0;
    for (auto b : v_in) c += b;
    return c;
  }
  long edge_count() const {
    long c = 0;
    for (auto b : e_in) c += b;
    return c;
  }
};

inline SubgraphState initial_state(const PercConfig& cfg) {
  const Graph& g = *cfg.host;
  SubgraphState s;
  s.v_in.resize(g.n);
  s.e_in.resize(g.edge_count());
  for (int v = 0; v < g.n; ++v) s.v_in[v] = cfg.vertex_active(v);
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) s.e_in[e] = cfg.edge_active(e);
  return s;
}

inline SubgraphState full_state(const Graph& g) {
  SubgraphState s;
  s.v_in.assign(g.n, 1);
  s.e_in.assign(g.edge_count(), 1);
  return s;
}

// One component deleted by a sweep, with its edge counts at deletion time.
struct TrimComponent {
  std::vector<int> vertices;
  long internal_edges = 0;      // current-subgraph edges inside the component
  long boundary_edges = 0;      // current-subgraph edges leaving the component
  long host_induced_edges = 0;  // host edges inside the component
};

struct SweepRecord {
  std::vector<TrimComponent> removed;
  long removed_vertices = 0;
  long removed_edges = 0;  // internal + boundary over all removed components
  long vertices_left = 0;
  long edges_left = 0;
  bool basepoint_alive = false;
};

// One sweep: flip an independent fair coin per vertex, find the components of
// the marked part of the current subgraph, and delete every component that
// avoids the host boundary and has boundary-to-size ratio strictly below h.
// The decision uses the subgraph frozen at the start of the sweep.
inline SweepRecord trim_step(const Graph& g, SubgraphState& state, const Rational& h,
                             std::uint64_t seed, int sweep_index) {
  std::vector<std::uint8_t> marked(g.n, 0);
  const std::uint64_t sweep_stream = substream(stream::kSweep, sweep_index);
  for (int v = 0; v < g.n; ++v)
    if (state.v_in[v]) marked[v] = counter_word(seed, sweep_stream, v) >> 63;

  SweepRecord rec;
  std::vector<std::uint8_t> visited(g.n, 0), in_comp(g.n, 0);
  std::vector<int> stack;
  for (int s = 0; s < g.n; ++s) {
    if (!marked[s] || visited[s]) continue;
    std::vector<int> members;
    stack.push_back(s);
    visited[s] = 1;
    bool touches = false;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      in_comp[v] = 1;
      if (g.is_boundary[v]) touches = true;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k) {
        int u = g.adj_vtx[k];
        if (marked[u] && !visited[u] && state.e_in[g.adj_eid[k]]) {
          visited[u] = 1;
          stack.push_back(u);
        }
      }
    }
    long twice_internal = 0, bd = 0, twice_host = 0;
    for (int v : members) {
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k) {
        int u = g.adj_vtx[k];
        if (in_comp[u]) ++twice_host;
        if (!state.e_in[g.adj_eid[k]]) continue;
        if (in_comp[u]) ++twice_internal;
        else ++bd;
      }
    }
    for (int v : members) in_comp[v] = 0;
    bool removable =
        !touches && make_rational(bd, static_cast<long>(members.size())) < h;
    if (removable) {
      TrimComponent c;
      c.vertices = std::move(members);
      c.internal_edges = twice_internal / 2;
      c.boundary_edges = bd;
      c.host_induced_edges = twice_host / 2;
      rec.removed.push_back(std::move(c));
    }
  }
  // apply the deletions only after every component was judged
  for (const auto& c : rec.removed) {
    rec.removed_vertices += static_cast<long>(c.vertices.size());
    rec.removed_edges += c.internal_edges + c.boundary_edges;
    for (int v : c.vertices) {
      state.v_in[v] = 0;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k) state.e_in[g.adj_eid[k]] = 0;
    }
  }
  rec.vertices_left = state.vertex_count();
  rec.edges_left = state.edge_count();
  rec.basepoint_alive = state.v_in[g.basepoint] != 0;
  return rec;
}

struct TrimTrace {
  Rational h;
  std::uint64_t seed = 0;
  std::vector<SweepRecord> sweeps;
  SubgraphState final_state;
  bool converged = false;    // long trailing run of empty sweeps (or emptied out)
  int trailing_empty = 0;
  long total_removed_vertices = 0;
  long total_removed_edges = 0;
};

inline int default_trim_sweeps(int n) {
  int bits = 1;
  while ((1 << bits) < n && bits < 30) ++bits;
  return 10 * bits;
}

// Runs the full sweep budget (no early declaration of convergence off a lucky
// empty sweep: a single empty sweep is only a coin-pattern away from leaving a
// removable set behind).  Stops early only when nothing is left to remove.
inline TrimTrace trim(const Graph& g, const PercConfig& start, const Rational& h,
                      std::uint64_t seed, int max_sweeps = 0, int converged_streak = 20) {
  if (h <= 0) throw std::invalid_argument("trim: h must be positive");
  if (max_sweeps <= 0) max_sweeps = default_trim_sweeps(g.n);
  TrimTrace trace;
  trace.h = h;
  trace.seed = seed;
  trace.final_state = initial_state(start);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    SweepRecord rec = trim_step(g, trace.final_state, h, seed, sweep);
    trace.total_removed_vertices += rec.removed_vertices;
    trace.total_removed_edges += rec.removed_edges;
    bool empty = rec.removed.empty();
    bool all_gone = rec.vertices_left == 0;
    trace.sweeps.push_back(std::move(rec));
    trace.trailing_empty = empty ? trace.trailing_empty + 1 : 0;
    if (all_gone) {
      trace.converged = true;
      break;
    }
  }
  if (trace.trailing_empty >= converged_streak) trace.converged = true;
  return trace;
}

// Fraction of interior host vertices still present.
inline double theta_interior(const Graph& g, const SubgraphState& state) {
  long interior = 0, alive = 0;
  for (int v = 0; v < g.n; ++v) {
    if (g.is_boundary[v]) continue;
    ++interior;
    alive += state.v_in[v];
  }
  if (interior == 0) throw std::invalid_argument("theta_interior: host has no interior");
  return static_cast<double>(alive) / static_cast<double>(interior);
}

inline Rational mean_degree_exact(const Graph& g, const SubgraphState& state) {
  return make_rational(2 * state.edge_count(), g.n);
}

struct IsoCheckReport {
  bool violation = false;
  std::vector<int> witness;
  bool exhaustive = false;  // full enumeration up to the cap
  bool partial = false;     // only boundary sizes 0 and 1 were searched
  Rational min_ratio;       // valid only when exhaustive and admissible sets exist
  bool min_ratio_valid = false;
  long sets_checked = 0;
};

namespace detail {

// connected components of the surviving subgraph (interior + boundary alike)
inline std::vector<std::vector<int>> live_components(const Graph& g, const SubgraphState& state) {
  std::vector<std::vector<int>> comps;
  std::vector<std::uint8_t> visited(g.n, 0);
  std::vector<int> stack;
  for (int s = 0; s < g.n; ++s) {
    if (!state.v_in[s] || visited[s]) continue;
    std::vector<int> members;
    stack.push_back(s);
    visited[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k)
        if (state.e_in[g.adj_eid[k]] && !visited[g.adj_vtx[k]]) {
          visited[g.adj_vtx[k]] = 1;
          stack.push_back(g.adj_vtx[k]);
        }
    }
    comps.push_back(std::move(members));
  }
  return comps;
}

}  // namespace detail

// Checks whether the surviving subgraph still contains a small interior set
// with boundary ratio below h.  Exhaustive when the instance is small or the
// allowed boundary count is 0/1; otherwise searches boundary sizes 0 and 1
// (exact for h * cap <= 2) and flags the report partial.
inline IsoCheckReport verify_isoperimetry(const Graph& g, const SubgraphState& state,
                                          const Rational& h, int cap,
                                          bool force_exhaustive = false,
                                          long exhaustive_budget = 200000) {
  if (cap < 1) throw std::invalid_argument("verify_isoperimetry: cap must be >= 1");
  IsoCheckReport out;
  long active_interior = 0;
  for (int v = 0; v < g.n; ++v)
    if (state.v_in[v] && !g.is_boundary[v]) ++active_interior;
  if (active_interior == 0) {
    out.exhaustive = true;
    return out;
  }

  // largest integer boundary count that a violating set of size <= cap may have
  Rational hc = h * cap;
  long b_max = static_cast<long>(std::floor(to_double(hc)));
  while (make_rational(b_max, 1) >= hc) --b_max;
  while (make_rational(b_max + 1, 1) < hc) ++b_max;

  bool small_enough = active_interior <= exhaustive_budget / 64;
  if (force_exhaustive || (b_max >= 2 && small_enough)) {
    // full enumeration over surviving interior vertices and surviving edges
    std::vector<std::uint8_t> allowed(g.n, 0);
    for (int v = 0; v < g.n; ++v) allowed[v] = state.v_in[v] && !g.is_boundary[v];
    // boundary counts must follow surviving edges, so run a bespoke scan
    // (induced counters from the host would overcount deleted edges)
    Graph sub;  // host restricted to surviving edges, same vertex ids
    std::vector<std::pair<int, int>> kept;
    for (int e = 0; e < static_cast<int>(g.edge_count()); ++e)
      if (state.e_in[e]) kept.push_back(g.edges[e]);
    std::vector<int> bd(g.boundary_list);
    sub = build_graph(g.n, std::move(kept), g.basepoint, std::move(bd), "trim-check");
    bool found_any = false;
    Rational best;
    std::vector<int> best_w;
    long checked = 0;
    for_each_connected_set(sub, cap, allowed, -1, [&](const SetVisit& s) {
      ++checked;
      Rational ratio = make_rational(s.boundary_edges, static_cast<long>(s.members.size()));
      if (!found_any || ratio < best) {
        found_any = true;
        best = ratio;
        best_w = s.members;
      }
    });
    out.sets_checked = checked;
    out.exhaustive = true;
    if (found_any) {
      out.min_ratio = best;
      out.min_ratio_valid = true;
      if (best < h) {
        out.violation = true;
        std::sort(best_w.begin(), best_w.end());
        out.witness = std::move(best_w);
      }
    }
    return out;
  }

  // targeted scan: sets with surviving boundary 0 or 1
  out.exhaustive = b_max <= 1;
  out.partial = !out.exhaustive;
  // boundary 0: whole surviving components that sit in the interior
  for (const auto& comp : detail::live_components(g, state)) {
    if (static_cast<long>(comp.size()) > cap) continue;
    bool interior_only = true;
    for (int v : comp)
      if (g.is_boundary[v]) interior_only = false;
    if (!interior_only) continue;
    ++out.sets_checked;
    // ratio 0 < h always (h > 0)
    out.violation = true;
    out.witness = comp;
    std::sort(out.witness.begin(), out.witness.end());
    return out;
  }
  if (b_max >= 1) {
    // boundary 1: one-edge cuts; try both sides of every surviving edge
    std::vector<int> side;
    std::vector<std::uint8_t> seen(g.n, 0);
    for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
      if (!state.e_in[e]) continue;
      for (int root : {g.edges[e].first, g.edges[e].second}) {
        side.clear();
        side.push_back(root);
        seen[root] = 1;
        bool closed = true, interior_only = !g.is_boundary[root];
        for (std::size_t head = 0; head < side.size() && closed && interior_only; ++head) {
          int v = side[head];
          int b = g.adj_off[v], last = g.adj_off[v + 1];
          for (int k = b; k < last; ++k) {
            int eid = g.adj_eid[k];
            if (eid == e || !state.e_in[eid]) continue;
            int u = g.adj_vtx[k];
            if (seen[u]) continue;
            if (g.is_boundary[u]) {
              interior_only = false;
              break;
            }
            if (static_cast<long>(side.size()) >= cap) {
              closed = false;
              break;
            }
            seen[u] = 1;
            side.push_back(u);
          }
        }
        bool other_inside = seen[root == g.edges[e].first ? g.edges[e].second : g.edges[e].first];
        for (int v : side) seen[v] = 0;
        if (!closed || !interior_only || other_inside) continue;
        ++out.sets_checked;
        if (make_rational(1, static_cast<long>(side.size())) < h) {
          out.violation = true;
          out.witness = side;
          std::sort(out.witness.begin(), out.witness.end());
          return out;
        }
      }
    }
  }
  return out;
}

struct DensityBound {
  double value = 0.0;
  bool vacuous = false;  // bound <= 0 carries no information
};

// Lower bound on the surviving density after trimming at parameter h:
//   p_in * (1 - (deg - mean_deg_given_in) / (iso - 2h)).
// p_in: probability a vertex enters the initial subgraph; deg: host degree;
// mean_deg_given_in: expected initial degree of a vertex that did enter.
inline DensityBound density_lower_bound(double p_in, double deg, double mean_deg_given_in,
                                        double iso, double h) {
  if (!(p_in > 0.0) || p_in > 1.0) throw std::invalid_argument("density_lower_bound: p_in");
  if (mean_deg_given_in > deg + 1e-12)
    throw std::invalid_argument("density_lower_bound: conditional mean exceeds degree");
  double denom = iso - 2.0 * h;
  if (denom <= 0.0)
    throw std::domain_error("density_lower_bound: needs iso > 2h");
  DensityBound out;
  out.value = p_in * (1.0 - (deg - mean_deg_given_in) / denom);
  out.vacuous = out.value <= 0.0;
  return out;
}

}  // namespace percolab

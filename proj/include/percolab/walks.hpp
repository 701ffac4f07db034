#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/exact.hpp"
#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"
#include "percolab/resistance.hpp"
#include "percolab/rng.hpp"
#include "percolab/stats.hpp"
#include "percolab/tree_chain.hpp"
#include "percolab/trimming.hpp"

namespace percolab {

enum class WalkKind { kSimple, kDelayed, kInduced };

struct WalkPath {
  WalkKind kind = WalkKind::kSimple;
  std::vector<int> vertices;       // X(0..T), X(0) = basepoint
  std::vector<long> return_times;  // induced walks: the visit times t_k
  bool absorbed = false;           // stopped on a host-boundary vertex
  bool truncated = false;          // induced walk ran out of excursion budget
};

inline int boundary_distance(const Graph& g) {
  if (g.boundary_list.empty()) return g.n + 1;
  auto dist = bfs_distances(g, g.basepoint);
  int best = g.n + 1;
  for (int b : g.boundary_list)
    if (dist[b] >= 0) best = std::min(best, dist[b]);
  return best;
}

// Uniform-neighbor walk on the full host, absorbed at the boundary.
inline WalkPath walk_simple(const Graph& g, long steps, std::uint64_t seed) {
  if (g.degree(g.basepoint) == 0)
    throw std::invalid_argument("walk_simple: isolated basepoint");
  WalkPath path;
  path.kind = WalkKind::kSimple;
  CounterRng rng(seed, stream::kTrial);
  int v = g.basepoint;
  path.vertices.push_back(v);
  for (long s = 0; s < steps; ++s) {
    if (g.is_boundary[v]) {
      path.absorbed = true;
      break;
    }
    auto nb = g.neighbors(v);
    v = nb[rng.below(nb.size())];
    path.vertices.push_back(v);
  }
  if (!path.vertices.empty() && g.is_boundary[path.vertices.back()]) path.absorbed = true;
  return path;
}

// Uniform walk on the basepoint's percolation cluster.
inline WalkPath walk_simple(const PercConfig& cfg, long steps, std::uint64_t seed) {
  const Graph& g = *cfg.host;
  if (!cfg.vertex_active(g.basepoint))
    throw std::invalid_argument("walk_simple: basepoint not occupied");
  WalkPath path;
  path.kind = WalkKind::kSimple;
  CounterRng rng(seed, stream::kTrial);
  int v = g.basepoint;
  std::vector<int> nb;
  path.vertices.push_back(v);
  for (long s = 0; s < steps; ++s) {
    if (g.is_boundary[v]) {
      path.absorbed = true;
      break;
    }
    nb.clear();
    int b = g.adj_off[v], e = g.adj_off[v + 1];
    for (int k = b; k < e; ++k)
      if (cfg.edge_active(g.adj_eid[k])) nb.push_back(g.adj_vtx[k]);
    if (nb.empty()) {
      if (s == 0) throw std::invalid_argument("walk_simple: isolated basepoint");
      break;  // isolated non-start vertex cannot occur on a cluster walk
    }
    v = nb[rng.below(nb.size())];
    path.vertices.push_back(v);
  }
  if (g.is_boundary[path.vertices.back()]) path.absorbed = true;
  return path;
}

// Delayed walk: propose uniformly among the current vertex and its host
// neighbors, move only if the proposed edge is open.
inline WalkPath walk_delayed(const PercConfig& cfg, long steps, std::uint64_t seed) {
  const Graph& g = *cfg.host;
  if (!cfg.vertex_active(g.basepoint))
    throw std::invalid_argument("walk_delayed: basepoint not occupied");
  WalkPath path;
  path.kind = WalkKind::kDelayed;
  CounterRng rng(seed, stream::kTrial);
  int v = g.basepoint;
  path.vertices.push_back(v);
  for (long s = 0; s < steps; ++s) {
    if (g.is_boundary[v]) {
      path.absorbed = true;
      break;
    }
    int b = g.adj_off[v], e = g.adj_off[v + 1];
    int pick = static_cast<int>(rng.below(e - b + 1));
    if (pick < e - b && cfg.edge_active(g.adj_eid[b + pick])) v = g.adj_vtx[b + pick];
    path.vertices.push_back(v);
  }
  if (g.is_boundary[path.vertices.back()]) path.absorbed = true;
  return path;
}

// Delayed walk watched at its successive visits to vstar; `steps` counts
// recorded visits, each excursion capped by a step budget.
inline WalkPath walk_induced(const PercConfig& cfg, const std::vector<int>& vstar, long steps,
                             std::uint64_t seed, long excursion_budget = 1000000) {
  const Graph& g = *cfg.host;
  if (vstar.empty()) throw std::invalid_argument("walk_induced: empty vertex set");
  std::vector<std::uint8_t> in_star(g.n, 0);
  for (int v : vstar) {
    if (v < 0 || v >= g.n) throw std::invalid_argument("walk_induced: vertex out of range");
    in_star[v] = 1;
  }
  if (!in_star[g.basepoint]) throw std::invalid_argument("walk_induced: basepoint not in vstar");
  if (!cfg.vertex_active(g.basepoint))
    throw std::invalid_argument("walk_induced: basepoint not occupied");
  // vstar must sit inside the basepoint's cluster
  {
    std::vector<std::uint8_t> seen(g.n, 0);
    std::vector<int> stack{g.basepoint};
    seen[g.basepoint] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k)
        if (cfg.edge_active(g.adj_eid[k]) && !seen[g.adj_vtx[k]]) {
          seen[g.adj_vtx[k]] = 1;
          stack.push_back(g.adj_vtx[k]);
        }
    }
    for (int v : vstar)
      if (!seen[v]) throw std::invalid_argument("walk_induced: vstar leaves the basepoint cluster");
  }

  WalkPath path;
  path.kind = WalkKind::kInduced;
  CounterRng rng(seed, stream::kTrial);
  int v = g.basepoint;
  long t = 0;
  path.vertices.push_back(v);
  path.return_times.push_back(0);
  while (static_cast<long>(path.vertices.size()) <= steps) {
    long excursion = 0;
    bool recorded = false;
    while (excursion < excursion_budget) {
      if (g.is_boundary[v]) {
        path.absorbed = true;
        return path;
      }
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      int pick = static_cast<int>(rng.below(e - b + 1));
      if (pick < e - b && cfg.edge_active(g.adj_eid[b + pick])) v = g.adj_vtx[b + pick];
      ++t;
      ++excursion;
      if (in_star[v]) {
        path.vertices.push_back(v);
        path.return_times.push_back(t);
        recorded = true;
        break;
      }
    }
    if (!recorded) {
      path.truncated = true;
      break;
    }
  }
  return path;
}

// --- exact chain audits -----------------------------------------------------

namespace detail {

inline std::vector<int> cluster_vertices(const PercConfig& cfg) {
  const Graph& g = *cfg.host;
  if (!cfg.vertex_active(g.basepoint))
    throw std::invalid_argument("cluster_vertices: basepoint not occupied");
  std::vector<std::uint8_t> seen(g.n, 0);
  std::vector<int> order{g.basepoint};
  seen[g.basepoint] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int v = order[head];
    int b = g.adj_off[v], e = g.adj_off[v + 1];
    for (int k = b; k < e; ++k)
      if (cfg.edge_active(g.adj_eid[k]) && !seen[g.adj_vtx[k]]) {
        seen[g.adj_vtx[k]] = 1;
        order.push_back(g.adj_vtx[k]);
      }
  }
  std::sort(order.begin(), order.end());
  return order;
}

inline void require_regular_host(const Graph& g, const std::string& who) {
  for (int v = 0; v < g.n; ++v)
    if (!g.is_boundary[v] && g.degree(v) != g.degree(g.basepoint))
      throw std::invalid_argument(who + ": host is not regular");
  if (!g.boundary_list.empty())
    throw std::invalid_argument(who + ": host has a boundary");
}

}  // namespace detail

struct ChainMatrix {
  std::vector<int> states;                    // vertex ids, ascending
  std::vector<std::vector<Rational>> p;       // transition probabilities
  bool rows_stochastic = false;
  bool doubly_stochastic = false;
};

// Exact transition matrix of the delayed walk on the basepoint cluster.
// Regular boundary-free hosts only: that is the regime where the uniform law
// is stationary, which is what the audit certifies.
inline ChainMatrix delayed_chain_matrix(const PercConfig& cfg, int state_cap = 200) {
  const Graph& g = *cfg.host;
  detail::require_regular_host(g, "delayed_chain_matrix");
  ChainMatrix out;
  out.states = detail::cluster_vertices(cfg);
  int m = static_cast<int>(out.states.size());
  if (m > state_cap) throw std::invalid_argument("delayed_chain_matrix: cluster exceeds state cap");
  std::vector<int> idx(g.n, -1);
  for (int i = 0; i < m; ++i) idx[out.states[i]] = i;
  out.p.assign(m, std::vector<Rational>(m, Rational(0)));
  for (int i = 0; i < m; ++i) {
    int v = out.states[i];
    Rational stay(1);
    const Rational step = make_rational(1, g.degree(v) + 1);
    int b = g.adj_off[v], e = g.adj_off[v + 1];
    for (int k = b; k < e; ++k) {
      if (!cfg.edge_active(g.adj_eid[k])) continue;
      int j = idx[g.adj_vtx[k]];
      out.p[i][j] += step;
      stay -= step;
    }
    out.p[i][i] += stay;
  }
  out.rows_stochastic = true;
  out.doubly_stochastic = true;
  for (int i = 0; i < m; ++i) {
    Rational row(0), col(0);
    for (int j = 0; j < m; ++j) {
      row += out.p[i][j];
      col += out.p[j][i];
    }
    if (row != 1) out.rows_stochastic = false;
    if (col != 1) out.doubly_stochastic = false;
  }
  return out;
}

// Exact transition matrix of the induced walk on vstar: excursion absorption
// probabilities solved by rational elimination.
inline ChainMatrix induced_chain_matrix(const PercConfig& cfg, const std::vector<int>& vstar,
                                        int state_cap = 200) {
  const Graph& g = *cfg.host;
  detail::require_regular_host(g, "induced_chain_matrix");
  ChainMatrix delayed = delayed_chain_matrix(cfg, state_cap);
  int m = static_cast<int>(delayed.states.size());
  std::vector<int> pos(g.n, -1);
  for (int i = 0; i < m; ++i) pos[delayed.states[i]] = i;
  std::vector<std::uint8_t> star(m, 0);
  for (int v : vstar) {
    if (v < 0 || v >= g.n || pos[v] < 0)
      throw std::invalid_argument("induced_chain_matrix: vstar leaves the cluster");
    star[pos[v]] = 1;
  }
  std::vector<int> star_ids, other_ids;
  for (int i = 0; i < m; ++i) (star[i] ? star_ids : other_ids).push_back(i);
  if (star_ids.empty()) throw std::invalid_argument("induced_chain_matrix: empty vstar");
  int ns = static_cast<int>(star_ids.size()), no = static_cast<int>(other_ids.size());

  // H[s][y] = P[first vstar visit is y | start at non-star s]:  (I - Q) H = R
  std::vector<std::vector<Rational>> a(no, std::vector<Rational>(no + ns, Rational(0)));
  for (int r = 0; r < no; ++r) {
    for (int c = 0; c < no; ++c) a[r][c] = -delayed.p[other_ids[r]][other_ids[c]];
    a[r][r] += 1;
    for (int c = 0; c < ns; ++c) a[r][no + c] = delayed.p[other_ids[r]][star_ids[c]];
  }
  for (int col = 0; col < no; ++col) {
    int pivot = -1;
    for (int r = col; r < no; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0)
      throw std::runtime_error("induced_chain_matrix: excursion system is singular");
    std::swap(a[col], a[pivot]);
    for (int r = col + 1; r < no; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (int c = col; c < no + ns; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<std::vector<Rational>> h(no, std::vector<Rational>(ns, Rational(0)));
  for (int r = no - 1; r >= 0; --r) {
    for (int y = 0; y < ns; ++y) {
      Rational acc = a[r][no + y];
      for (int c = r + 1; c < no; ++c) acc -= a[r][c] * h[c][y];
      h[r][y] = acc / a[r][r];
    }
  }

  ChainMatrix out;
  out.states.reserve(ns);
  for (int i = 0; i < ns; ++i) out.states.push_back(delayed.states[star_ids[i]]);
  out.p.assign(ns, std::vector<Rational>(ns, Rational(0)));
  std::vector<int> other_pos(m, -1);
  for (int i = 0; i < no; ++i) other_pos[other_ids[i]] = i;
  for (int x = 0; x < ns; ++x)
    for (int y = 0; y < ns; ++y) {
      Rational acc = delayed.p[star_ids[x]][star_ids[y]];
      for (int s = 0; s < no; ++s) {
        const Rational& step = delayed.p[star_ids[x]][other_ids[s]];
        if (step != 0) acc += step * h[s][y];
      }
      out.p[x][y] = acc;
    }
  out.rows_stochastic = true;
  out.doubly_stochastic = true;
  for (int i = 0; i < ns; ++i) {
    Rational row(0), col(0);
    for (int j = 0; j < ns; ++j) {
      row += out.p[i][j];
      col += out.p[j][i];
    }
    if (row != 1) out.rows_stochastic = false;
    if (col != 1) out.doubly_stochastic = false;
  }
  return out;
}

// --- exact distributions and spectral estimates ------------------------------

struct DistVector {
  std::vector<double> mu;  // per vertex
  long t = 0;
  double total = 0.0;
};

// Exact law of the simple walk at time t from the basepoint; t must stay
// short of the boundary so finite truncation is invisible.
inline DistVector distribution_exact(const Graph& g, long t) {
  int bd = boundary_distance(g);
  if (t >= bd) throw std::invalid_argument("distribution_exact: time reaches the boundary");
  DistVector out;
  out.t = t;
  out.mu.assign(g.n, 0.0);
  out.mu[g.basepoint] = 1.0;
  std::vector<double> next(g.n, 0.0);
  for (long s = 0; s < t; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int v = 0; v < g.n; ++v) {
      if (out.mu[v] == 0.0) continue;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      double share = out.mu[v] / static_cast<double>(e - b);
      for (int k = b; k < e; ++k) next[g.adj_vtx[k]] += share;
    }
    out.mu.swap(next);
  }
  KahanSum sum;
  for (double x : out.mu) sum.add(x);
  out.total = sum.value();
  if (std::abs(out.total - 1.0) > 1e-12)
    throw std::runtime_error("distribution_exact: mass leaked beyond tolerance");
  return out;
}

inline std::vector<Rational> distribution_exact_rational(const Graph& g, long t) {
  int bd = boundary_distance(g);
  if (t >= bd) throw std::invalid_argument("distribution_exact: time reaches the boundary");
  std::vector<Rational> mu(g.n, Rational(0)), next(g.n, Rational(0));
  mu[g.basepoint] = 1;
  for (long s = 0; s < t; ++s) {
    for (auto& x : next) x = 0;
    for (int v = 0; v < g.n; ++v) {
      if (mu[v] == 0) continue;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      Rational share = mu[v] / (e - b);
      for (int k = b; k < e; ++k) next[g.adj_vtx[k]] += share;
    }
    mu.swap(next);
  }
  Rational total(0);
  for (const auto& x : mu) total += x;
  if (total != 1) throw std::runtime_error("distribution_exact: rational mass not conserved");
  return mu;
}

struct SpectralProfile {
  std::vector<long> times;        // even times 2,4,...
  std::vector<double> naive;      // p_{2t}(o,o)^(1/(2t))
  std::vector<double> corrected;  // ratio estimator with the t^(-3/2) factor
  double estimate = 0.0;          // final corrected value
};

namespace detail {

inline SpectralProfile spectral_from_returns(const std::vector<double>& p2t) {
  // p2t[i] = return probability at time 2(i+1)
  SpectralProfile out;
  for (std::size_t i = 0; i < p2t.size(); ++i) {
    long t2 = 2 * static_cast<long>(i + 1);
    out.times.push_back(t2);
    out.naive.push_back(std::pow(p2t[i], 1.0 / static_cast<double>(t2)));
    if (i == 0) {
      out.corrected.push_back(out.naive.back());
    } else {
      double t = static_cast<double>(i + 1), ratio = p2t[i] / p2t[i - 1];
      out.corrected.push_back(std::sqrt(ratio * std::pow(t / (t - 1.0), 1.5)));
    }
  }
  if (!out.corrected.empty()) out.estimate = out.corrected.back();
  return out;
}

}  // namespace detail

// Return-probability roots at even times (odd times vanish on bipartite
// graphs).  The naive root converges like 1 + O(log t / t); the corrected
// column divides consecutive returns and strips the generic t^(-3/2)
// polynomial factor, which is what the headline estimate uses.
inline SpectralProfile spectral_radius_profile(const Graph& g, long t_max) {
  int bd = boundary_distance(g);
  if (t_max < 1) throw std::invalid_argument("spectral_radius_profile: t_max must be >= 1");
  if (t_max >= bd)
    throw std::invalid_argument("spectral_radius_profile: t_max reaches the boundary");
  std::vector<double> mu(g.n, 0.0), next(g.n, 0.0);
  mu[g.basepoint] = 1.0;
  std::vector<double> p2t;
  for (long s = 1; s <= 2 * t_max; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int v = 0; v < g.n; ++v) {
      if (mu[v] == 0.0) continue;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      double share = mu[v] / static_cast<double>(e - b);
      for (int k = b; k < e; ++k) next[g.adj_vtx[k]] += share;
    }
    mu.swap(next);
    if (s % 2 == 0) p2t.push_back(mu[g.basepoint]);
  }
  return detail::spectral_from_returns(p2t);
}

inline SpectralProfile spectral_radius_profile_chain(const RegularTreeChain& chain, long t_max,
                                                     long radius) {
  if (t_max < 1) throw std::invalid_argument("spectral_radius_profile_chain: t_max must be >= 1");
  if (2 * t_max > radius)
    throw std::invalid_argument("spectral_radius_profile_chain: t_max reaches the radius");
  std::vector<double> p2t;
  for (long t = 1; t <= t_max; ++t) p2t.push_back(chain.distribution(2 * t, radius)[0]);
  return detail::spectral_from_returns(p2t);
}

// --- speed -------------------------------------------------------------------

struct SpeedReport {
  double mean = 0.0;          // mean of dist(o, X(T)) / T
  MeanCi ci;
  double liminf_proxy = 0.0;  // mean over paths of the dyadic-grid minimum
  long used = 0;
  long dropped = 0;           // absorbed before T/2 and excluded
  double exact_mean = std::numeric_limits<double>::quiet_NaN();  // chain oracle
};

inline SpeedReport speed_from_paths(const Graph& g, const std::vector<WalkPath>& paths) {
  if (paths.empty()) throw std::invalid_argument("speed_from_paths: no paths");
  auto dist = bfs_distances(g, g.basepoint);
  SpeedReport out;
  long full = 0;  // intended horizon = longest recorded path
  for (const auto& path : paths)
    full = std::max<long>(full, static_cast<long>(path.vertices.size()) - 1);
  std::vector<double> rates, minima;
  for (const auto& path : paths) {
    long T = static_cast<long>(path.vertices.size()) - 1;
    if ((path.absorbed && T < (full + 1) / 2) || T <= 0) {
      ++out.dropped;
      continue;
    }
    rates.push_back(static_cast<double>(dist[path.vertices[T]]) / static_cast<double>(T));
    double lo = rates.back();
    for (long t = T / 2; t >= 1; t /= 2)
      lo = std::min(lo, static_cast<double>(dist[path.vertices[t]]) / static_cast<double>(t));
    minima.push_back(lo);
  }
  if (rates.empty()) throw std::invalid_argument("speed_from_paths: every path was absorbed");
  out.ci = mean_ci(rates);
  out.mean = out.ci.mean;
  out.liminf_proxy = mean_ci(minima).mean;
  out.used = static_cast<long>(rates.size());
  return out;
}

// Chain-based speed for regular trees too large to materialize.
inline SpeedReport speed_chain(const RegularTreeChain& chain, long T, long trials,
                               std::uint64_t seed, int threads = 1) {
  if (T < 1 || trials < 1) throw std::invalid_argument("speed_chain: bad horizon or trials");
  std::vector<double> rates(trials, 0.0);
  std::vector<double> minima(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t i) {
    CounterRng rng(seed, substream(stream::kTrial, i));
    long k = 0;
    const double pu0 = chain.up_from_zero(), pu = chain.up(), pd = chain.down();
    double lo = std::numeric_limits<double>::infinity();
    long next_dyadic = 1;
    for (long s = 1; s <= T; ++s) {
      double u = rng.uniform();
      if (k == 0) {
        if (u < pu0) k = 1;
      } else {
        if (u < pu) ++k;
        else if (u < pu + pd) --k;
      }
      if (s == next_dyadic || s == T) {
        lo = std::min(lo, static_cast<double>(k) / static_cast<double>(s));
        if (s == next_dyadic) next_dyadic *= 2;
      }
    }
    rates[i] = static_cast<double>(k) / static_cast<double>(T);
    minima[i] = lo;
  });
  SpeedReport out;
  out.ci = mean_ci(rates);
  out.mean = out.ci.mean;
  out.liminf_proxy = mean_ci(minima).mean;
  out.used = trials;
  out.exact_mean = chain.exact_mean_distance(T) / static_cast<double>(T);
  return out;
}

// --- entropy -----------------------------------------------------------------

struct EntropyReport {
  long t = 0;
  double exact_rate = std::numeric_limits<double>::quiet_NaN();  // H(mu_t)/t
  MeanCi plugin;      // mean of -log(mu_hat(X(t)))/t over the second batch
  long undersampled = 0;  // second-batch walks landing on unseen cells
  long trials = 0;
};

inline double entropy_of(const std::vector<double>& mu) {
  KahanSum h;
  for (double x : mu)
    if (x > 0.0) h.add(-x * std::log(x));
  return h.value();
}

// Exact H(mu_t)/t plus the plug-in estimator from two independent walk
// batches (one to build mu_hat, one to evaluate it).
inline EntropyReport entropy_estimate(const Graph& g, long t, long trials, std::uint64_t seed,
                                      int threads = 1) {
  if (t < 0 || trials < 1) throw std::invalid_argument("entropy_estimate: bad t or trials");
  EntropyReport out;
  out.t = t;
  out.trials = trials;
  auto dist = distribution_exact(g, t);
  out.exact_rate = t == 0 ? 0.0 : entropy_of(dist.mu) / static_cast<double>(t);
  if (t == 0) {
    out.plugin = MeanCi{};
    return out;
  }
  std::vector<int> endpoint(2 * trials, -1);
  parallel_for(2 * trials, threads, [&](std::size_t i) {
    CounterRng rng(seed, substream(stream::kTrial, i));
    int v = g.basepoint;
    for (long s = 0; s < t; ++s) {
      auto nb = g.neighbors(v);
      v = nb[rng.below(nb.size())];
    }
    endpoint[i] = v;
  });
  std::vector<long> counts(g.n, 0);
  for (long i = 0; i < trials; ++i) ++counts[endpoint[i]];
  std::vector<double> values;
  for (long i = trials; i < 2 * trials; ++i) {
    long c = counts[endpoint[i]];
    if (c == 0) {
      ++out.undersampled;
      continue;
    }
    double mu_hat = static_cast<double>(c) / static_cast<double>(trials);
    values.push_back(-std::log(mu_hat) / static_cast<double>(t));
  }
  if (!values.empty()) out.plugin = mean_ci(values);
  return out;
}

// --- distance-based inequality checks -----------------------------------------

struct CarneReport {
  long t = 0;
  double max_violation = -std::numeric_limits<double>::infinity();
  int arg_vertex = -1;
  long arg_distance = -1;
};

// max over v of mu_t(v) - 2 exp(-d(o,v)^2 / (2t)); nonpositive on regular
// hosts.  Refuses non-regular hosts: the degree-corrected variant is a
// different bound and is deliberately not implemented.
inline CarneReport carne_check(const Graph& g, long t) {
  if (t < 1) throw std::invalid_argument("carne_check: t must be >= 1");
  int bd = boundary_distance(g);
  if (t >= bd) throw std::invalid_argument("carne_check: t reaches the boundary");
  for (int v = 0; v < g.n; ++v)
    if (!g.is_boundary[v] && g.degree(v) != g.degree(g.basepoint))
      throw std::invalid_argument("carne_check: host is not regular");
  auto mu = distribution_exact(g, t);
  auto dist = bfs_distances(g, g.basepoint);
  CarneReport out;
  out.t = t;
  for (int v = 0; v < g.n; ++v) {
    if (mu.mu[v] == 0.0) continue;
    double d = static_cast<double>(dist[v]);
    double viol = mu.mu[v] - 2.0 * std::exp(-d * d / (2.0 * static_cast<double>(t)));
    if (viol > out.max_violation) {
      out.max_violation = viol;
      out.arg_vertex = v;
      out.arg_distance = dist[v];
    }
  }
  return out;
}

inline CarneReport carne_check_chain(const RegularTreeChain& chain, long t) {
  if (t < 1) throw std::invalid_argument("carne_check_chain: t must be >= 1");
  auto q = chain.distribution(t);
  CarneReport out;
  out.t = t;
  for (long k = 0; k < static_cast<long>(q.size()); ++k) {
    if (q[k] == 0.0) continue;
    double mu = chain.mu_at_distance(q, k);
    double d = static_cast<double>(k);
    double viol = mu - 2.0 * std::exp(-d * d / (2.0 * static_cast<double>(t)));
    if (viol > out.max_violation) {
      out.max_violation = viol;
      out.arg_distance = k;
    }
  }
  return out;
}

struct ConcavityReport {
  long t = 0;
  double eps = 0.0;
  long ball_radius = 0;      // floor(t * eps)
  double ball_count = 0.0;   // |B|
  double mass = 0.0;         // mu_t(B)
  bool mass_ok = false;      // mass >= 1 - eps: hypothesis of the split bound
  double ball_lhs = 0.0;     // entropy contribution inside B
  double jensen_mid = 0.0;   // mu(B) log(|B| / mu(B))
  double ball_rhs = 0.0;     // log(D^{t eps} / (1 - eps))
  double tail_lhs = 0.0;     // entropy contribution outside B
  double tail_rhs = 0.0;     // eps log(D^t / eps)
  bool jensen_ok = false;    // lhs <= mid (+slack), unconditional concavity step
  bool ball_ok = false;      // mid <= rhs (+slack); meaningful when mass_ok
  bool tail_ok = false;      // tail lhs <= rhs (+slack); meaningful when mass_ok
};

namespace detail {

inline ConcavityReport concavity_from_radial(long t, double eps, double deg,
                                             const std::vector<double>& mass_at_distance,
                                             const std::vector<double>& entropy_at_distance,
                                             const std::vector<double>& count_at_distance) {
  if (eps <= 0.0 || eps > 1.0)
    throw std::invalid_argument("entropy_concavity_bound: eps must be in (0,1]");
  ConcavityReport out;
  out.t = t;
  out.eps = eps;
  out.ball_radius = static_cast<long>(std::floor(static_cast<double>(t) * eps + 1e-9));
  const double slack = 1e-12;
  KahanSum mass, lhs, tail, count;
  for (long k = 0; k < static_cast<long>(mass_at_distance.size()); ++k) {
    if (k <= out.ball_radius) {
      mass.add(mass_at_distance[k]);
      lhs.add(entropy_at_distance[k]);
      count.add(count_at_distance[k]);
    } else {
      tail.add(entropy_at_distance[k]);
    }
  }
  out.mass = mass.value();
  out.ball_count = count.value();
  out.ball_lhs = lhs.value();
  out.tail_lhs = tail.value();
  out.mass_ok = out.mass >= 1.0 - eps - slack;
  out.jensen_mid = out.mass > 0.0 ? out.mass * std::log(out.ball_count / out.mass) : 0.0;
  out.ball_rhs = eps >= 1.0 ? std::numeric_limits<double>::infinity()
                            : static_cast<double>(t) * eps * std::log(deg) - std::log1p(-eps);
  out.tail_rhs = eps * (static_cast<double>(t) * std::log(deg) - std::log(eps));
  out.jensen_ok = out.ball_lhs <= out.jensen_mid + slack;
  out.ball_ok = out.jensen_mid <= out.ball_rhs + slack;
  out.tail_ok = out.tail_lhs <= out.tail_rhs + slack;
  return out;
}

}  // namespace detail

// Ball-splitting entropy bound: entropy inside B_{t eps} against
// log(D^{t eps}/(1-eps)), tail entropy against eps log(D^t/eps).  The
// concavity (Jensen) step holds unconditionally; the other two are stated
// under the mass hypothesis mu_t(B) >= 1 - eps, reported via mass_ok.
inline ConcavityReport entropy_concavity_bound(const Graph& g, long t, double eps) {
  auto mu = distribution_exact(g, t);
  auto dist = bfs_distances(g, g.basepoint);
  long maxd = 0;
  for (int v = 0; v < g.n; ++v)
    if (dist[v] > maxd) maxd = dist[v];
  std::vector<double> mass(maxd + 1, 0.0), ent(maxd + 1, 0.0), cnt(maxd + 1, 0.0);
  for (int v = 0; v < g.n; ++v) {
    if (dist[v] < 0) continue;
    mass[dist[v]] += mu.mu[v];
    cnt[dist[v]] += 1.0;
    if (mu.mu[v] > 0.0) ent[dist[v]] += -mu.mu[v] * std::log(mu.mu[v]);
  }
  return detail::concavity_from_radial(t, eps, static_cast<double>(g.degree(g.basepoint)), mass,
                                       ent, cnt);
}

inline ConcavityReport entropy_concavity_bound_chain(const RegularTreeChain& chain, long t,
                                                     double eps) {
  auto q = chain.distribution(t);
  long len = static_cast<long>(q.size());
  std::vector<double> mass(len, 0.0), ent(len, 0.0), cnt(len, 0.0);
  for (long k = 0; k < len; ++k) {
    mass[k] = q[k];
    cnt[k] = chain.sphere_size(k);
    if (q[k] > 0.0) {
      double mu = chain.mu_at_distance(q, k);
      ent[k] = q[k] * -std::log(mu);
    }
  }
  return detail::concavity_from_radial(t, eps, static_cast<double>(chain.deg), mass, ent, cnt);
}

// --- transience profiles -------------------------------------------------------

struct TransiencePoint {
  int radius = 0;
  double value = 0.0;
  double residual = 0.0;
  long samples = 0;    // percolated profiles: conditioned samples averaged
  long discarded = 0;  // percolated profiles: clusters that missed the shell
};

// Effective resistance from the basepoint to the distance-r sphere, one point
// per requested radius.  Any route out of the ball crosses the sphere, so
// grounding the sphere confines the current to the ball.
inline std::vector<TransiencePoint> transience_profile(const Graph& g,
                                                       const std::vector<int>& radii) {
  if (radii.empty()) throw std::invalid_argument("transience_profile: no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw std::invalid_argument("transience_profile: radii must increase");
  auto dist = bfs_distances(g, g.basepoint);
  std::vector<TransiencePoint> out;
  for (int r : radii) {
    std::vector<int> sinks;
    for (int v = 0; v < g.n; ++v)
      if (dist[v] == r) sinks.push_back(v);
    if (sinks.empty()) throw std::invalid_argument("transience_profile: empty sphere");
    std::vector<WeightedEdge> edges;
    for (const auto& [u, v] : g.edges)
      if (dist[u] <= r && dist[v] <= r && dist[u] >= 0 && dist[v] >= 0)
        edges.emplace_back(u, v, 1);
    auto res = resistance_from_edges(g.n, edges, g.basepoint, sinks);
    out.push_back(TransiencePoint{r, res.value, res.residual_norm, 0, 0});
  }
  return out;
}

// Same profile on percolation clusters conditioned to reach the sphere.
inline std::vector<TransiencePoint> transience_profile_percolated(
    const Graph& g, PercMode mode, double p, const std::vector<int>& radii, long samples,
    std::uint64_t seed, long retry_cap = 10000) {
  if (samples < 1) throw std::invalid_argument("transience_profile_percolated: samples");
  auto dist = bfs_distances(g, g.basepoint);
  std::vector<TransiencePoint> out;
  long next_index = 0;
  for (int r : radii) {
    TransiencePoint pt;
    pt.radius = r;
    KahanSum acc;
    long got = 0, tried = 0;
    while (got < samples) {
      if (tried >= retry_cap)
        throw std::runtime_error("transience_profile_percolated: retry cap exhausted");
      ++tried;
      std::uint64_t s = counter_word(seed, stream::kTrial, next_index++);
      PercConfig cfg = mode == PercMode::kBond ? sample_bond(g, p, s) : sample_site(g, p, s);
      if (!cfg.vertex_active(g.basepoint)) {
        ++pt.discarded;
        continue;
      }
      // cluster of o restricted to the ball, sinks on the sphere
      std::vector<std::uint8_t> seen(g.n, 0);
      std::vector<int> stack{g.basepoint};
      seen[g.basepoint] = 1;
      bool reached = false;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (dist[v] == r) {
          reached = true;
          continue;  // the sphere is grounded; do not expand beyond it
        }
        int b = g.adj_off[v], e = g.adj_off[v + 1];
        for (int k = b; k < e; ++k) {
          int u = g.adj_vtx[k];
          if (!seen[u] && cfg.edge_active(g.adj_eid[k]) && dist[u] <= r) {
            seen[u] = 1;
            stack.push_back(u);
          }
        }
      }
      if (!reached) {
        ++pt.discarded;
        continue;
      }
      std::vector<WeightedEdge> edges;
      std::vector<int> sinks;
      for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
        auto [u, v] = g.edges[e];
        if (cfg.edge_active(e) && seen[u] && seen[v]) edges.emplace_back(u, v, 1);
      }
      for (int v = 0; v < g.n; ++v)
        if (seen[v] && dist[v] == r) sinks.push_back(v);
      auto res = resistance_from_edges(g.n, edges, g.basepoint, sinks);
      acc.add(res.value);
      pt.residual = std::max(pt.residual, res.residual_norm);
      ++got;
    }
    pt.samples = got;
    pt.value = acc.value() / static_cast<double>(got);
    out.push_back(pt);
  }
  return out;
}

}  // namespace percolab

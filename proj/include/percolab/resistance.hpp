#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "percolab/exact.hpp"
#include "percolab/graph.hpp"
#include "percolab/trimming.hpp"

namespace percolab {

struct ResistanceResult {
  double value = 0.0;
  int source = -1;
  std::vector<int> sinks;
  double residual_norm = 0.0;  // infinity norm of L x - b
  long component_size = 0;
};

// Integer edge weights cover multigraphs after boundary collapse (a parallel
// pair is one edge of conductance 2).
using WeightedEdge = std::tuple<int, int, long>;

namespace detail {

struct GroundedSystem {
  std::vector<int> index;   // vertex -> unknown index, -1 grounded/outside
  std::vector<int> comp;    // vertices of the source component
  long grounded_in_comp = 0;
};

inline GroundedSystem locate_component(int n, const std::vector<WeightedEdge>& edges, int source,
                                       const std::vector<int>& sinks) {
  if (source < 0 || source >= n) throw std::invalid_argument("resistance: source out of range");
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v, w] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n || u == v || w <= 0)
      throw std::invalid_argument("resistance: bad edge");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::uint8_t> seen(n, 0);
  GroundedSystem sys;
  sys.index.assign(n, -1);
  std::vector<int> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    sys.comp.push_back(v);
    for (int u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  std::vector<std::uint8_t> grounded(n, 0);
  for (int s : sinks) {
    if (s < 0 || s >= n) throw std::invalid_argument("resistance: sink out of range");
    if (seen[s]) {
      if (!grounded[s]) ++sys.grounded_in_comp;
      grounded[s] = 1;
    }
  }
  if (sys.grounded_in_comp == 0)
    throw std::invalid_argument("resistance: no sink in the source component");
  int next = 0;
  for (int v : sys.comp)
    if (!grounded[v]) sys.index[v] = next++;
  return sys;
}

}  // namespace detail

// Unit current from source to the grounded sink set; value = potential at the
// source.  Sparse Cholesky with a conjugate-gradient fallback; the contract is
// the residual bound, not the method.
inline ResistanceResult resistance_from_edges(int n, const std::vector<WeightedEdge>& edges,
                                              int source, const std::vector<int>& sinks,
                                              double residual_bound = 1e-10) {
  auto sys = detail::locate_component(n, edges, source, sinks);
  ResistanceResult out;
  out.source = source;
  out.sinks = sinks;
  out.component_size = static_cast<long>(sys.comp.size());
  if (sys.index[source] < 0) return out;  // source itself grounded

  int m = 0;
  for (int v : sys.comp)
    if (sys.index[v] >= 0) ++m;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(edges.size() * 4);
  std::vector<double> diag(m, 0.0);
  for (const auto& [u, v, w] : edges) {
    int iu = sys.index[u], iv = sys.index[v];
    bool u_in = iu >= 0, v_in = iv >= 0;
    // edges outside the component touch no unknown; grounded endpoints only
    // contribute to the diagonal
    if (u_in) diag[iu] += w;
    if (v_in) diag[iv] += w;
    if (u_in && v_in) {
      trip.emplace_back(iu, iv, static_cast<double>(-w));
      trip.emplace_back(iv, iu, static_cast<double>(-w));
    }
  }
  for (int i = 0; i < m; ++i) trip.emplace_back(i, i, diag[i]);
  Eigen::SparseMatrix<double> L(m, m);
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b[sys.index[source]] = 1.0;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
  Eigen::VectorXd x;
  double res = std::numeric_limits<double>::infinity();
  if (ldlt.info() == Eigen::Success) {
    x = ldlt.solve(b);
    res = (L * x - b).lpNorm<Eigen::Infinity>();
  }
  if (!(res <= residual_bound)) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-14);
    cg.setMaxIterations(40L * m + 1000);
    cg.compute(L);
    Eigen::VectorXd x2;
    if (x.size() == m)
      x2 = cg.solveWithGuess(b, x);
    else
      x2 = cg.solve(b);
    double res2 = (L * x2 - b).lpNorm<Eigen::Infinity>();
    if (res2 < res) {
      x = x2;
      res = res2;
    }
  }
  if (!(res <= residual_bound))
    throw std::runtime_error("resistance: solver residual exceeds the bound");
  out.value = x[sys.index[source]];
  out.residual_norm = res;
  return out;
}

// Exact variant: dense rational elimination.  Entry growth makes this
// expensive, so the component size is capped (override consciously).
inline Rational resistance_from_edges_rational(int n, const std::vector<WeightedEdge>& edges,
                                               int source, const std::vector<int>& sinks,
                                               int exact_cap = 300) {
  auto sys = detail::locate_component(n, edges, source, sinks);
  if (static_cast<int>(sys.comp.size()) > exact_cap)
    throw std::invalid_argument("resistance: component exceeds the exact-arithmetic cap");
  if (sys.index[source] < 0) return Rational(0);
  int m = 0;
  for (int v : sys.comp)
    if (sys.index[v] >= 0) ++m;
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1, Rational(0)));
  for (const auto& [u, v, w] : edges) {
    int iu = sys.index[u], iv = sys.index[v];
    if (iu >= 0) a[iu][iu] += w;
    if (iv >= 0) a[iv][iv] += w;
    if (iu >= 0 && iv >= 0) {
      a[iu][iv] -= w;
      a[iv][iu] -= w;
    }
  }
  a[sys.index[source]][m] = 1;

  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    for (int r = col; r < m; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::runtime_error("resistance: singular grounded system");
    std::swap(a[col], a[pivot]);
    Rational inv = a[col][col];
    for (int r = col + 1; r < m; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / inv;
      for (int c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<Rational> x(m, Rational(0));
  for (int r = m - 1; r >= 0; --r) {
    Rational acc = a[r][m];
    for (int c = r + 1; c < m; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x[sys.index[source]];
}

inline std::vector<WeightedEdge> graph_edges(const Graph& g, const SubgraphState* state = nullptr) {
  std::vector<WeightedEdge> out;
  out.reserve(g.edge_count());
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e)
    if (state == nullptr || state->e_in[e])
      out.emplace_back(g.edges[e].first, g.edges[e].second, 1);
  return out;
}

inline ResistanceResult effective_resistance(const Graph& g, int source,
                                             const std::vector<int>& sinks,
                                             const SubgraphState* state = nullptr) {
  return resistance_from_edges(g.n, graph_edges(g, state), source, sinks);
}

inline Rational effective_resistance_rational(const Graph& g, int source,
                                              const std::vector<int>& sinks,
                                              const SubgraphState* state = nullptr,
                                              int exact_cap = 300) {
  return resistance_from_edges_rational(g.n, graph_edges(g, state), source, sinks, exact_cap);
}

}  // namespace percolab

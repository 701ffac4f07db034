#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace percolab {

constexpr std::size_t kDefaultVertexCap = std::size_t{1} << 23;

// Finite simple undirected graph with a basepoint and a marked boundary.
// The boundary stands in for "infinity" on truncated hosts: clusters that
// touch it are treated as infinite, walks stop there, and enumeration of
// candidate sets stays in the interior.  Edges are stored sorted with u < v
// so edge indices are stable across runs; adjacency is CSR with the edge id
// alongside each neighbor.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> adj_off;
  std::vector<int> adj_vtx;
  std::vector<int> adj_eid;
  std::vector<std::uint8_t> is_boundary;
  std::vector<int> boundary_list;
  int basepoint = 0;
  int degree_bound = 0;
  std::string family_tag;

  int edge_count() const { return static_cast<int>(edges.size()); }

  int degree(int v) const { return adj_off[v + 1] - adj_off[v]; }

  std::span<const int> neighbors(int v) const {
    return {adj_vtx.data() + adj_off[v], static_cast<std::size_t>(degree(v))};
  }

  std::span<const int> incident_edges(int v) const {
    return {adj_eid.data() + adj_off[v], static_cast<std::size_t>(degree(v))};
  }

  // Edge id of {u, v}, or -1 when absent.
  int edge_index(int u, int v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return -1;
    return adj_eid[adj_off[u] + static_cast<int>(it - nb.begin())];
  }

  bool interior(int v) const { return !is_boundary[v]; }
};

inline Graph build_graph(int n, std::vector<std::pair<int, int>> edge_list,
                         int basepoint, std::vector<int> boundary,
                         std::string family_tag, std::size_t vertex_cap = kDefaultVertexCap) {
  if (n <= 0) throw std::invalid_argument("build_graph: need at least one vertex");
  if (static_cast<std::size_t>(n) > vertex_cap)
    throw std::invalid_argument("build_graph: vertex count " + std::to_string(n) +
                                " exceeds cap " + std::to_string(vertex_cap));
  if (basepoint < 0 || basepoint >= n)
    throw std::invalid_argument("build_graph: basepoint out of range");
  for (auto& [u, v] : edge_list) {
    if (u == v) throw std::invalid_argument("build_graph: self-loop rejected");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("build_graph: edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  if (std::adjacent_find(edge_list.begin(), edge_list.end()) != edge_list.end())
    throw std::invalid_argument("build_graph: duplicate edge rejected");

  Graph g;
  g.n = n;
  g.edges = std::move(edge_list);
  g.basepoint = basepoint;
  g.family_tag = std::move(family_tag);
  g.is_boundary.assign(n, 0);
  for (int v : boundary) {
    if (v < 0 || v >= n) throw std::invalid_argument("build_graph: boundary vertex out of range");
    g.is_boundary[v] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (g.is_boundary[v]) g.boundary_list.push_back(v);

  std::vector<int> deg(n, 0);
  for (auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  g.adj_off.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) g.adj_off[v + 1] = g.adj_off[v] + deg[v];
  g.adj_vtx.assign(g.edges.size() * 2, 0);
  g.adj_eid.assign(g.edges.size() * 2, 0);
  std::vector<int> cursor(g.adj_off.begin(), g.adj_off.end() - 1);
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edges[e];
    g.adj_vtx[cursor[u]] = v;
    g.adj_eid[cursor[u]++] = e;
    g.adj_vtx[cursor[v]] = u;
    g.adj_eid[cursor[v]++] = e;
  }
  // edges were sorted, so each adjacency list comes out sorted by neighbor
  g.degree_bound = 0;
  for (int v = 0; v < n; ++v) g.degree_bound = std::max(g.degree_bound, deg[v]);
  return g;
}

// Structural invariants; throws on the first breach.
inline void validate_graph(const Graph& g) {
  if (g.n <= 0) throw std::logic_error("graph: empty vertex set");
  if (g.basepoint < 0 || g.basepoint >= g.n) throw std::logic_error("graph: bad basepoint");
  if (g.adj_off.size() != static_cast<std::size_t>(g.n) + 1)
    throw std::logic_error("graph: adjacency offsets inconsistent");
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edges[e];
    if (!(0 <= u && u < v && v < g.n)) throw std::logic_error("graph: edge endpoints unsorted");
    if (e > 0 && !(g.edges[e - 1] < g.edges[e]))
      throw std::logic_error("graph: edge list unsorted or duplicated");
  }
  for (int v = 0; v < g.n; ++v) {
    auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] == v) throw std::logic_error("graph: self-loop in adjacency");
      if (i > 0 && nb[i - 1] >= nb[i]) throw std::logic_error("graph: adjacency unsorted");
      int e = g.incident_edges(v)[i];
      auto [a, b] = g.edges[e];
      if (!((a == v && b == nb[i]) || (b == v && a == nb[i])))
        throw std::logic_error("graph: adjacency/edge cross-reference broken");
    }
    if (g.degree(v) > g.degree_bound) throw std::logic_error("graph: degree bound breached");
  }
  for (int v : g.boundary_list)
    if (!g.is_boundary[v]) throw std::logic_error("graph: boundary list and flags disagree");
}

inline std::vector<int> bfs_distances(const Graph& g, int src) {
  std::vector<int> dist(g.n, -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int u : g.neighbors(v))
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        q.push(u);
      }
  }
  return dist;
}

// Number of host edges with exactly one endpoint in the sorted set.
inline long edge_boundary_size(const Graph& g, const std::vector<int>& set) {
  std::vector<std::uint8_t> in(g.n, 0);
  for (int v : set) {
    if (v < 0 || v >= g.n) throw std::invalid_argument("edge_boundary_size: vertex out of range");
    in[v] = 1;
  }
  long out = 0;
  for (int v : set)
    for (int u : g.neighbors(v))
      if (!in[u]) ++out;
  return out;
}

inline void write_edge_list(const Graph& g, std::ostream& os) {
  os << "vertices " << g.n << " basepoint " << g.basepoint << "\n";
  for (auto& [u, v] : g.edges) os << "edge " << u << " " << v << "\n";
  if (!g.boundary_list.empty()) {
    os << "boundary";
    for (int v : g.boundary_list) os << " " << v;
    os << "\n";
  }
}

inline Graph parse_edge_list(std::istream& is, std::string family_tag = "edge-list") {
  std::string word;
  if (!(is >> word) || word != "vertices")
    throw std::invalid_argument("parse_edge_list: expected 'vertices'");
  int n = 0, basepoint = 0;
  if (!(is >> n)) throw std::invalid_argument("parse_edge_list: bad vertex count");
  if (!(is >> word) || word != "basepoint")
    throw std::invalid_argument("parse_edge_list: expected 'basepoint'");
  if (!(is >> basepoint)) throw std::invalid_argument("parse_edge_list: bad basepoint");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> boundary;
  while (is >> word) {
    if (word == "edge") {
      int u, v;
      if (!(is >> u >> v)) throw std::invalid_argument("parse_edge_list: bad edge line");
      edges.emplace_back(u, v);
    } else if (word == "boundary") {
      int v;
      while (is >> v) boundary.push_back(v);
      break;
    } else {
      throw std::invalid_argument("parse_edge_list: unknown token '" + word + "'");
    }
  }
  return build_graph(n, std::move(edges), basepoint, std::move(boundary), std::move(family_tag));
}

}  // namespace percolab

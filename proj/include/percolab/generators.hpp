#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace detail {
inline std::size_t checked_pow(std::size_t base, int exp, std::size_t cap) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > cap / base) throw std::invalid_argument("generator: size exceeds vertex cap");
    out *= base;
  }
  return out;
}
}  // namespace detail

// d-dimensional discrete torus (Z/side)^dim with nearest-neighbor edges.
// No boundary: the graph is finite, transitive and 2*dim-regular.
inline Graph gen_torus(int dim, int side, std::size_t vertex_cap = kDefaultVertexCap) {
  if (dim < 1) throw std::invalid_argument("gen_torus: dim must be >= 1");
  if (side < 3) throw std::invalid_argument("gen_torus: side must be >= 3 to stay simple");
  std::size_t n = detail::checked_pow(static_cast<std::size_t>(side), dim, vertex_cap);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n * static_cast<std::size_t>(dim));
  std::size_t stride = 1;
  for (int a = 0; a < dim; ++a) {
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t coord = (v / stride) % static_cast<std::size_t>(side);
      std::size_t up = coord + 1 == static_cast<std::size_t>(side)
                           ? v - coord * stride
                           : v + stride;
      edges.emplace_back(static_cast<int>(v), static_cast<int>(up));
    }
    stride *= static_cast<std::size_t>(side);
  }
  return build_graph(static_cast<int>(n), std::move(edges), 0, {},
                     "torus:" + std::to_string(dim) + ":" + std::to_string(side), vertex_cap);
}

// Ball of radius r in the degree-deg regular tree, rooted at the basepoint.
// Boundary = the radius-r sphere.
inline Graph gen_tree_ball(int deg, int radius, std::size_t vertex_cap = kDefaultVertexCap) {
  if (deg < 2) throw std::invalid_argument("gen_tree_ball: degree must be >= 2");
  if (radius < 0) throw std::invalid_argument("gen_tree_ball: radius must be >= 0");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> frontier{0};
  std::size_t n = 1;
  for (int depth = 1; depth <= radius; ++depth) {
    std::vector<int> next;
    for (int v : frontier) {
      int kids = depth == 1 ? deg : deg - 1;
      for (int c = 0; c < kids; ++c) {
        if (n >= vertex_cap) throw std::invalid_argument("gen_tree_ball: size exceeds vertex cap");
        int w = static_cast<int>(n++);
        edges.emplace_back(v, w);
        next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  return build_graph(static_cast<int>(n), std::move(edges), 0, frontier,
                     "tree:" + std::to_string(deg) + ":r" + std::to_string(radius), vertex_cap);
}

// l_inf ball of radius r in Z^dim (a (2r+1)^dim box); boundary = outer shell.
inline Graph gen_grid_ball(int dim, int radius, std::size_t vertex_cap = kDefaultVertexCap) {
  if (dim < 1) throw std::invalid_argument("gen_grid_ball: dim must be >= 1");
  if (radius < 0) throw std::invalid_argument("gen_grid_ball: radius must be >= 0");
  std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
  std::size_t n = detail::checked_pow(side, dim, vertex_cap);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> boundary;
  std::size_t stride = 1;
  for (int a = 0; a < dim; ++a) {
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t coord = (v / stride) % side;
      if (coord + 1 < side) edges.emplace_back(static_cast<int>(v), static_cast<int>(v + stride));
    }
    stride *= side;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rest = v;
    bool on_shell = false;
    for (int a = 0; a < dim; ++a) {
      std::size_t coord = rest % side;
      rest /= side;
      if (coord == 0 || coord + 1 == side) on_shell = true;
    }
    if (on_shell && radius > 0) boundary.push_back(static_cast<int>(v));
  }
  if (radius == 0) boundary.push_back(0);
  std::size_t center = 0;
  stride = 1;
  for (int a = 0; a < dim; ++a) {
    center += static_cast<std::size_t>(radius) * stride;
    stride *= side;
  }
  return build_graph(static_cast<int>(n), std::move(edges), static_cast<int>(center), boundary,
                     "grid:" + std::to_string(dim) + ":r" + std::to_string(radius), vertex_cap);
}

// Ball of radius r in (degree-deg tree) x Z under the graph metric
// dist = tree depth + |z|.  Boundary = the radius-r sphere.
inline Graph gen_tree_cross_z_ball(int deg, int radius,
                                   std::size_t vertex_cap = kDefaultVertexCap) {
  if (deg < 2) throw std::invalid_argument("gen_tree_cross_z_ball: degree must be >= 2");
  if (radius < 0) throw std::invalid_argument("gen_tree_cross_z_ball: radius must be >= 0");
  // tree part: ball of radius `radius`, with depth per tree vertex
  std::vector<int> depth{0};
  std::vector<std::pair<int, int>> tree_edges;
  std::vector<int> frontier{0};
  for (int d = 1; d <= radius; ++d) {
    std::vector<int> next;
    for (int v : frontier) {
      int kids = d == 1 ? deg : deg - 1;
      for (int c = 0; c < kids; ++c) {
        int w = static_cast<int>(depth.size());
        depth.push_back(d);
        tree_edges.emplace_back(v, w);
        next.push_back(w);
        if (depth.size() > vertex_cap)
          throw std::invalid_argument("gen_tree_cross_z_ball: size exceeds vertex cap");
      }
    }
    frontier = std::move(next);
  }
  const int tn = static_cast<int>(depth.size());
  // id layout: per tree vertex t a contiguous block of its 2*(radius-depth)+1
  // z-values, z from -(radius-depth) .. +(radius-depth)
  std::vector<std::size_t> block(tn + 1, 0);
  for (int t = 0; t < tn; ++t) {
    std::size_t width = 2 * static_cast<std::size_t>(radius - depth[t]) + 1;
    block[t + 1] = block[t] + width;
    if (block[t + 1] > vertex_cap)
      throw std::invalid_argument("gen_tree_cross_z_ball: size exceeds vertex cap");
  }
  auto vid = [&](int t, int z) {
    return static_cast<int>(block[t]) + z + (radius - depth[t]);
  };
  std::size_t n = block[tn];
  std::vector<std::pair<int, int>> edges;
  std::vector<int> boundary;
  for (int t = 0; t < tn; ++t) {
    int span = radius - depth[t];
    for (int z = -span; z <= span; ++z) {
      if (z < span) edges.emplace_back(vid(t, z), vid(t, z + 1));
      if (depth[t] + std::abs(z) == radius) boundary.push_back(vid(t, z));
    }
  }
  for (auto& [a, b] : tree_edges) {
    int span = radius - std::max(depth[a], depth[b]);
    for (int z = -span; z <= span; ++z) edges.emplace_back(vid(a, z), vid(b, z));
  }
  return build_graph(static_cast<int>(n), std::move(edges), vid(0, 0), boundary,
                     "treez:" + std::to_string(deg) + ":r" + std::to_string(radius), vertex_cap);
}

// Positive integer edge-length law for stretched hosts.
struct EdgeLengthLaw {
  enum class Kind { kGeometric, kFixed } kind = Kind::kGeometric;
  double q = 0.5;   // geometric success probability, support {1, 2, ...}
  int fixed = 1;

  static EdgeLengthLaw geometric(double q) {
    if (!(q > 0.0 && q <= 1.0))
      throw std::invalid_argument("EdgeLengthLaw: geometric q outside (0,1]");
    EdgeLengthLaw law;
    law.kind = Kind::kGeometric;
    law.q = q;
    return law;
  }
  static EdgeLengthLaw constant(int L) {
    if (L < 1) throw std::invalid_argument("EdgeLengthLaw: length must be >= 1");
    EdgeLengthLaw law;
    law.kind = Kind::kFixed;
    law.fixed = L;
    return law;
  }
  std::uint64_t sample(CounterRng& rng) const {
    return kind == Kind::kFixed ? static_cast<std::uint64_t>(fixed) : rng.geometric1(q);
  }
  std::string tag() const {
    if (kind == Kind::kFixed) return "fixed:" + std::to_string(fixed);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "geom:%g", q);
    return buf;
  }
};

// Replace every host edge by a path whose length is drawn independently from
// the law; the draw for edge e depends only on (seed, e).
inline Graph gen_stretched(const Graph& host, const EdgeLengthLaw& law, std::uint64_t seed,
                           std::size_t vertex_cap = kDefaultVertexCap) {
  std::vector<std::pair<int, int>> edges;
  std::size_t n = static_cast<std::size_t>(host.n);
  for (int e = 0; e < host.edge_count(); ++e) {
    CounterRng rng(seed, substream(stream::kEdgeLength, static_cast<std::uint64_t>(e)));
    std::uint64_t len = law.sample(rng);
    auto [u, v] = host.edges[e];
    int prev = u;
    for (std::uint64_t k = 1; k < len; ++k) {
      if (n >= vertex_cap) throw std::invalid_argument("gen_stretched: size exceeds vertex cap");
      int w = static_cast<int>(n++);
      edges.emplace_back(prev, w);
      prev = w;
    }
    edges.emplace_back(prev, v);
  }
  return build_graph(static_cast<int>(n), std::move(edges), host.basepoint, host.boundary_list,
                     "stretch(" + host.family_tag + "," + law.tag() + ")", vertex_cap);
}

// Offspring law on {0, 1, ..., K} for branching-tree hosts.
struct OffspringLaw {
  std::vector<double> probs;  // probs[k] = P(k children)

  void validate() const {
    if (probs.empty()) throw std::invalid_argument("OffspringLaw: empty support");
    double s = 0.0;
    for (double p : probs) {
      if (p < 0.0) throw std::invalid_argument("OffspringLaw: negative probability");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("OffspringLaw: probabilities must sum to 1");
  }
  double mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
    return m;
  }
  std::size_t sample(CounterRng& rng) const {
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) return k;
    }
    return probs.size() - 1;
  }
  std::string tag() const {
    std::string out;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (probs[k] == 0.0) continue;
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%s%zu=%g", out.empty() ? "" : "+", k, probs[k]);
      out += buf;
    }
    return out;
  }
};

// Branching tree truncated at the target depth, conditioned on reaching it by
// rejection sampling.  Boundary = depth-d vertices.
inline Graph gen_gw_tree(const OffspringLaw& law, int depth, std::uint64_t seed,
                         int retry_cap = 10000, std::size_t vertex_cap = kDefaultVertexCap) {
  law.validate();
  if (depth < 1) throw std::invalid_argument("gen_gw_tree: depth must be >= 1");
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    CounterRng rng(seed, substream(stream::kOffspring, static_cast<std::uint64_t>(attempt)));
    std::vector<std::pair<int, int>> edges;
    std::vector<int> frontier{0};
    std::size_t n = 1;
    for (int d = 1; d <= depth && !frontier.empty(); ++d) {
      std::vector<int> next;
      for (int v : frontier) {
        std::size_t kids = law.sample(rng);
        for (std::size_t c = 0; c < kids; ++c) {
          if (n >= vertex_cap) throw std::invalid_argument("gen_gw_tree: size exceeds vertex cap");
          int w = static_cast<int>(n++);
          edges.emplace_back(v, w);
          next.push_back(w);
        }
      }
      frontier = std::move(next);
    }
    if (!frontier.empty()) {
      return build_graph(static_cast<int>(n), std::move(edges), 0, frontier,
                         "gw:" + law.tag() + ":d" + std::to_string(depth), vertex_cap);
    }
  }
  throw std::runtime_error("gen_gw_tree: no sample reached the target depth within the retry cap");
}

// Degree-3 tree organized by horocycle levels: each vertex at level k has one
// parent at level k-1 and two children at level k+1.  The finite window spans
// levels -depth .. depth starting from a single top vertex; boundary = the top
// vertex and the bottom level (both are truncation artifacts), basepoint = a
// level-0 vertex.
struct HorocyclicTree {
  Graph graph;
  std::vector<int> level;   // in [-depth, depth]
  std::vector<int> parent;  // -1 for the top vertex
  int depth = 0;
};

inline HorocyclicTree gen_horocyclic_tree(int depth, std::size_t vertex_cap = kDefaultVertexCap) {
  if (depth < 1) throw std::invalid_argument("gen_horocyclic_tree: depth must be >= 1");
  HorocyclicTree out;
  out.depth = depth;
  out.level.push_back(-depth);
  out.parent.push_back(-1);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> frontier{0};
  std::size_t n = 1;
  int basepoint = 0;
  for (int lv = -depth + 1; lv <= depth; ++lv) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int c = 0; c < 2; ++c) {
        if (n >= vertex_cap)
          throw std::invalid_argument("gen_horocyclic_tree: size exceeds vertex cap");
        int w = static_cast<int>(n++);
        out.level.push_back(lv);
        out.parent.push_back(v);
        edges.emplace_back(v, w);
        next.push_back(w);
      }
    }
    if (lv == 0) basepoint = next.front();
    frontier = std::move(next);
  }
  std::vector<int> boundary{0};
  boundary.insert(boundary.end(), frontier.begin(), frontier.end());
  out.graph = build_graph(static_cast<int>(n), std::move(edges), basepoint, boundary,
                          "horo:d" + std::to_string(depth), vertex_cap);
  return out;
}

}  // namespace percolab

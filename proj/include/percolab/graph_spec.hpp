#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/generators.hpp"
#include "percolab/graph.hpp"

namespace percolab {

// Textual graph specs:
//   torus:<dim>:<side>          periodic lattice, no boundary
//   tree:<deg>:r<radius>        regular-tree ball, frontier is the boundary
//   grid:<dim>:r<radius>        lattice ball (sup-norm box), shell boundary
//   treez:<deg>:r<radius>       tree-times-line ball
//   gw:<law>:d<depth>           random tree, law like 0=0.25+2=0.75
//   horo:d<depth>               binary tree organized by levels -d..d
//   stretch(<spec>,geom:<q>)    subdivide edges, geometric(q) lengths
//   stretch(<spec>,const:<L>)   subdivide edges, constant length L
namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

inline int parse_int(const std::string& s, const std::string& what) {
  if (s.empty()) throw std::invalid_argument("graph spec: missing " + what);
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("graph spec: bad " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("graph spec: bad " + what + " '" + s + "'");
  if (v < 0 || v > 1'000'000'000) throw std::invalid_argument("graph spec: " + what + " out of range");
  return static_cast<int>(v);
}

inline double parse_prob(const std::string& s, const std::string& what) {
  if (s.empty()) throw std::invalid_argument("graph spec: missing " + what);
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("graph spec: bad " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("graph spec: bad " + what + " '" + s + "'");
  return v;
}

inline int parse_prefixed_int(const std::string& s, char prefix, const std::string& what) {
  if (s.empty() || s[0] != prefix)
    throw std::invalid_argument("graph spec: expected " + std::string(1, prefix) + "<n> for " + what);
  return parse_int(s.substr(1), what);
}

inline OffspringLaw parse_offspring_law(const std::string& s) {
  OffspringLaw law;
  for (const auto& term : split(s, '+')) {
    auto kv = split(term, '=');
    if (kv.size() != 2) throw std::invalid_argument("graph spec: offspring law term '" + term + "'");
    int k = parse_int(kv[0], "offspring count");
    double p = parse_prob(kv[1], "offspring probability");
    if (static_cast<int>(law.probs.size()) <= k) law.probs.resize(k + 1, 0.0);
    law.probs[k] += p;
  }
  law.validate();
  return law;
}

}  // namespace detail

inline Graph parse_graph_spec(const std::string& spec, std::uint64_t seed,
                              std::size_t vertex_cap = kDefaultVertexCap) {
  if (spec.empty()) throw std::invalid_argument("graph spec: empty");
  if (spec.rfind("stretch(", 0) == 0) {
    if (spec.back() != ')') throw std::invalid_argument("graph spec: unbalanced stretch(...)");
    std::string inner = spec.substr(8, spec.size() - 9);
    // split on the last comma at depth 0 so nested stretch(...) specs survive
    int depth = 0;
    std::size_t cut = std::string::npos;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      else if (inner[i] == ')') --depth;
      else if (inner[i] == ',' && depth == 0) cut = i;
    }
    if (cut == std::string::npos)
      throw std::invalid_argument("graph spec: stretch needs stretch(<spec>,<law>)");
    std::string host_spec = inner.substr(0, cut);
    std::string law_spec = inner.substr(cut + 1);
    EdgeLengthLaw law;
    if (law_spec.rfind("geom:", 0) == 0) {
      double q = detail::parse_prob(law_spec.substr(5), "stretch parameter");
      law = EdgeLengthLaw::geometric(q);
    } else if (law_spec.rfind("const:", 0) == 0) {
      law = EdgeLengthLaw::constant(detail::parse_int(law_spec.substr(6), "stretch length"));
    } else {
      throw std::invalid_argument("graph spec: unknown length law '" + law_spec + "'");
    }
    Graph host = parse_graph_spec(host_spec, seed, vertex_cap);
    return gen_stretched(host, law, seed, vertex_cap);
  }

  auto parts = detail::split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "torus") {
    if (parts.size() != 3) throw std::invalid_argument("graph spec: torus:<dim>:<side>");
    return gen_torus(detail::parse_int(parts[1], "dimension"),
                     detail::parse_int(parts[2], "side"), vertex_cap);
  }
  if (kind == "tree") {
    if (parts.size() != 3) throw std::invalid_argument("graph spec: tree:<deg>:r<radius>");
    return gen_tree_ball(detail::parse_int(parts[1], "degree"),
                         detail::parse_prefixed_int(parts[2], 'r', "radius"), vertex_cap);
  }
  if (kind == "grid") {
    if (parts.size() != 3) throw std::invalid_argument("graph spec: grid:<dim>:r<radius>");
    return gen_grid_ball(detail::parse_int(parts[1], "dimension"),
                         detail::parse_prefixed_int(parts[2], 'r', "radius"), vertex_cap);
  }
  if (kind == "treez") {
    if (parts.size() != 3) throw std::invalid_argument("graph spec: treez:<deg>:r<radius>");
    return gen_tree_cross_z_ball(detail::parse_int(parts[1], "degree"),
                                 detail::parse_prefixed_int(parts[2], 'r', "radius"), vertex_cap);
  }
  if (kind == "gw") {
    if (parts.size() != 3) throw std::invalid_argument("graph spec: gw:<law>:d<depth>");
    OffspringLaw law = detail::parse_offspring_law(parts[1]);
    return gen_gw_tree(law, detail::parse_prefixed_int(parts[2], 'd', "depth"), seed, 10000,
                       vertex_cap);
  }
  if (kind == "horo") {
    if (parts.size() != 2) throw std::invalid_argument("graph spec: horo:d<depth>");
    return gen_horocyclic_tree(detail::parse_prefixed_int(parts[1], 'd', "depth"), vertex_cap).graph;
  }
  throw std::invalid_argument("graph spec: unknown family '" + kind + "'");
}

}  // namespace percolab

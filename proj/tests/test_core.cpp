// Graph construction, exact expansion scans, growth profiles, and the
// graph-spec / serialization plumbing.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "percolab/exact.hpp"
#include "percolab/expansion.hpp"
#include "percolab/generators.hpp"
#include "percolab/graph.hpp"
#include "percolab/graph_spec.hpp"
#include "percolab/percolation.hpp"
#include "percolab/rng.hpp"

using namespace percolab;

namespace {

// boundary must be exactly the distance-r shell around the basepoint
void check_shell_boundary(const Graph& g, int radius) {
  auto dist = bfs_distances(g, g.basepoint);
  for (int v = 0; v < g.n; ++v) {
    REQUIRE(dist[v] >= 0);  // connected
    REQUIRE(dist[v] <= radius);
    REQUIRE(static_cast<bool>(g.is_boundary[v]) == (dist[v] == radius));
  }
}

// adjacency structure is symmetric and consistent with the edge list
void check_adjacency(const Graph& g) {
  long stubs = 0;
  for (int v = 0; v < g.n; ++v) {
    stubs += g.degree(v);
    for (int u : g.neighbors(v)) {
      REQUIRE(u >= 0);
      REQUIRE(u < g.n);
      REQUIRE(u != v);
      REQUIRE(g.edge_index(u, v) == g.edge_index(v, u));
      REQUIRE(g.edge_index(u, v) >= 0);
    }
    REQUIRE(g.degree(v) <= g.degree_bound);
  }
  REQUIRE(stubs == 2 * g.edge_count());
}

}  // namespace

TEST_CASE("torus generator: counts and regularity") {
  Graph c4 = gen_torus(1, 4);
  REQUIRE(c4.n == 4);
  REQUIRE(c4.edge_count() == 4);
  for (int v = 0; v < 4; ++v) REQUIRE(c4.degree(v) == 2);
  REQUIRE(c4.boundary_list.empty());

  Graph t = gen_torus(2, 3);
  REQUIRE(t.n == 9);
  REQUIRE(t.edge_count() == 18);
  for (int v = 0; v < t.n; ++v) REQUIRE(t.degree(v) == 4);

  Graph big = gen_torus(2, 32);
  REQUIRE(big.n == 1024);
  REQUIRE(big.edge_count() == 2048);
  check_adjacency(big);

  REQUIRE_THROWS_AS(gen_torus(0, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(gen_torus(1, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(gen_torus(3, 200, 10000), std::invalid_argument);  // cap
}

TEST_CASE("tree ball generator: counts and shell boundary") {
  Graph b2 = gen_tree_ball(3, 2);
  REQUIRE(b2.n == 10);  // 1 + 3 + 6
  REQUIRE(b2.boundary_list.size() == 6);
  check_shell_boundary(b2, 2);
  check_adjacency(b2);

  Graph star = gen_tree_ball(3, 1);
  REQUIRE(star.n == 4);
  REQUIRE(star.degree(star.basepoint) == 3);
  REQUIRE(star.boundary_list.size() == 3);
  for (int v : star.boundary_list) REQUIRE(star.degree(v) == 1);

  // closed-form ball count 1 + 4(3^3 - 1)/2
  Graph b43 = gen_tree_ball(4, 3);
  REQUIRE(b43.n == 53);
  check_shell_boundary(b43, 3);

  // interior vertices are full-degree
  for (int v = 0; v < b2.n; ++v)
    if (!b2.is_boundary[v]) REQUIRE(b2.degree(v) == 3);

  REQUIRE_THROWS_AS(gen_tree_ball(1, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(gen_tree_ball(3, -1), std::invalid_argument);
}

TEST_CASE("grid ball generator: paths, squares, shell boundary") {
  Graph path = gen_grid_ball(1, 5);
  REQUIRE(path.n == 11);
  REQUIRE(path.edge_count() == 10);
  REQUIRE(path.boundary_list.size() == 2);
  check_shell_boundary(path, 5);

  Graph g33 = gen_grid_ball(2, 1);
  REQUIRE(g33.n == 9);
  REQUIRE(g33.boundary_list.size() == 8);

  Graph g = gen_grid_ball(2, 20);
  REQUIRE(g.n == 41 * 41);
  check_adjacency(g);
}

TEST_CASE("tree-cross-line ball generator") {
  Graph tiny = gen_tree_cross_z_ball(3, 0);
  REQUIRE(tiny.n == 1);

  Graph b1 = gen_tree_cross_z_ball(3, 1);
  REQUIRE(b1.n == 6);  // basepoint + 3 tree neighbors + 2 line neighbors
  REQUIRE(b1.degree(b1.basepoint) == 5);
  check_shell_boundary(b1, 1);

  Graph b2 = gen_tree_cross_z_ball(3, 2);
  check_shell_boundary(b2, 2);
  check_adjacency(b2);
  for (int v = 0; v < b2.n; ++v)
    if (!b2.is_boundary[v]) REQUIRE(b2.degree(v) == 5);

  // vertex count agrees with an independent count over (tree-depth, height)
  // pairs: a vertex at tree depth k pairs with heights |z| <= 2 - k.
  long expect = 0;
  long sphere = 1;  // tree sphere sizes 1, 3, 6
  for (int k = 0; k <= 2; ++k) {
    expect += sphere * (2 * (2 - k) + 1);
    sphere = k == 0 ? 3 : sphere * 2;
  }
  REQUIRE(b2.n == expect);
}

TEST_CASE("stretched graphs: identity, constant, geometric laws") {
  Graph c4 = gen_torus(1, 4);

  Graph same = gen_stretched(c4, EdgeLengthLaw::constant(1), 7);
  REQUIRE(same.n == c4.n);
  REQUIRE(same.edge_count() == c4.edge_count());
  std::set<std::pair<int, int>> a(c4.edges.begin(), c4.edges.end());
  std::set<std::pair<int, int>> b(same.edges.begin(), same.edges.end());
  REQUIRE(a == b);

  Graph c8 = gen_stretched(c4, EdgeLengthLaw::constant(2), 7);
  REQUIRE(c8.n == 8);
  REQUIRE(c8.edge_count() == 8);
  for (int v = 0; v < c8.n; ++v) REQUIRE(c8.degree(v) == 2);
  // connected single cycle
  auto dist = bfs_distances(c8, 0);
  REQUIRE(*std::min_element(dist.begin(), dist.end()) == 0);
  REQUIRE(*std::max_element(dist.begin(), dist.end()) == 4);

  // geometric(1/2) doubles the expected edge count
  Graph host = gen_tree_ball(3, 6);
  const long e_host = host.edge_count();
  const int reps = 200;
  double total = 0.0;
  for (int i = 0; i < reps; ++i)
    total += gen_stretched(host, EdgeLengthLaw::geometric(0.5), 1000 + i).edge_count();
  double mean = total / reps;
  // each length is geometric(1/2) on {1,2,...}: mean 2, variance 2
  double sigma_mean = std::sqrt(2.0 * static_cast<double>(e_host) / reps);
  REQUIRE(std::fabs(mean - 2.0 * static_cast<double>(e_host)) <= 3.0 * sigma_mean);

  REQUIRE_THROWS_AS(EdgeLengthLaw::geometric(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(EdgeLengthLaw::constant(0), std::invalid_argument);
}

TEST_CASE("branching-tree generator: deterministic, conditioned, and mean boundary") {
  OffspringLaw two;
  two.probs = {0.0, 0.0, 1.0};
  Graph bin = gen_gw_tree(two, 3, 5);
  REQUIRE(bin.n == 15);
  REQUIRE(bin.boundary_list.size() == 8);
  check_shell_boundary(bin, 3);

  OffspringLaw coin;
  coin.probs = {0.5, 0.0, 0.5};
  for (std::uint64_t s = 0; s < 20; ++s) {
    Graph g = gen_gw_tree(coin, 1, s);
    REQUIRE(g.degree(g.basepoint) == 2);  // survival to depth 1 forces 2 children
  }

  // law {1: 1/2, 2: 1/2}: mean boundary size at depth 10 against a direct
  // simulation of the same conditioned process
  OffspringLaw grow;
  grow.probs = {0.0, 0.5, 0.5};
  const int depth = 10, trials = 2000;
  double lib_total = 0.0;
  for (int i = 0; i < trials; ++i)
    lib_total += gen_gw_tree(grow, depth, 40000 + i).boundary_list.size();
  double lib_mean = lib_total / trials;

  // oracle: population process Z_{k+1} = sum of 1-or-2 children (never dies,
  // so conditioning is vacuous for this law); E Z_10 = 1.5^10
  CounterRng rng(987654321, stream::kTrial);
  double sim_total = 0.0;
  for (int i = 0; i < trials; ++i) {
    long z = 1;
    for (int k = 0; k < depth; ++k) {
      long next = 0;
      for (long j = 0; j < z; ++j) next += rng.bernoulli(0.5) ? 2 : 1;
      z = next;
    }
    sim_total += static_cast<double>(z);
  }
  double sim_mean = sim_total / trials;
  double expect = std::pow(1.5, depth);
  // generous 10% window around the closed-form mean for both estimators
  REQUIRE(std::fabs(lib_mean - expect) <= 0.1 * expect);
  REQUIRE(std::fabs(sim_mean - expect) <= 0.1 * expect);
  REQUIRE(std::fabs(lib_mean - sim_mean) <= 0.15 * expect);
}

TEST_CASE("horocyclic window: levels, doubling, acyclic parents") {
  HorocyclicTree h1 = gen_horocyclic_tree(1);
  std::map<int, int> level_count;
  for (int v = 0; v < h1.graph.n; ++v) ++level_count[h1.level[v]];
  REQUIRE(level_count.size() == 3);
  for (int v = 0; v < h1.graph.n; ++v)
    if (h1.level[v] == 0) REQUIRE(h1.graph.degree(v) == 3);

  HorocyclicTree h5 = gen_horocyclic_tree(5);
  std::map<int, long> sizes;
  for (int v = 0; v < h5.graph.n; ++v) ++sizes[h5.level[v]];
  for (int lv = -5; lv < 5; ++lv) REQUIRE(sizes[lv + 1] == 2 * sizes[lv]);

  // parent map acyclic with chains no longer than the window height
  for (int v = 0; v < h5.graph.n; ++v) {
    int steps = 0, u = v;
    while (h5.parent[u] != -1) {
      u = h5.parent[u];
      ++steps;
      REQUIRE(steps <= 10);
    }
  }
  // parents live exactly one level up
  for (int v = 0; v < h5.graph.n; ++v)
    if (h5.parent[v] != -1) REQUIRE(h5.level[h5.parent[v]] == h5.level[v] - 1);
}

TEST_CASE("edge boundary counting") {
  Graph c4 = gen_torus(1, 4);
  REQUIRE(edge_boundary_size(c4, {}) == 0);
  REQUIRE(edge_boundary_size(c4, {0, 1, 2, 3}) == 0);
  // two adjacent vertices of the 4-cycle
  int nb = c4.neighbors(0)[0];
  REQUIRE(edge_boundary_size(c4, {0, nb}) == 2);
}

TEST_CASE("average induced degree is exact") {
  Graph path = gen_grid_ball(1, 1);  // path on 3 vertices
  REQUIRE(alpha_of_set(path, {0, 1, 2}) == make_rational(4, 3));

  Graph c4 = gen_torus(1, 4);
  REQUIRE(alpha_of_set(c4, {0, 1, 2, 3}) == make_rational(2, 1));

  // subtrees of a tree: alpha = 2(k-1)/k, always below 2
  Graph tb = gen_tree_ball(3, 3);
  auto dist = bfs_distances(tb, tb.basepoint);
  std::vector<int> sub;
  for (int v = 0; v < tb.n; ++v)
    if (dist[v] <= 1) sub.push_back(v);  // star: k = 4
  REQUIRE(alpha_of_set(tb, sub) == make_rational(2 * 3, 4));
  for (int k : {2, 5, 9}) {
    std::vector<int> take;
    for (int v = 0; v < tb.n && static_cast<int>(take.size()) < k; ++v)
      if (dist[v] <= 2) take.push_back(v);  // BFS order keeps it connected
    Rational a = alpha_of_set(tb, take);
    REQUIRE(a == make_rational(2 * (k - 1), k));
    REQUIRE(a < make_rational(2, 1));
  }

  REQUIRE_THROWS_AS(alpha_of_set(c4, {}), std::invalid_argument);
}

TEST_CASE("edge-isoperimetry brute force on tree and grid balls") {
  // single admissible vertex: ratio 3/1
  Graph b1 = gen_tree_ball(3, 1);
  IsoEdgeResult lone = iso_edge_bruteforce(b1, 4);
  REQUIRE(lone.any_admissible);
  REQUIRE(lone.value == make_rational(3, 1));
  REQUIRE(lone.witness == std::vector<int>{b1.basepoint});

  // interior subtrees of size k have ratio (k+2)/k; the scan takes the max k
  Graph tb = gen_tree_ball(3, 4);
  IsoEdgeResult tree_iso = iso_edge_bruteforce(tb, 8);
  REQUIRE(tree_iso.any_admissible);
  REQUIRE(tree_iso.value == make_rational(10, 8));
  REQUIRE(tree_iso.witness.size() == 8);
  REQUIRE(tree_iso.value >= make_rational(1, 1));

  // identity: iso = degree - max alpha over the same family on regular hosts
  Rational best_alpha(0);
  {
    std::vector<std::uint8_t> allowed(tb.n);
    for (int v = 0; v < tb.n; ++v) allowed[v] = !tb.is_boundary[v];
    for_each_connected_set(tb, 8, allowed, -1, [&](const SetVisit& s) {
      Rational a = alpha_of_set(tb, s.members);
      if (a > best_alpha) best_alpha = a;
    });
  }
  REQUIRE(tree_iso.value == make_rational(3, 1) - best_alpha);

  // square witnesses on the planar grid: 2x2 -> 2, 3x3 -> 4/3, decreasing
  Graph gb = gen_grid_ball(2, 4);
  IsoEdgeResult sq4 = iso_edge_bruteforce(gb, 4);
  REQUIRE(sq4.value == make_rational(2, 1));
  IsoEdgeResult sq9 = iso_edge_bruteforce(gb, 9);
  REQUIRE(sq9.value == make_rational(4, 3));
  REQUIRE(sq9.value < sq4.value);
}

TEST_CASE("anchored expansion profiles") {
  // tree ball: every anchored ratio is at least 1
  Graph tb = gen_tree_ball(3, 4);
  AnchoredProfile tp = anchored_expansion_bruteforce(tb, 7);
  REQUIRE(tp.values.size() == 7);
  for (const Rational& v : tp.values) REQUIRE(v >= make_rational(1, 1));
  for (std::size_t i = 1; i < tp.values.size(); ++i)
    REQUIRE(tp.values[i] >= tp.values[i - 1]);

  // anchored constant dominates the unanchored isoperimetric value
  IsoEdgeResult iso = iso_edge_bruteforce(tb, 7);
  REQUIRE(tp.values[0] >= iso.value);

  // path: anchored sets of size n have exactly 2 boundary edges
  Graph path = gen_grid_ball(1, 6);
  AnchoredProfile pp = anchored_expansion_bruteforce(path, 5);
  for (int n = 1; n <= 5; ++n)
    REQUIRE(pp.per_size_min[n - 1] == make_rational(2, n));

  // a pendant path attached at the basepoint wins the minimization
  Graph tball = gen_tree_ball(3, 2);
  std::vector<std::pair<int, int>> edges = tball.edges;
  int base = tball.basepoint;
  int first = tball.n;
  for (int j = 0; j < 6; ++j)
    edges.emplace_back(j == 0 ? base : first + j - 1, first + j);
  std::vector<int> bd = tball.boundary_list;
  Graph pend = build_graph(tball.n + 6, std::move(edges), base, std::move(bd),
                           "tree-with-pendant");
  AnchoredProfile ap = anchored_expansion_bruteforce(pend, 6);
  // best size-6 set: basepoint plus 5 pendant vertices, 4 boundary edges
  REQUIRE(ap.per_size_min[5] == make_rational(4, 6));
  const auto& w = ap.per_size_witness[5];
  REQUIRE(std::count_if(w.begin(), w.end(), [&](int v) { return v >= first; }) == 5);
}

TEST_CASE("growth profiles and rate estimates") {
  Graph tb = gen_tree_ball(3, 8);
  GrowthProfile tg = growth_profile(tb, 8);
  REQUIRE(tg.sphere_sizes[0] == 1);
  long expect = 3;
  for (int n = 1; n <= 8; ++n) {
    REQUIRE(tg.sphere_sizes[n] == expect);
    expect *= 2;
  }
  REQUIRE(tg.gr_estimate == Catch::Approx(std::pow(384.0, 1.0 / 8.0)).epsilon(1e-12));
  REQUIRE(tg.gr_estimate > 2.0);  // submultiplicative upper estimates approach 2

  Graph gb = gen_grid_ball(2, 12);
  GrowthProfile gg = growth_profile(gb, 12);
  for (int n = 1; n <= 12; ++n) REQUIRE(gg.sphere_sizes[n] == 4 * n);
  REQUIRE(gg.gr_estimate < 1.5);  // polynomial growth pushes the estimate to 1
  for (std::size_t i = 1; i < gg.root_estimates.size(); ++i)
    REQUIRE(gg.root_estimates[i] <= gg.root_estimates[i - 1] + 1e-12);

  // product of tree and line: sphere counts match the convolution oracle
  Graph pz = gen_tree_cross_z_ball(3, 12);
  GrowthProfile pg = growth_profile(pz, 12);
  std::vector<long> tree_sphere{1};
  for (int n = 1; n <= 12; ++n) tree_sphere.push_back(3L << (n - 1));
  for (int n = 0; n <= 12; ++n) {
    long conv = 0;
    for (int k = 0; k <= n; ++k) conv += tree_sphere[k] * (n - k == 0 ? 1 : 2);
    REQUIRE(pg.sphere_sizes[n] == conv);
  }
  REQUIRE(pg.gr_estimate > 1.0);
  REQUIRE(pg.gr_estimate <= 3.0);

  // refuses truncated hosts
  REQUIRE_THROWS_AS(growth_profile(gen_tree_ball(3, 4), 5), std::invalid_argument);
}

TEST_CASE("edge-list serialization round trip") {
  Graph g = gen_tree_ball(3, 3);
  std::ostringstream os;
  write_edge_list(g, os);
  std::istringstream is(os.str());
  Graph back = parse_edge_list(is, g.family_tag);
  REQUIRE(back.n == g.n);
  REQUIRE(back.edges == g.edges);
  REQUIRE(back.basepoint == g.basepoint);
  REQUIRE(back.boundary_list == g.boundary_list);

  std::istringstream bad("not a graph");
  REQUIRE_THROWS_AS(parse_edge_list(bad), std::invalid_argument);
}

TEST_CASE("percolation-config serialization round trip") {
  Graph g = gen_torus(2, 5);
  PercConfig cfg = sample_bond(g, 0.55, 99);
  std::ostringstream os;
  write_perc_config(cfg, os);
  std::istringstream is(os.str());
  PercConfig back = parse_perc_config(g, is);
  REQUIRE(back.mode == cfg.mode);
  REQUIRE(back.mask == cfg.mask);
  REQUIRE(back.p == Catch::Approx(cfg.p));

  PercConfig site = sample_site(g, 0.3, 5);
  std::ostringstream os2;
  write_perc_config(site, os2);
  std::istringstream is2(os2.str());
  PercConfig back2 = parse_perc_config(g, is2);
  REQUIRE(back2.mode == PercMode::kSite);
  REQUIRE(back2.mask == site.mask);
}

TEST_CASE("graph specs parse and reject") {
  REQUIRE(parse_graph_spec("torus:2:4", 0).n == 16);
  REQUIRE(parse_graph_spec("tree:3:r2", 0).n == 10);
  REQUIRE(parse_graph_spec("grid:1:r5", 0).n == 11);
  REQUIRE(parse_graph_spec("treez:3:r1", 0).n == 6);
  REQUIRE(parse_graph_spec("horo:d2", 0).n > 0);
  REQUIRE(parse_graph_spec("stretch(tree:3:r2,const:1)", 0).n == 10);
  REQUIRE(parse_graph_spec("stretch(torus:1:4,const:2)", 0).n == 8);
  Graph gw = parse_graph_spec("gw:1=0.5+2=0.5:d4", 11);
  REQUIRE(gw.n >= 5);

  REQUIRE_THROWS_AS(parse_graph_spec("tree:3", 0), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_graph_spec("tree:3:5", 0), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_graph_spec("lattice:2:3", 0), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_graph_spec("", 0), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_graph_spec("stretch(torus:1:4)", 0), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_graph_spec("torus:2:4:9", 0), std::invalid_argument);
}

TEST_CASE("exact decimal parsing") {
  REQUIRE(parse_decimal("0.1") == make_rational(1, 10));
  REQUIRE(parse_decimal("2") == make_rational(2, 1));
  REQUIRE(parse_decimal("-0.25") == make_rational(-1, 4));
  REQUIRE(parse_decimal("0.125") == make_rational(1, 8));
  REQUIRE_THROWS_AS(parse_decimal(""), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_decimal("abc"), std::invalid_argument);
  REQUIRE_THROWS_AS(make_rational(1, 0), std::invalid_argument);
}

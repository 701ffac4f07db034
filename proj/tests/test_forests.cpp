// Spanning-tree and spanning-forest sampling: Wilson's algorithm against
// enumeration oracles, Kirchhoff edge probabilities and degree sums, the
// retention threshold, orientation audits, and the degree dichotomy.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "percolab/forests.hpp"
#include "percolab/generators.hpp"
#include "percolab/percolation.hpp"

using namespace percolab;

TEST_CASE("a tree host is its own unique spanning tree") {
  Graph ball = gen_tree_ball(3, 4);
  ForestSample s = ust_free(ball, 9);
  REQUIRE(static_cast<int>(s.edges.size()) == ball.edge_count());
  for (int e = 0; e < ball.edge_count(); ++e) REQUIRE(s.edges[e] == e);
  REQUIRE(s.root == ball.basepoint);
  // orientation points at the root: following parents terminates there
  for (int v = 0; v < ball.n; ++v) {
    int u = v, hops = 0;
    while (u != s.root) {
      u = s.parent_vertex[u];
      REQUIRE(++hops <= ball.n);
    }
  }
  REQUIRE(audit_forest_sample(s));

  Graph two = build_graph(2, {}, 0, {}, "disconnected");
  REQUIRE_THROWS_AS(ust_free(two, 1), std::invalid_argument);
}

TEST_CASE("spanning-tree enumeration on tiny hosts") {
  REQUIRE(enumerate_spanning_trees(gen_torus(1, 4)).size() == 4);
  REQUIRE(enumerate_spanning_trees(gen_torus(1, 3)).size() == 3);
  Graph sq = build_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 0, {}, "grid:2x2");
  REQUIRE(enumerate_spanning_trees(sq).size() == 4);
  Graph path = gen_grid_ball(1, 2);
  REQUIRE(enumerate_spanning_trees(path).size() == 1);
}

TEST_CASE("Wilson samples are uniform on the 4-cycle") {
  Graph c4 = gen_torus(1, 4);
  auto trees = enumerate_spanning_trees(c4);
  REQUIRE(trees.size() == 4);
  std::map<std::vector<int>, long> counts;
  const long n = 4000;
  for (long i = 0; i < n; ++i) {
    ForestSample s = wilson_ust(c4, c4.basepoint, counter_word(5, stream::kTrial, i));
    REQUIRE(audit_forest_sample(s));
    ++counts[s.edges];
  }
  REQUIRE(counts.size() == 4);
  double sigma = std::sqrt(0.25 * 0.75 * n);
  for (const auto& [edges, c] : counts)
    REQUIRE(std::fabs(static_cast<double>(c) - n / 4.0) <= 4.0 * sigma);
}

TEST_CASE("Wilson sampling is reproducible by seed") {
  Graph g = gen_torus(2, 4);
  ForestSample a = wilson_ust(g, g.basepoint, 123);
  ForestSample b = wilson_ust(g, g.basepoint, 123);
  REQUIRE(a.edges == b.edges);
  REQUIRE(a.parent_vertex == b.parent_vertex);
  ForestSample c = wilson_ust(g, g.basepoint, 124);
  REQUIRE(a.edges != c.edges);  // 1/75-ish collision odds; pinned seeds differ
}

TEST_CASE("wired sampling on the star: one uniform edge survives") {
  // radius-1 ball of the 3-regular tree: all leaves collapse into the
  // terminal, leaving a 2-state multigraph with 3 parallel edges
  Graph star = gen_tree_ball(3, 1);
  std::map<int, long> freq;
  const long n = 3000;
  for (long i = 0; i < n; ++i) {
    ForestSample s = ust_wired(star, counter_word(8, stream::kTrial, i));
    REQUIRE(s.wired);
    REQUIRE(s.edges.size() == 1);
    REQUIRE(sample_degree_at(s, star.basepoint) == 1);
    ++freq[s.edges[0]];
  }
  REQUIRE(freq.size() == 3);
  double sigma = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) * n);
  for (const auto& [e, c] : freq)
    REQUIRE(std::fabs(static_cast<double>(c) - n / 3.0) <= 4.0 * sigma);

  KirchhoffDegree kd = expected_degree(star, true);
  REQUIRE(kd.exact);
  REQUIRE(kd.exact_value == Rational(1));
}

TEST_CASE("edge inclusion probabilities match effective resistances") {
  Graph c4 = gen_torus(1, 4);
  for (int e = 0; e < c4.edge_count(); ++e)
    REQUIRE(edge_prob_exact(c4, e) == make_rational(3, 4));

  Graph k3 = gen_torus(1, 3);
  for (int e = 0; e < k3.edge_count(); ++e)
    REQUIRE(edge_prob_exact(k3, e) == make_rational(2, 3));

  // bridges are always in the tree
  Graph path = gen_grid_ball(1, 1);
  REQUIRE(edge_prob_exact(path, 0) == Rational(1));

  // Monte Carlo agreement on the 4-cycle
  const long n = 4000;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    ForestSample s = wilson_ust(c4, 0, counter_word(12, stream::kTrial, i));
    if (std::find(s.edges.begin(), s.edges.end(), 0) != s.edges.end()) ++hits;
  }
  double sigma = std::sqrt(0.75 * 0.25 * n);
  REQUIRE(std::fabs(static_cast<double>(hits) - 0.75 * n) <= 4.0 * sigma);
}

TEST_CASE("free and wired degree reports on tree balls") {
  Graph ball = gen_tree_ball(3, 6);

  // free forest on a tree host: the host itself, degree deterministic
  DegreeReport free_rep = degree_report(ball, false, 400, 3);
  REQUIRE(free_rep.mean == 3.0);
  REQUIRE(free_rep.ci.stddev == 0.0);
  REQUIRE(free_rep.kirchhoff == Catch::Approx(3.0));

  // wired expectation: exact Kirchhoff value 125/63 at radius 6
  KirchhoffDegree kd = expected_degree(ball, true);
  REQUIRE(kd.wired);
  REQUIRE(kd.exact);
  REQUIRE(kd.exact_value == make_rational(125, 63));

  DegreeReport wired_rep = degree_report(ball, true, 4000, 77);
  REQUIRE(std::fabs(wired_rep.mean - kd.value) <= 3.5 * wired_rep.ci.half_width / 1.96);
  REQUIRE(wired_rep.kirchhoff == Catch::Approx(kd.value));

  // wired degrees increase with radius but stay below 2
  KirchhoffDegree k8 = expected_degree(gen_tree_ball(3, 8), true);
  REQUIRE(kd.value < k8.value);
  REQUIRE(k8.value < 2.0);
}

TEST_CASE("free dominates wired in expectation on every host") {
  for (const Graph& g : {gen_tree_ball(3, 5), gen_grid_ball(2, 4)}) {
    KirchhoffDegree free_deg = expected_degree(g, false);
    KirchhoffDegree wired_deg = expected_degree(g, true);
    REQUIRE(free_deg.value >= wired_deg.value - 1e-12);
  }
}

TEST_CASE("retention threshold from the free forest degree") {
  // tree host: exact 2/3
  ThresholdReport tree_thr = p0_threshold(gen_tree_ball(3, 5), 100, 4);
  REQUIRE(tree_thr.exact);
  REQUIRE(tree_thr.exact_value == make_rational(2, 3));
  REQUIRE_FALSE(tree_thr.vacuous);
  REQUIRE(tree_thr.free_degree == Catch::Approx(3.0));

  // cycle host: free expected degree below 2, threshold vacuous
  ThresholdReport cyc = p0_threshold(gen_torus(1, 6), 100, 4);
  REQUIRE(cyc.vacuous);
  REQUIRE(cyc.free_degree < 2.0);

  // product ball: meaningful threshold strictly inside (0, 1), exact path
  Graph pz = gen_tree_cross_z_ball(3, 3);
  ThresholdReport prod = p0_threshold(pz, 100, 4);
  REQUIRE(prod.value > 0.0);
  REQUIRE(prod.value < 1.0);
  REQUIRE_FALSE(prod.vacuous);

  // the same host through the Monte Carlo path (exact cap forced down)
  ThresholdReport mc = p0_threshold(pz, 6000, 4, 1, 10);
  REQUIRE_FALSE(mc.exact);
  REQUIRE(std::fabs(mc.value - prod.value) < 0.08);
}

TEST_CASE("oriented wired forest audit identities") {
  Graph ball = gen_tree_ball(3, 5);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    ForestSample s = ust_wired(ball, seed);
    REQUIRE(audit_forest_sample(s));
    OwsfAudit audit = owsf_degree_audit(s);
    REQUIRE(audit.orientation_ok);
    REQUIRE(audit.sums_equal);
    REQUIRE(audit.out_sum == audit.edges);
    REQUIRE(audit.in_sum == audit.edges);
    REQUIRE(audit.basepoint_in_degree >= 0);
    REQUIRE(audit.basepoint_in_degree <= 3);
  }
}

TEST_CASE("Rayleigh monotonicity of edge inclusion") {
  Graph g = gen_torus(2, 4);
  // keep a random two-thirds of the edges, always keeping edge 5
  PercConfig sub = sample_bond(g, 0.66, 31);
  sub.mask[5] = 1;
  RayleighCheck chk = rayleigh_monotonicity_check(g, sub, 5);
  REQUIRE(chk.ok);
  REQUIRE(chk.p_sub >= chk.p_full);

  // full subgraph: equality
  PercConfig full = sample_bond(g, 1.0, 0);
  RayleighCheck eq = rayleigh_monotonicity_check(g, full, 5);
  REQUIRE(eq.p_sub == eq.p_full);

  REQUIRE_THROWS_AS(rayleigh_monotonicity_check(g, sample_bond(g, 0.0, 0), 5),
                    std::invalid_argument);
}

TEST_CASE("degree dichotomy on the tree ball") {
  Graph ball = gen_tree_ball(3, 7);
  DichotomyReport rep = degree_dichotomy_experiment(ball, 0.55, 1500, 99);
  REQUIRE(rep.n_touching >= 50);
  REQUIRE(rep.n_finite >= 50);
  // frontier-touching clusters keep more of the degree than interior ones
  REQUIRE(rep.mean_touching - rep.mean_finite >
          (rep.ci_touching.half_width + rep.ci_finite.half_width));
  REQUIRE(rep.mean_finite < 2.0);

  REQUIRE_THROWS_AS(degree_dichotomy_experiment(gen_torus(2, 4), 0.5, 10, 0),
                    std::invalid_argument);
}

TEST_CASE("wired collapse keeps parallel conductance and drops shell edges") {
  Graph ball = gen_tree_ball(3, 2);
  WGraph w = wgraph_wired(ball);
  // interior states plus the terminal
  int interior = 0;
  for (int v = 0; v < ball.n; ++v)
    if (!ball.is_boundary[v]) ++interior;
  REQUIRE(w.n == interior + 1);
  REQUIRE(w.root == interior);
  // every host edge with an interior endpoint shows up exactly once
  long kept = 0;
  for (const auto& [u, v] : ball.edges)
    if (!ball.is_boundary[u] || !ball.is_boundary[v]) ++kept;
  REQUIRE(static_cast<long>(w.ends.size()) == kept);
}

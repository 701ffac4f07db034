// Percolation sampling, cluster decomposition, the iterative trimming pass,
// isoperimetry verification, the density bound, and the mass-transport and
// horocyclic audits.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <queue>
#include <vector>

#include "percolab/generators.hpp"
#include "percolab/mass_transport.hpp"
#include "percolab/percolation.hpp"
#include "percolab/stats.hpp"
#include "percolab/trimming.hpp"

using namespace percolab;

namespace {

// independent component labeling by BFS over active edges/vertices
std::vector<int> bfs_labels(const PercConfig& cfg) {
  const Graph& g = *cfg.host;
  std::vector<int> label(g.n, -1);
  int next = 0;
  for (int s = 0; s < g.n; ++s) {
    if (!cfg.vertex_active(s) || label[s] >= 0) continue;
    label[s] = next;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      auto nb = g.neighbors(v);
      auto ie = g.incident_edges(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        int u = nb[k];
        if (label[u] >= 0 || !cfg.vertex_active(u)) continue;
        if (!cfg.edge_active(ie[k])) continue;
        label[u] = next;
        q.push(u);
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

TEST_CASE("bond and site sampling endpoints") {
  Graph g = gen_torus(2, 4);
  PercConfig all = sample_bond(g, 1.0, 3);
  for (auto b : all.mask) REQUIRE(b == 1);
  PercConfig none = sample_bond(g, 0.0, 3);
  for (auto b : none.mask) REQUIRE(b == 0);
  PercConfig full_site = sample_site(g, 1.0, 3);
  for (auto b : full_site.mask) REQUIRE(b == 1);
  REQUIRE_THROWS_AS(sample_bond(g, 1.5, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(sample_site(g, -0.1, 0), std::invalid_argument);
}

TEST_CASE("per-edge uniforms couple configurations monotonically in p") {
  Graph g = gen_torus(2, 6);
  for (std::uint64_t seed : {1ULL, 77ULL, 991ULL}) {
    PercConfig lo = sample_bond(g, 0.3, seed);
    PercConfig hi = sample_bond(g, 0.7, seed);
    for (int e = 0; e < g.edge_count(); ++e) REQUIRE(lo.mask[e] <= hi.mask[e]);
    PercConfig slo = sample_site(g, 0.2, seed);
    PercConfig shi = sample_site(g, 0.9, seed);
    for (int v = 0; v < g.n; ++v) REQUIRE(slo.mask[v] <= shi.mask[v]);
  }
}

TEST_CASE("cluster decomposition endpoints and bookkeeping") {
  Graph g = gen_torus(2, 4);
  ClusterDecomposition full = clusters(sample_bond(g, 1.0, 0));
  REQUIRE(full.count == 1);
  REQUIRE(full.sizes[0] == g.n);

  ClusterDecomposition empty = clusters(sample_bond(g, 0.0, 0));
  REQUIRE(empty.count == g.n);
  for (long s : empty.sizes) REQUIRE(s == 1);
  // every singleton sees all its host edges as cluster-boundary edges
  for (int v = 0; v < g.n; ++v) REQUIRE(empty.edge_boundary[empty.label[v]] == 4);

  // site mode: inactive vertices stay unlabeled
  PercConfig site = sample_site(g, 0.5, 12);
  ClusterDecomposition cd = clusters(site);
  for (int v = 0; v < g.n; ++v) REQUIRE((cd.label[v] >= 0) == site.vertex_active(v));

  // boundary flags: on a ball, clusters holding a shell vertex are flagged
  Graph ball = gen_tree_ball(3, 4);
  PercConfig w = sample_bond(ball, 0.8, 5);
  ClusterDecomposition bd = clusters(w);
  for (int v = 0; v < ball.n; ++v)
    if (ball.is_boundary[v]) REQUIRE(bd.touches_boundary[bd.label[v]] == 1);
}

TEST_CASE("cluster labels agree with BFS components across random configs") {
  Graph g = gen_torus(2, 5);
  Graph ball = gen_grid_ball(2, 5);
  for (int i = 0; i < 500; ++i) {
    const Graph& host = i % 2 == 0 ? g : ball;
    double p = (i % 10) / 10.0;
    PercConfig cfg = i % 3 == 0 ? sample_site(host, p, 1000 + i)
                                : sample_bond(host, p, 1000 + i);
    ClusterDecomposition cd = clusters(cfg);
    std::vector<int> oracle = bfs_labels(cfg);
    // same partition: labels must be a bijection of each other
    std::vector<int> fwd(cd.count, -1);
    for (int v = 0; v < host.n; ++v) {
      REQUIRE((cd.label[v] >= 0) == (oracle[v] >= 0));
      if (cd.label[v] < 0) continue;
      if (fwd[cd.label[v]] < 0) fwd[cd.label[v]] = oracle[v];
      REQUIRE(fwd[cd.label[v]] == oracle[v]);
    }
    std::vector<long> sz(cd.count, 0);
    for (int v = 0; v < host.n; ++v)
      if (cd.label[v] >= 0) ++sz[cd.label[v]];
    REQUIRE(sz == cd.sizes);
  }
}

TEST_CASE("boundary-reach probability endpoints and tree oracle") {
  Graph ball = gen_tree_ball(3, 4);
  ReachEstimate one = boundary_reach_probability(ball, PercMode::kBond, 1.0, 50, 1);
  REQUIRE(one.p_hat == 1.0);
  ReachEstimate zero = boundary_reach_probability(ball, PercMode::kBond, 0.0, 50, 1);
  REQUIRE(zero.p_hat == 0.0);

  // tree recursion oracle on the radius-10 ball at p = 0.9: a depth-k vertex
  // reaches the shell unless every child edge fails or subsequently dies
  const int r = 10;
  const double p = 0.9;
  Graph big = gen_tree_ball(3, r);
  std::vector<double> s(r + 1, 1.0);
  for (int j = r - 1; j >= 1; --j) {
    double miss = 1.0 - p * s[j + 1];
    s[j] = 1.0 - miss * miss;
  }
  double miss_root = 1.0 - p * s[1];
  double oracle = 1.0 - miss_root * miss_root * miss_root;

  ReachEstimate est = boundary_reach_probability(big, PercMode::kBond, p, 10000, 424242);
  double sigma = std::sqrt(oracle * (1.0 - oracle) / static_cast<double>(est.trials));
  REQUIRE(std::fabs(est.p_hat - oracle) <= 4.0 * sigma);

  REQUIRE_THROWS_AS(boundary_reach_probability(gen_torus(1, 4), PercMode::kBond, 0.5, 10, 0),
                    std::invalid_argument);
}

TEST_CASE("trim step at the h = 0 limit removes nothing") {
  Graph g = gen_torus(2, 5);
  PercConfig cfg = sample_bond(g, 0.6, 9);
  SubgraphState state = initial_state(cfg);
  SubgraphState before = state;
  for (int sweep = 0; sweep < 5; ++sweep) {
    SweepRecord rec = trim_step(g, state, Rational(0), 9, sweep);
    REQUIRE(rec.removed.empty());
  }
  REQUIRE(state.v_in == before.v_in);
  REQUIRE(state.e_in == before.e_in);
}

TEST_CASE("trim on an empty configuration converges immediately") {
  Graph g = gen_torus(2, 4);
  TrimTrace trace = trim(g, sample_site(g, 0.0, 2), make_rational(1, 10), 2, 10);
  REQUIRE(trace.final_state.vertex_count() == 0);
  REQUIRE(trace.converged);
  REQUIRE(trace.total_removed_vertices == 0);
  REQUIRE(trace.sweeps.size() == 1);

  // isolated active vertices (bond p = 0) all fall to the ratio-0 rule
  TrimTrace iso = trim(g, sample_bond(g, 0.0, 2), make_rational(1, 10), 2, 60);
  REQUIRE(iso.final_state.vertex_count() == 0);
  REQUIRE(iso.converged);
  REQUIRE(iso.total_removed_vertices == g.n);
}

TEST_CASE("trim bookkeeping: every removed component earned its removal") {
  Graph g = gen_torus(2, 8);
  Rational h = make_rational(1, 4);
  for (std::uint64_t seed : {3ULL, 14ULL, 159ULL}) {
    PercConfig cfg = sample_bond(g, 0.45, seed);
    TrimTrace trace = trim(g, cfg, h, seed, 40);
    long removed_v = 0, removed_e = 0;
    long prev_left = initial_state(cfg).vertex_count();
    for (const SweepRecord& rec : trace.sweeps) {
      for (const TrimComponent& c : rec.removed) {
        REQUIRE_FALSE(c.vertices.empty());
        REQUIRE(make_rational(c.boundary_edges, static_cast<long>(c.vertices.size())) < h);
        for (int v : c.vertices) REQUIRE_FALSE(g.is_boundary[v]);
      }
      removed_v += rec.removed_vertices;
      removed_e += rec.removed_edges;
      REQUIRE(rec.vertices_left <= prev_left);
      prev_left = rec.vertices_left;
    }
    REQUIRE(removed_v == trace.total_removed_vertices);
    REQUIRE(removed_e == trace.total_removed_edges);
    REQUIRE(trace.final_state.vertex_count() ==
            initial_state(cfg).vertex_count() - removed_v);
  }
}

TEST_CASE("trim requires a positive threshold") {
  Graph g = gen_torus(1, 4);
  REQUIRE_THROWS_AS(trim(g, sample_bond(g, 1.0, 0), Rational(0), 0, 3),
                    std::invalid_argument);
}

TEST_CASE("isoperimetry verification: empty, witness, and full-ball cases") {
  Graph g = gen_tree_ball(3, 3);

  // empty state: vacuously clean and exhaustive
  SubgraphState empty;
  empty.v_in.assign(g.n, 0);
  empty.e_in.assign(g.edge_count(), 0);
  IsoCheckReport vac = verify_isoperimetry(g, empty, make_rational(1, 2), 6);
  REQUIRE_FALSE(vac.violation);
  REQUIRE(vac.exhaustive);

  // full tree ball: interior sets have ratio >= 1, so h = 1 finds nothing
  SubgraphState full = full_state(g);
  IsoCheckReport clean = verify_isoperimetry(g, full, make_rational(1, 1), 6, true);
  REQUIRE_FALSE(clean.violation);
  REQUIRE(clean.exhaustive);
  REQUIRE(clean.min_ratio_valid);
  REQUIRE(clean.min_ratio == make_rational(8, 6));  // best interior subtree: (k+2)/k at k=6

  // a generous threshold flags the same minimizer as a violation
  IsoCheckReport hit = verify_isoperimetry(g, full, make_rational(3, 2), 6, true);
  REQUIRE(hit.violation);
  REQUIRE(hit.witness.size() == 6);

  // detached interior vertex: caught by the boundary-0 scan
  SubgraphState island = full_state(g);
  int child = g.neighbors(g.basepoint)[0];
  for (int e : g.incident_edges(child)) island.e_in[e] = 0;
  IsoCheckReport island_rep = verify_isoperimetry(g, island, make_rational(1, 10), 3);
  REQUIRE(island_rep.violation);
  REQUIRE(island_rep.witness == std::vector<int>{child});
}

TEST_CASE("density lower bound: plug-in values and guard rails") {
  // perfect configuration keeps everything
  DensityBound perfect = density_lower_bound(0.7, 4.0, 4.0, 1.0, 0.1);
  REQUIRE(perfect.value == Catch::Approx(0.7));
  REQUIRE_FALSE(perfect.vacuous);

  // the acceptance-pinned plug-in: p=1, deg 3, conditional mean 2.85, iso 1, h 0.1
  DensityBound pinned = density_lower_bound(1.0, 3.0, 3.0 * 0.95, 1.0, 0.1);
  REQUIRE(pinned.value == Catch::Approx(0.8125).margin(1e-12));

  // vacuous when the degree deficit eats the whole bound
  DensityBound weak = density_lower_bound(0.5, 4.0, 1.0, 1.0, 0.1);
  REQUIRE(weak.vacuous);

  REQUIRE_THROWS_AS(density_lower_bound(1.0, 3.0, 2.9, 0.2, 0.1), std::domain_error);
  REQUIRE_THROWS_AS(density_lower_bound(0.0, 3.0, 2.9, 1.0, 0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(density_lower_bound(1.0, 3.0, 3.2, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("mass-transport audit on small hosts") {
  Graph g = gen_torus(2, 6);
  MassTransportReport rep =
      mass_transport_audit(g, sample_bond(g, 0.6, 21), make_rational(1, 5), 21, 30);
  REQUIRE(rep.all_ok);
  REQUIRE_FALSE(rep.sweeps.empty());
  REQUIRE(rep.sweeps.size() <= 30);
  for (const SweepAudit& sa : rep.sweeps) {
    REQUIRE(sa.totals_equal);
    REQUIRE(sa.decrement_ok);
    if (sa.removed_components > 0) REQUIRE(sa.received_bound_ok);
  }

  // nothing removable at a tiny threshold: the zero-transport case
  MassTransportReport quiet =
      mass_transport_audit(g, sample_bond(g, 1.0, 4), make_rational(1, 100), 4, 10);
  REQUIRE(quiet.all_ok);
  REQUIRE(quiet.sweeps_with_removals == 0);
  for (const SweepAudit& sa : quiet.sweeps) {
    REQUIRE(sa.sent == Rational(0));
    REQUIRE(sa.received == Rational(0));
  }

  // forest-mode run on a tree ball exercises the allow-boundary path
  Graph ball = gen_tree_ball(3, 6);
  MassTransportReport forest = mass_transport_audit(
      ball, sample_bond(ball, 0.45, 4), make_rational(1, 5), 4, 20, 8, true, true);
  REQUIRE(forest.all_ok);
  for (const SweepAudit& sa : forest.sweeps)
    if (sa.removed_components > 0) REQUIRE(sa.components_are_trees);
}

TEST_CASE("horocyclic percolation audits across p0") {
  HorocyclicTree ht = gen_horocyclic_tree(4);
  for (double p0 : {0.0, 0.35, 0.8, 1.0}) {
    HoroConfig cfg = horocyclic_percolation(ht, p0, 77);
    HoroAudit audit = audit_horocyclic(ht, cfg);
    INFO("p0 = " << p0 << " issue: " << audit.issue);
    REQUIRE(audit.ok);
    REQUIRE(audit.omega_acyclic);
    // every interior component got exactly one patch edge
    REQUIRE(audit.added_edges == audit.interior_components);
  }
  // the patch set is disjoint from the level-percolation edges
  HoroConfig cfg = horocyclic_percolation(ht, 0.5, 3);
  for (int e : cfg.eta_prime) REQUIRE(cfg.eta[e] == 0);
}

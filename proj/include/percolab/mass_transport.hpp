#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/exact.hpp"
#include "percolab/expansion.hpp"
#include "percolab/graph.hpp"
#include "percolab/trimming.hpp"

namespace percolab {

// Exact bookkeeping for one sweep of the trimming pass.  Every vertex v sends
// away the degree it loses; every deleted vertex u receives, spread over its
// component C: the internal degrees of C plus the edges C loses to the rest.
// Totals must agree exactly, and the per-vertex average received inside any
// deleted component stays strictly below alpha + 2h.
struct SweepAudit {
  int sweep = 0;
  long removed_components = 0;
  long removed_vertices = 0;
  long removed_edges = 0;
  Rational sent;              // sum over v of deg_before(v) - deg_after(v)
  Rational received;          // sum over deleted components of 2(E_in + E_bd)
  bool totals_equal = false;
  bool per_vertex_ok = false;     // senders' losses match the transport marginals
  bool no_cross_edges = false;    // deleted components never touch each other
  Rational max_received_avg;      // max over components of (2E_in + 2E_bd)/|C|
  bool received_bound_ok = false; // strict < alpha_used + 2h for every component
  Rational decrement_lhs;         // (2 * removed_edges) / n
  Rational decrement_rhs;         // (alpha_used + 2h) * removed_vertices / n
  bool decrement_ok = false;
  bool components_are_trees = false;  // forest mode: every deleted component acyclic
};

struct MassTransportReport {
  Rational alpha_enumerated;   // sup over connected sets up to alpha_cap
  int alpha_cap = 0;
  Rational alpha_removed_max;  // max host-induced average degree among deletions
  Rational alpha_used;
  bool forest_mode = false;
  std::vector<SweepAudit> sweeps;
  long sweeps_with_removals = 0;
  bool all_ok = true;
  std::string first_issue;
};

// Replays the trimming pass sweep by sweep (same seed, same coins) and audits
// the transport identities in exact arithmetic.  Host must be regular and
// boundary-free unless allow_boundary is set (forest runs on tree balls keep
// their frontier; deleted components still avoid it).  forest_mode pins the
// density constant to 2, which every acyclic component satisfies.
inline MassTransportReport mass_transport_audit(const Graph& g, const PercConfig& start,
                                                const Rational& h, std::uint64_t seed,
                                                int max_sweeps = 0, int alpha_cap = 8,
                                                bool forest_mode = false,
                                                bool allow_boundary = false) {
  if (!allow_boundary) {
    if (!g.boundary_list.empty())
      throw std::invalid_argument("mass_transport_audit: host has a boundary");
    for (int v = 0; v < g.n; ++v)
      if (g.degree(v) != g.degree(0))
        throw std::invalid_argument("mass_transport_audit: host is not regular");
  }
  if (max_sweeps <= 0) max_sweeps = default_trim_sweeps(g.n);

  MassTransportReport report;
  report.forest_mode = forest_mode;
  report.alpha_cap = alpha_cap;
  report.alpha_enumerated = forest_mode ? Rational(2) : alpha_sup_enumerated(g, alpha_cap).value;
  report.alpha_removed_max = Rational(0);

  auto fail = [&](const std::string& why) {
    report.all_ok = false;
    if (report.first_issue.empty()) report.first_issue = why;
  };

  // First pass: replay to collect the deleted components and the running max
  // of their host-induced average degrees (alpha_used must dominate them all,
  // and it enters every sweep's bound, so collect before judging).
  SubgraphState state = initial_state(start);
  std::vector<SweepRecord> records;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    SweepRecord rec = trim_step(g, state, h, seed, sweep);
    bool all_gone = rec.vertices_left == 0;
    records.push_back(std::move(rec));
    if (all_gone) break;
  }
  for (const auto& rec : records)
    for (const auto& c : rec.removed) {
      Rational a = make_rational(2 * c.host_induced_edges, static_cast<long>(c.vertices.size()));
      if (a > report.alpha_removed_max) report.alpha_removed_max = a;
    }
  report.alpha_used = forest_mode ? Rational(2)
                                  : std::max(report.alpha_enumerated, report.alpha_removed_max);
  const Rational bound = report.alpha_used + Rational(2) * h;

  // Second pass: replay again, this time recomputing every quantity from the
  // masks instead of trusting the sweep records.
  state = initial_state(start);
  for (std::size_t si = 0; si < records.size(); ++si) {
    SubgraphState before = state;
    SweepRecord rec = trim_step(g, state, h, seed, static_cast<int>(si));

    auto deg_in = [&](const SubgraphState& s, int v) {
      long d = 0;
      int b = g.adj_off[v], e = g.adj_off[v + 1];
      for (int k = b; k < e; ++k) d += s.e_in[g.adj_eid[k]];
      return d;
    };

    SweepAudit audit;
    audit.sweep = static_cast<int>(si);
    audit.removed_components = static_cast<long>(rec.removed.size());
    audit.removed_vertices = rec.removed_vertices;
    audit.removed_edges = rec.removed_edges;

    std::vector<int> comp_of(g.n, -1);
    for (std::size_t ci = 0; ci < rec.removed.size(); ++ci)
      for (int v : rec.removed[ci].vertices) comp_of[v] = static_cast<int>(ci);

    // sent: degree losses, recounted from the masks
    long sent_total = 0;
    bool per_vertex_ok = true;
    for (int v = 0; v < g.n; ++v) {
      long before_d = before.v_in[v] ? deg_in(before, v) : 0;
      long after_d = state.v_in[v] ? deg_in(state, v) : 0;
      long drop = before_d - after_d;
      sent_total += drop;
      if (comp_of[v] >= 0) {
        // a deleted vertex loses everything it had
        if (drop != before_d || after_d != 0) per_vertex_ok = false;
      } else {
        // a survivor loses exactly its edges into deleted components
        long into_removed = 0;
        int b = g.adj_off[v], e = g.adj_off[v + 1];
        for (int k = b; k < e; ++k)
          if (before.e_in[g.adj_eid[k]] && comp_of[g.adj_vtx[k]] >= 0) ++into_removed;
        if (drop != into_removed) per_vertex_ok = false;
      }
    }
    audit.per_vertex_ok = per_vertex_ok;
    if (!per_vertex_ok) fail("per-vertex degree-loss identity failed");

    // received: recount each component's internal and outgoing edges
    long received_total = 0;
    bool cross_ok = true, avg_ok = true, trees_ok = true;
    Rational max_avg(0);
    for (std::size_t ci = 0; ci < rec.removed.size(); ++ci) {
      const auto& comp = rec.removed[ci];
      long twice_internal = 0, outgoing = 0;
      for (int v : comp.vertices) {
        int b = g.adj_off[v], e = g.adj_off[v + 1];
        for (int k = b; k < e; ++k) {
          if (!before.e_in[g.adj_eid[k]]) continue;
          int u = g.adj_vtx[k];
          if (comp_of[u] == static_cast<int>(ci)) {
            ++twice_internal;
          } else {
            ++outgoing;
            if (comp_of[u] >= 0) cross_ok = false;  // two deleted components touching
          }
        }
      }
      long internal = twice_internal / 2;
      long size = static_cast<long>(comp.vertices.size());
      received_total += 2 * internal + 2 * outgoing;
      Rational avg = make_rational(2 * internal + 2 * outgoing, size);
      if (avg > max_avg) max_avg = avg;
      if (!(avg < bound)) avg_ok = false;
      if (forest_mode && internal != size - 1) trees_ok = false;
      // cross-check the sweep record's own counters
      if (internal != comp.internal_edges || outgoing != comp.boundary_edges)
        fail("sweep record counters disagree with mask recount");
    }
    audit.no_cross_edges = cross_ok;
    if (!cross_ok) fail("two deleted components share an edge");
    audit.sent = Rational(sent_total);
    audit.received = Rational(received_total);
    audit.totals_equal = sent_total == received_total;
    if (!audit.totals_equal) fail("sent and received totals differ");
    audit.max_received_avg = max_avg;
    audit.received_bound_ok = avg_ok;
    if (!avg_ok) fail("a component received alpha + 2h or more per vertex");
    audit.components_are_trees = !forest_mode || trees_ok;
    if (forest_mode && !trees_ok) fail("forest mode deleted a component with a cycle");

    // mean-degree decrement against density loss, exact
    audit.decrement_lhs = make_rational(2 * rec.removed_edges, g.n);
    audit.decrement_rhs = bound * make_rational(rec.removed_vertices, g.n);
    audit.decrement_ok = rec.removed_vertices > 0 ? audit.decrement_lhs < audit.decrement_rhs
                                                  : audit.decrement_lhs == 0;
    if (!audit.decrement_ok) fail("mean-degree decrement exceeds the density bound");
    if (2 * rec.removed_edges != sent_total) fail("edge count and degree loss disagree");

    if (!rec.removed.empty()) ++report.sweeps_with_removals;
    report.sweeps.push_back(std::move(audit));
  }
  return report;
}

}  // namespace percolab

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/json_io.hpp"
#include "dpres/lbgen.hpp"
#include "dpres/path.hpp"
#include "dpres/shortest_paths.hpp"

namespace dpres {

enum class AugKind { kHopset, kShortcut };

// A set of extra edges laid over a host graph. Hopset edges must carry the
// host's exact distance as weight; shortcut edges must connect pairs in the
// transitive closure (they are unit weight by convention).
struct AugmentationSet {
  std::vector<Edge> edges;
  AugKind kind = AugKind::kHopset;
};

inline void validate_augmentation(const Graph& g, const AugmentationSet& aug) {
  std::map<NodeId, std::vector<Dist>> dist;  // per distinct tail
  for (const Edge& e : aug.edges) {
    if (e.tail >= g.node_count() || e.head >= g.node_count())
      throw ArgumentError("augmentation edge endpoint out of range");
    auto it = dist.find(e.tail);
    if (it == dist.end()) it = dist.emplace(e.tail, dijkstra(g, e.tail)).first;
    const Dist& d = it->second[e.head];
    if (!d)
      throw VerifyError("augmentation edge (" + std::to_string(e.tail) + "," +
                        std::to_string(e.head) + ") joins an unreachable pair");
    if (aug.kind == AugKind::kHopset && e.weight != *d)
      throw VerifyError("hopset edge (" + std::to_string(e.tail) + "," +
                        std::to_string(e.head) + ") carries weight " +
                        e.weight.str() + ", distance is " + d->str());
  }
}

// G with the augmentation overlaid; parallel edges collapse to the lighter
// weight (shortest paths are indifferent to the heavier copy).
inline Graph augmented_graph(const Graph& g, const AugmentationSet& aug) {
  std::vector<Edge> es(g.edges().begin(), g.edges().end());
  auto key = [&](NodeId u, NodeId v) {
    if (!g.directed() && u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  };
  std::unordered_map<std::uint64_t, std::size_t> pos;
  pos.reserve(es.size() + aug.edges.size());
  for (std::size_t i = 0; i < es.size(); ++i)
    pos.emplace(key(es[i].tail, es[i].head), i);
  for (const Edge& e : aug.edges) {
    auto [it, fresh] = pos.try_emplace(key(e.tail, e.head), es.size());
    if (fresh)
      es.push_back(e);
    else if (e.weight < es[it->second].weight)
      es[it->second].weight = e.weight;
  }
  Graph out(g.node_count(), g.directed());
  for (const Edge& e : es) out.add_edge(e.tail, e.head, e.weight);
  return out;
}

// The folklore construction: sample nodes, connect every ordered reachable
// sampled pair by an edge of its exact distance.
inline AugmentationSet folklore_hopset(const Graph& g, std::size_t sample_size,
                                       std::uint64_t seed) {
  if (sample_size > g.node_count())
    throw ArgumentError("sample size exceeds the node count");
  Rng rng(seed);
  const auto sample = rng.sample_without_replacement(g.node_count(), sample_size);
  AugmentationSet aug;
  aug.kind = AugKind::kHopset;
  for (std::uint64_t u : sample) {
    const auto dist = dijkstra(g, static_cast<NodeId>(u));
    for (std::uint64_t v : sample)
      if (v != u && dist[v])
        aug.edges.push_back(Edge{static_cast<NodeId>(u),
                                 static_cast<NodeId>(v), *dist[v]});
  }
  return aug;
}

// E_Delta: one edge per pair at most delta apart — layer distance when
// `layered` (requires a total layer map and edges that advance exactly one
// layer, so BFS depth equals layer gap), hop distance otherwise. The
// shortcut family gets unit edges; every other family gets exact-distance
// (hopset) edges — in particular the unweighted-hopset family, whose
// potential argument is about exact shortest paths, so its E_Delta must not
// shorten the metric.
inline AugmentationSet e_delta(const LowerBoundInstance& inst,
                               std::uint64_t delta, bool layered) {
  const Graph& g = inst.graph;
  AugmentationSet aug;
  aug.kind = inst.family == Family::kShortcutLayered ? AugKind::kShortcut
                                                     : AugKind::kHopset;
  if (delta == 0) return aug;

  if (layered) {
    if (inst.layer.size() != g.node_count())
      throw ArgumentError("layered E_Delta needs a layer map");
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (inst.layer[v] < 0)
        throw ArgumentError("layered E_Delta needs every node layered");
    for (const Edge& e : g.edges())
      if (inst.layer[e.head] != inst.layer[e.tail] + 1)
        throw ArgumentError(
            "layered E_Delta requires edges that advance exactly one layer");
  }

  const bool unit = aug.kind == AugKind::kShortcut;
  // In the unweighted-hopset family BFS depth doubles as exact distance, so
  // hop-capped BFS yields both the pair set and the edge weights.
  const bool unit_metric = inst.family == Family::kUnweightedHopset;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (unit || unit_metric) {
      const auto hops = bfs_hops(g, u, /*depth_cap=*/delta);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v == u || !hops[v]) continue;
        if (!g.directed() && v < u) continue;  // one edge per unordered pair
        aug.edges.push_back(Edge{u, v, unit ? Weight(1) : Weight(*hops[v])});
      }
    } else {
      const auto dist = dijkstra(g, u);
      const auto hops = layered
                            ? std::vector<std::optional<std::uint32_t>>()
                            : bfs_hops(g, u, delta);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v == u || !dist[v]) continue;
        if (layered) {
          const std::int64_t gap = inst.layer[v] - inst.layer[u];
          if (gap < 1 || gap > static_cast<std::int64_t>(delta)) continue;
        } else if (!hops[v]) {
          continue;
        }
        aug.edges.push_back(Edge{u, v, *dist[v]});
      }
    }
  }
  return aug;
}

// ---------------------------------------------------------------------------
// Hopbound measurement
// ---------------------------------------------------------------------------

struct HopboundReport {
  std::size_t max_hops = 0;
  std::vector<std::tuple<NodeId, NodeId, std::size_t>> table;
};

// Max over pairs of the alpha-approximate hopdist on G with the augmentation
// overlaid. Pairs default to every ordered reachable pair.
inline HopboundReport measure_hopbound(const Graph& g,
                                       const AugmentationSet& aug,
                                       const Rational& alpha,
                                       const std::vector<DemandPair>* pairs =
                                           nullptr) {
  const Graph combined = augmented_graph(g, aug);
  HopboundReport rep;
  auto record = [&](NodeId u, NodeId v, std::size_t h) {
    rep.table.emplace_back(u, v, h);
    rep.max_hops = std::max(rep.max_hops, h);
  };
  if (alpha == 1) {
    // One lexicographic Dijkstra per source covers all its pairs.
    std::vector<std::vector<NodeId>> targets(g.node_count());
    if (pairs) {
      for (const DemandPair& d : *pairs) targets[d.source].push_back(d.target);
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (pairs && targets[u].empty()) continue;
      const DistHops r = min_hops_shortest(combined, u);
      if (pairs) {
        for (NodeId v : targets[u]) {
          if (!r.dist[v])
            throw ArgumentError("hopbound pair joins an unreachable pair");
          record(u, v, r.hops[v]);
        }
      } else {
        for (NodeId v = 0; v < g.node_count(); ++v)
          if (v != u && r.dist[v]) record(u, v, r.hops[v]);
      }
    }
    return rep;
  }
  auto one = [&](NodeId u, NodeId v) {
    const auto h = alpha_hopdist(combined, u, v, alpha);
    if (!h) throw ArgumentError("hopbound pair joins an unreachable pair");
    record(u, v, *h);
  };
  if (pairs) {
    for (const DemandPair& d : *pairs) one(d.source, d.target);
  } else {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto dist = dijkstra(g, u);
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (v != u && dist[v]) one(u, v);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Potential function
// ---------------------------------------------------------------------------

// Hopdist notion per family: alpha-approximate for the weighted families,
// plain BFS hops for the shortcut family (reachability is the claim there),
// and min hops over exact shortest paths for the unweighted-hopset family
// (its augmentations carry exact-distance weights, so shortest-path hops are
// the quantity the potential argument tracks).
inline std::uint64_t instance_hopdist(const LowerBoundInstance& inst,
                                      const Graph& combined, NodeId s, NodeId t,
                                      const Rational& alpha) {
  if (inst.family == Family::kShortcutLayered) {
    const auto hops = bfs_hops(combined, s);
    if (!hops[t]) throw VerifyError("critical endpoint became unreachable");
    return *hops[t];
  }
  if (inst.family == Family::kUnweightedHopset) {
    const DistHops r = min_hops_shortest(combined, s);
    if (!r.dist[t]) throw VerifyError("critical endpoint became unreachable");
    return r.hops[t];
  }
  const auto h = alpha_hopdist(combined, s, t, alpha);
  if (!h) throw VerifyError("critical endpoint became unreachable");
  return static_cast<std::uint64_t>(*h);
}

inline bool layered_family(Family f) {
  return f == Family::kApproxHopset || f == Family::kShortcutLayered;
}

struct PotentialReport {
  std::uint64_t phi = 0;        // sum of hopdists with the augmentation
  std::uint64_t phi_empty = 0;  // same with E_Delta only
  std::uint64_t delta = 0;
  std::size_t augment_edges = 0;
  std::size_t paths = 0;
  std::size_t worst_path = 0;  // index of a path attaining the max hopdist
  std::uint64_t worst_hopdist = 0;
  std::vector<std::uint64_t> per_path;
};

namespace detail {

// Sum of hopdists over the critical paths' endpoint pairs in `combined`,
// grouping per-source families so one sweep serves many paths.
inline std::vector<std::uint64_t> path_hopdists(const LowerBoundInstance& inst,
                                                const Graph& combined,
                                                const Rational& alpha) {
  const bool grouped = inst.family == Family::kShortcutLayered ||
                       inst.family == Family::kUnweightedHopset;
  std::vector<std::uint64_t> out(inst.critical_paths.size(), 0);
  if (grouped) {
    const bool shortest = inst.family == Family::kUnweightedHopset;
    std::map<NodeId, std::vector<std::size_t>> by_source;
    for (std::size_t i = 0; i < inst.critical_paths.size(); ++i)
      by_source[inst.critical_paths[i].source()].push_back(i);
    for (const auto& [s, idxs] : by_source) {
      DistHops sp;
      std::vector<std::optional<std::uint32_t>> hops;
      if (shortest)
        sp = min_hops_shortest(combined, s);
      else
        hops = bfs_hops(combined, s);
      for (std::size_t i : idxs) {
        const NodeId t = inst.critical_paths[i].target();
        const bool reach = shortest ? bool(sp.dist[t]) : bool(hops[t]);
        if (!reach) throw VerifyError("critical endpoint became unreachable");
        out[i] = shortest ? sp.hops[t] : *hops[t];
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < inst.critical_paths.size(); ++i) {
    const Path& p = inst.critical_paths[i];
    out[i] = instance_hopdist(inst, combined, p.source(), p.target(), alpha);
  }
  return out;
}

}  // namespace detail

// Phi(H) = sum over critical paths of the endpoint hopdist in
// G u E_Delta u H; Phi(empty) is reported alongside. The averaging bound
// (max >= Phi/|P|) is asserted on every report.
inline PotentialReport potential(const LowerBoundInstance& inst,
                                 std::uint64_t delta,
                                 const AugmentationSet& aug,
                                 const Rational& alpha) {
  if (inst.critical_paths.empty())
    throw ArgumentError("potential needs critical paths");
  PotentialReport rep;
  rep.delta = delta;
  rep.augment_edges = aug.edges.size();
  rep.paths = inst.critical_paths.size();

  const AugmentationSet base_aug =
      e_delta(inst, delta, layered_family(inst.family));
  const Graph combined0 = augmented_graph(inst.graph, base_aug);
  for (std::uint64_t h : detail::path_hopdists(inst, combined0, alpha))
    rep.phi_empty += h;

  AugmentationSet both = base_aug;
  both.edges.insert(both.edges.end(), aug.edges.begin(), aug.edges.end());
  const Graph combined = aug.edges.empty()
                             ? combined0
                             : augmented_graph(inst.graph, both);
  rep.per_path = detail::path_hopdists(inst, combined, alpha);
  for (std::size_t i = 0; i < rep.per_path.size(); ++i) {
    rep.phi += rep.per_path[i];
    if (rep.per_path[i] > rep.worst_hopdist) {
      rep.worst_hopdist = rep.per_path[i];
      rep.worst_path = i;
    }
  }
  if (rep.worst_hopdist * rep.paths < rep.phi)
    throw VerifyError("averaging bound violated: max hopdist below the mean");
  if (rep.phi > rep.phi_empty)
    throw VerifyError("augmentation increased the potential");
  return rep;
}

// ---------------------------------------------------------------------------
// Per-edge potential-drop audit
// ---------------------------------------------------------------------------

struct AuditConfig {
  std::uint64_t delta = 1;
  std::size_t per_gap_samples = 1000;   // stratified mode, per layer gap
  std::size_t exhaustive_cap = 300000;  // max pair count for exhaustive mode
  std::size_t cross_checks = 3;         // honest recomputations of fast drops
  std::size_t cross_check_node_cap = 6000;  // skip honest checks above this
  std::uint64_t seed = 0;
  Rational alpha = 1;  // hopdist parameter for the weighted families
};

struct AuditRow {
  NodeId tail = 0, head = 0;
  std::uint32_t gap = 0;  // layer gap (hop count along the path for strata)
  std::uint64_t drop = 0;
  Rational bound = 0;  // bound form value, constant factor excluded
};

struct AuditReport {
  std::uint64_t delta = 0;
  bool exhaustive = false;
  std::uint64_t phi_empty = 0;
  std::uint64_t max_drop = 0;
  Rational max_ratio = 0;  // max over rows of drop / bound
  std::size_t max_row = 0;
  std::size_t within_delta_rows = 0;
  std::size_t within_delta_nonzero = 0;  // must stay 0
  std::size_t cross_checks_done = 0;
  std::vector<AuditRow> rows;
};

namespace detail {

// Compressed adjacency for the BFS-heavy audit inner loops.
struct Csr {
  std::vector<std::size_t> offset;
  std::vector<NodeId> target;
};

inline Csr build_csr(const Graph& g, bool reverse) {
  Csr csr;
  csr.offset.assign(g.node_count() + 1, 0);
  for (const Edge& e : g.edges()) {
    ++csr.offset[(reverse ? e.head : e.tail) + 1];
    if (!g.directed()) ++csr.offset[(reverse ? e.tail : e.head) + 1];
  }
  for (std::size_t v = 0; v < g.node_count(); ++v)
    csr.offset[v + 1] += csr.offset[v];
  std::vector<std::size_t> fill = csr.offset;
  csr.target.resize(csr.offset.back());
  for (const Edge& e : g.edges()) {
    csr.target[fill[reverse ? e.head : e.tail]++] = reverse ? e.tail : e.head;
    if (!g.directed())
      csr.target[fill[reverse ? e.tail : e.head]++] = reverse ? e.head : e.tail;
  }
  return csr;
}

// Reusable reachability sweep: epoch stamps avoid clearing between runs.
struct Reach {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;
  std::vector<NodeId> queue;

  explicit Reach(std::size_t n) : stamp(n, 0) {}

  // Marks everything reachable from s; seen(v) answers membership until the
  // next run.
  void run(const Csr& csr, NodeId s) {
    ++epoch;
    queue.clear();
    queue.push_back(s);
    stamp[s] = epoch;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      for (std::size_t i = csr.offset[u]; i < csr.offset[u + 1]; ++i) {
        const NodeId v = csr.target[i];
        if (stamp[v] != epoch) {
          stamp[v] = epoch;
          queue.push_back(v);
        }
      }
    }
  }

  bool seen(NodeId v) const { return stamp[v] == epoch; }
};

inline std::uint64_t ceil_u64(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

}  // namespace detail

// For each candidate augmentation edge, Phi(empty) - Phi({edge}) against the
// family's drop-bound form: g/Delta + r^2/(g Delta) for the layered grid
// families (g = layer gap), the flat 2*sqrt(n)/c cap for the weighted grid.
// Candidates are exhaustive (all reachable pairs) when their count fits the
// cap, else stratified: per gap g, seeded samples of length-g subpaths of
// critical paths. Fast closed-form drops (exact, see the per-family notes
// inline) are spot-checked against honest recomputation on small instances.
inline AuditReport max_drop_audit(const LowerBoundInstance& inst,
                                  const AuditConfig& cfg = {}) {
  if (inst.critical_paths.empty())
    throw ArgumentError("audit needs critical paths");
  if (cfg.delta == 0 && inst.family != Family::kApproxHopset)
    throw ArgumentError("audit needs delta >= 1");

  AuditReport rep;
  rep.delta = cfg.delta;
  const Graph& g = inst.graph;
  Rng rng(cfg.seed);

  auto push_row = [&](AuditRow row) {
    rep.max_drop = std::max(rep.max_drop, row.drop);
    if (row.bound > 0) {
      const Rational ratio = Rational(row.drop) / row.bound;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.max_row = rep.rows.size();
      }
    } else if (row.drop > 0) {
      throw VerifyError("positive drop against a zero bound form");
    }
    if (row.gap <= cfg.delta) {
      ++rep.within_delta_rows;
      if (row.drop != 0) ++rep.within_delta_nonzero;
    }
    rep.rows.push_back(std::move(row));
  };

  // ---- weighted grid family: honest recomputation end to end -------------
  if (inst.family == Family::kApproxHopset || inst.family == Family::kPointLine) {
    if (inst.family == Family::kPointLine)
      throw ArgumentError("audit supports the layered grid families");
    const std::uint64_t sqrt_n = inst.meta.at("sqrt_n").get<std::uint64_t>();
    const std::uint64_t c = inst.meta.at("c").get<std::uint64_t>();
    const Rational bound_form = Rational(2 * sqrt_n, c);
    const AugmentationSet base_aug =
        e_delta(inst, cfg.delta, layered_family(inst.family));
    const Graph combined0 = augmented_graph(g, base_aug);
    const auto base = detail::path_hopdists(inst, combined0, cfg.alpha);
    for (std::uint64_t h : base) rep.phi_empty += h;

    rep.exhaustive = true;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto dist = dijkstra(g, u);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v == u || !dist[v]) continue;
        AugmentationSet one;
        one.kind = AugKind::kHopset;
        one.edges.push_back(Edge{u, v, *dist[v]});
        const Graph combined = augmented_graph(combined0, one);
        const auto now = detail::path_hopdists(inst, combined, cfg.alpha);
        std::uint64_t drop = 0;
        for (std::size_t i = 0; i < base.size(); ++i) {
          if (now[i] > base[i])
            throw VerifyError("adding an edge increased a hopdist");
          drop += base[i] - now[i];
        }
        AuditRow row;
        row.tail = u;
        row.head = v;
        const std::int64_t lu = inst.layer[u], lv = inst.layer[v];
        row.gap = static_cast<std::uint32_t>(lv > lu ? lv - lu : 0);
        row.drop = drop;
        row.bound = bound_form;
        push_row(std::move(row));
      }
    }
    rep.cross_checks_done = rep.rows.size();  // every drop was honest
    return rep;
  }

  const std::uint64_t r = inst.meta.at("r").get<std::uint64_t>();
  std::int64_t top_layer = 0;
  for (std::int64_t l : inst.layer) top_layer = std::max(top_layer, l);
  const std::uint64_t span = static_cast<std::uint64_t>(top_layer);
  auto bound_form = [&](std::uint64_t gap) {
    return Rational(gap, cfg.delta) + Rational(r * r, gap * cfg.delta);
  };

  const std::size_t paths = inst.critical_paths.size();
  std::vector<NodeId> starts(paths), ends(paths);
  for (std::size_t i = 0; i < paths; ++i) {
    starts[i] = inst.critical_paths[i].source();
    ends[i] = inst.critical_paths[i].target();
  }

  // Honest recomputation of one edge's drop, for spot checks. The trial edge
  // matches what the family's adversary may add: a unit shortcut for the
  // layered DAG, an exact-distance hopset edge for the undirected chains.
  Graph combined0(0, true);
  bool have_combined0 = false;
  std::vector<std::uint64_t> base_honest;
  auto ensure_combined0 = [&] {
    if (have_combined0) return;
    combined0 = augmented_graph(
        g, e_delta(inst, cfg.delta, layered_family(inst.family)));
    base_honest = detail::path_hopdists(inst, combined0, cfg.alpha);
    have_combined0 = true;
  };
  auto honest_drop = [&](NodeId u, NodeId v,
                         std::uint64_t dist) -> std::uint64_t {
    ensure_combined0();
    AugmentationSet one;
    one.kind = inst.family == Family::kShortcutLayered ? AugKind::kShortcut
                                                       : AugKind::kHopset;
    one.edges.push_back(
        Edge{u, v, one.kind == AugKind::kShortcut ? Weight(1) : Weight(dist)});
    const Graph combined = augmented_graph(combined0, one);
    const auto now = detail::path_hopdists(inst, combined, cfg.alpha);
    std::uint64_t drop = 0;
    for (std::size_t i = 0; i < now.size(); ++i)
      drop += base_honest[i] - now[i];
    return drop;
  };
  // Candidates carry (tail, head, gap, dist): `gap` is the bound-form length
  // (layer gap in the DAG, edge length in the chains — the two coincide where
  // both make sense) and `dist` the exact tail-to-head distance.
  std::vector<std::tuple<NodeId, NodeId, std::uint32_t, std::uint32_t>> cands;
  auto pick_checks = [&] {
    std::vector<std::size_t> check_at;
    if (cfg.cross_checks > 0 && !cands.empty() &&
        g.node_count() <= cfg.cross_check_node_cap) {
      for (std::size_t i = 0; i < cfg.cross_checks; ++i)
        check_at.push_back(rng.below(cands.size()));
      std::sort(check_at.begin(), check_at.end());
      check_at.erase(std::unique(check_at.begin(), check_at.end()),
                     check_at.end());
    }
    return check_at;
  };

  if (inst.family == Family::kShortcutLayered) {
    // Candidate pairs: exhaustive over reachable layered pairs when their
    // count fits the cap, else per-gap samples of critical-path sub-segments
    // (their endpoints are layered nodes gap layers apart). Every edge
    // advances one layer, so a pair's distance equals its layer gap.
    {
      const detail::Csr fwd = detail::build_csr(g, /*reverse=*/false);
      detail::Reach reach(g.node_count());
      bool fits = true;
      std::size_t count = 0;
      for (NodeId u = 0; u < g.node_count() && fits; ++u) {
        if (inst.layer[u] < 0) continue;
        reach.run(fwd, u);
        for (NodeId v : reach.queue) {
          if (inst.layer[v] <= inst.layer[u]) continue;
          if (++count > cfg.exhaustive_cap) {
            fits = false;
            break;
          }
          const auto gap =
              static_cast<std::uint32_t>(inst.layer[v] - inst.layer[u]);
          cands.emplace_back(u, v, gap, gap);
        }
      }
      rep.exhaustive = fits;
      if (!fits) {
        cands.clear();
        // Important-node sequence per path (drops chain midpoints).
        auto importants = [&](const Path& p) {
          std::vector<NodeId> seq;
          for (NodeId v : p.nodes())
            if (inst.layer[v] >= 0) seq.push_back(v);
          return seq;
        };
        for (std::uint32_t gap = 1; gap <= span; ++gap) {
          for (std::size_t s = 0; s < cfg.per_gap_samples; ++s) {
            const Path& p = inst.critical_paths[rng.below(
                inst.critical_paths.size())];
            const auto seq = importants(p);
            if (seq.size() != span + 1)
              throw VerifyError("critical path misses a layer");
            const std::size_t i = rng.below(seq.size() - gap);
            cands.emplace_back(seq[i], seq[i + gap], gap, gap);
          }
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
      }
    }
    const std::vector<std::size_t> check_at = pick_checks();
    // Exact drop in closed form. In the layered grid every edge advances one
    // layer, so in G u E_Delta every hop advances at most Delta layers and
    // endpoint pairs sit exactly span layers apart: hopdist = ceil(span /
    // Delta), achieved along the path. An added edge (u,v) helps the pair
    // (s,t) iff u is reachable from s and t from v, in which case the best
    // route through it costs ceil(layer(u)/Delta) + 1 + ceil((span -
    // layer(v))/Delta) hops (the same stride argument on both sides).
    rep.phi_empty = paths * detail::ceil_u64(span, cfg.delta);
    const detail::Csr fwd = detail::build_csr(g, false);
    const detail::Csr rev = detail::build_csr(g, true);
    detail::Reach back(g.node_count()), fore(g.node_count());
    const std::uint64_t base_pair = detail::ceil_u64(span, cfg.delta);
    for (const auto& [u, v, gap, dist] : cands) {
      (void)dist;  // equals gap here
      const std::uint64_t lu = static_cast<std::uint64_t>(inst.layer[u]);
      const std::uint64_t lv = static_cast<std::uint64_t>(inst.layer[v]);
      const std::uint64_t via = detail::ceil_u64(lu, cfg.delta) + 1 +
                                detail::ceil_u64(span - lv, cfg.delta);
      const std::uint64_t per_pair = via < base_pair ? base_pair - via : 0;
      std::uint64_t drop = 0;
      if (per_pair > 0) {
        back.run(rev, u);
        fore.run(fwd, v);
        std::uint64_t affected = 0;
        for (std::size_t i = 0; i < paths; ++i)
          if (back.seen(starts[i]) && fore.seen(ends[i])) ++affected;
        drop = affected * per_pair;
      }
      AuditRow row;
      row.tail = u;
      row.head = v;
      row.gap = gap;
      row.drop = drop;
      row.bound = bound_form(gap);
      push_row(std::move(row));
    }
    for (std::size_t idx : check_at) {
      const auto& [u, v, gap, dist] = cands[idx];
      if (honest_drop(u, v, dist) != rep.rows[idx].drop)
        throw VerifyError("closed-form drop disagrees with recomputation");
      ++rep.cross_checks_done;
    }
    return rep;
  }

  if (inst.family != Family::kUnweightedHopset)
    throw ArgumentError("audit supports the layered grid families");

  // Undirected chain family. The audited quantity is hops over exact
  // shortest paths and the adversary's edge (u,v) carries weight d(u,v), so
  // adding it never changes distances; it only re-routes hop counts along
  // routes that stay shortest. Hence the exact one-edge identity
  //   hop'(s,t) = min(hop(s,t),
  //                   hop(s,u)+1+hop(v,t)  if d(s,u)+d(u,v)+d(v,t) = d(s,t),
  //                   hop(s,v)+1+hop(u,t)  if d(s,v)+d(u,v)+d(u,t) = d(s,t)),
  // with every term measured on G u E_Delta (one shortest-hops sweep per
  // distinct path endpoint; the graph is undirected so target sweeps reuse
  // the same routine).
  ensure_combined0();
  for (std::uint64_t h : base_honest) rep.phi_empty += h;

  // Candidates: exhaustive over unordered reachable pairs when they fit the
  // cap, else per-length samples of critical-path sub-segments (a length-g
  // window of a shortest path is itself shortest, so its distance is g).
  {
    bool fits = true;
    std::size_t count = 0;
    for (NodeId u = 0; u < g.node_count() && fits; ++u) {
      const auto hops = bfs_hops(g, u);
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        if (!hops[v]) continue;
        if (++count > cfg.exhaustive_cap) {
          fits = false;
          break;
        }
        cands.emplace_back(u, v, *hops[v], *hops[v]);
      }
    }
    rep.exhaustive = fits;
    if (!fits) {
      cands.clear();
      std::vector<std::pair<std::size_t, std::size_t>> by_len;  // (len, path)
      std::size_t max_g = 0;
      for (std::size_t i = 0; i < paths; ++i) {
        const std::size_t len = inst.critical_paths[i].nodes().size() - 1;
        by_len.emplace_back(len, i);
        max_g = std::max(max_g, len);
      }
      std::sort(by_len.begin(), by_len.end(),
                std::greater<std::pair<std::size_t, std::size_t>>());
      for (std::uint32_t gap = 1; gap <= max_g; ++gap) {
        // Paths long enough for a length-gap window sit in a prefix.
        std::size_t eligible = by_len.size();
        while (eligible > 0 && by_len[eligible - 1].first < gap) --eligible;
        if (eligible == 0) continue;
        for (std::size_t s = 0; s < cfg.per_gap_samples; ++s) {
          const auto& [len, pi] = by_len[rng.below(eligible)];
          const auto& nodes = inst.critical_paths[pi].nodes();
          const std::size_t i = rng.below(len - gap + 1);
          cands.emplace_back(nodes[i], nodes[i + gap], gap, gap);
        }
      }
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    }
  }
  const std::vector<std::size_t> check_at = pick_checks();

  constexpr std::uint16_t kFarH = 0xFFFF;   // unreachable (hops)
  constexpr std::uint32_t kFarD = UINT32_MAX;  // unreachable (distance)
  struct PackedSweep {
    std::vector<std::uint32_t> dist;
    std::vector<std::uint16_t> hops;
  };
  std::map<NodeId, PackedSweep> sweep_from;
  auto sweep_of = [&](NodeId s) -> const PackedSweep& {
    auto it = sweep_from.find(s);
    if (it == sweep_from.end()) {
      const DistHops raw = min_hops_shortest(combined0, s);
      PackedSweep packed;
      packed.dist.assign(raw.dist.size(), kFarD);
      packed.hops.assign(raw.dist.size(), kFarH);
      for (std::size_t v = 0; v < raw.dist.size(); ++v) {
        if (!raw.dist[v]) continue;
        if (*raw.dist[v] >= kFarD) throw VerifyError("distance overflows");
        if (raw.hops[v] >= kFarH) throw VerifyError("hop count overflows");
        packed.dist[v] = static_cast<std::uint32_t>(*raw.dist[v]);
        packed.hops[v] = static_cast<std::uint16_t>(raw.hops[v]);
      }
      it = sweep_from.emplace(s, std::move(packed)).first;
    }
    return it->second;
  };
  std::vector<const PackedSweep*> from_s(paths), from_t(paths);
  for (std::size_t i = 0; i < paths; ++i) from_s[i] = &sweep_of(starts[i]);
  for (std::size_t i = 0; i < paths; ++i) from_t[i] = &sweep_of(ends[i]);

  for (const auto& [u, v, gap, dist] : cands) {
    std::uint64_t drop = 0;
    for (std::size_t i = 0; i < paths; ++i) {
      const PackedSweep& fs = *from_s[i];
      const PackedSweep& ft = *from_t[i];
      const std::uint32_t d_st = fs.dist[ends[i]];
      std::uint64_t via = UINT64_MAX;
      if (fs.dist[u] != kFarD && ft.dist[v] != kFarD &&
          std::uint64_t(fs.dist[u]) + dist + ft.dist[v] == d_st)
        via = std::uint64_t(fs.hops[u]) + 1 + ft.hops[v];
      if (fs.dist[v] != kFarD && ft.dist[u] != kFarD &&
          std::uint64_t(fs.dist[v]) + dist + ft.dist[u] == d_st)
        via = std::min(via, std::uint64_t(fs.hops[v]) + 1 + ft.hops[u]);
      if (via < base_honest[i]) drop += base_honest[i] - via;
    }
    AuditRow row;
    row.tail = u;
    row.head = v;
    row.gap = gap;
    row.drop = drop;
    row.bound = bound_form(gap);
    push_row(std::move(row));
  }
  for (std::size_t idx : check_at) {
    const auto& [u, v, gap, dist] = cands[idx];
    if (honest_drop(u, v, dist) != rep.rows[idx].drop)
      throw VerifyError("metric-identity drop disagrees with recomputation");
    ++rep.cross_checks_done;
  }
  return rep;
}

// The strongest cheap adversary: repeatedly add the candidate edge with the
// largest current Phi-drop (honest recomputation throughout; meant for small
// instances and short candidate lists).
inline AugmentationSet greedy_by_drop(
    const LowerBoundInstance& inst, std::uint64_t delta, const Rational& alpha,
    std::vector<Edge> candidates, std::size_t budget,
    std::vector<std::uint64_t>* phi_trace = nullptr) {
  AugmentationSet aug;
  aug.kind = inst.family == Family::kShortcutLayered ? AugKind::kShortcut
                                                     : AugKind::kHopset;
  std::uint64_t phi = potential(inst, delta, aug, alpha).phi;
  if (phi_trace) phi_trace->push_back(phi);
  while (aug.edges.size() < budget && !candidates.empty()) {
    std::size_t best = candidates.size();
    std::uint64_t best_phi = phi;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      AugmentationSet trial = aug;
      trial.edges.push_back(candidates[i]);
      const std::uint64_t p = potential(inst, delta, trial, alpha).phi;
      if (p < best_phi) {
        best_phi = p;
        best = i;
      }
    }
    if (best == candidates.size()) break;  // nothing drops any more
    aug.edges.push_back(candidates[best]);
    candidates.erase(candidates.begin() + best);
    phi = best_phi;
    if (phi_trace) phi_trace->push_back(phi);
  }
  return aug;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline Json augmentation_to_json(const AugmentationSet& aug) {
  Json edges = Json::array();
  for (const Edge& e : aug.edges)
    edges.push_back(Json::array({e.tail, e.head, e.weight.str()}));
  return Json{{"kind", aug.kind == AugKind::kHopset ? "hopset" : "shortcut"},
              {"edges", std::move(edges)}};
}

inline AugmentationSet augmentation_from_json(const Json& j) {
  AugmentationSet aug;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "hopset")
    aug.kind = AugKind::kHopset;
  else if (kind == "shortcut")
    aug.kind = AugKind::kShortcut;
  else
    throw ArgumentError("unknown augmentation kind '" + kind + "'");
  for (const Json& e : j.at("edges"))
    aug.edges.push_back(Edge{e.at(0).get<NodeId>(), e.at(1).get<NodeId>(),
                             weight_from_json(e.at(2))});
  return aug;
}

inline Json hopbound_report_to_json(const HopboundReport& rep) {
  Json rows = Json::array();
  for (const auto& [u, v, h] : rep.table)
    rows.push_back(Json::array({u, v, h}));
  return Json{{"max_hops", rep.max_hops},
              {"pairs", rep.table.size()},
              {"table", std::move(rows)}};
}

inline Json potential_report_to_json(const PotentialReport& rep) {
  return Json{{"phi", rep.phi},
              {"phi_empty", rep.phi_empty},
              {"delta", rep.delta},
              {"augment_edges", rep.augment_edges},
              {"paths", rep.paths},
              {"worst_path", rep.worst_path},
              {"worst_hopdist", rep.worst_hopdist}};
}

inline Json audit_report_to_json(const AuditReport& rep) {
  Json rows = Json::array();
  for (const AuditRow& r : rep.rows)
    rows.push_back(Json::array(
        {r.tail, r.head, r.gap, r.drop, rational_to_string(r.bound)}));
  return Json{{"delta", rep.delta},
              {"exhaustive", rep.exhaustive},
              {"phi_empty", rep.phi_empty},
              {"max_drop", rep.max_drop},
              {"max_ratio", rational_to_string(rep.max_ratio)},
              {"candidates", rep.rows.size()},
              {"within_delta_rows", rep.within_delta_rows},
              {"within_delta_nonzero", rep.within_delta_nonzero},
              {"cross_checks", rep.cross_checks_done},
              {"rows", std::move(rows)}};
}

}  // namespace dpres

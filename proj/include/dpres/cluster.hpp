#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/path.hpp"
#include "dpres/shortest_paths.hpp"
#include "dpres/stats.hpp"

namespace dpres {

// Calibration knobs for the dense-cluster extraction. The procedure is only
// specified up to constant factors; these defaults are the ones the desk-
// scale tests were calibrated with.
struct ClusterConfig {
  Rational c1 = 1;   // path-intersection edge pruning threshold factor
  Rational c2 = 16;  // closeness (roundtrip distance) threshold factor
};

// A dense low-diameter node cluster: all nodes lie on the pivot path, each
// meets the reported out-degree floor, and the weak diameter is measured in
// the host graph (nullopt when some ordered pair is unreachable).
struct ClusterResult {
  std::vector<NodeId> nodes;                 // the set S, sorted
  std::vector<std::size_t> witness_demands;  // system paths meeting S
  std::optional<Weight> weak_diameter;
  Path pivot;
  std::size_t pivot_index = 0;  // index in the input system
  std::size_t degree_floor = 0;
};

// Extracts a dense low-diameter cluster from an unweighted directed instance
// by the constructive argument: count branching events at high-out-degree
// nodes, attribute each event to the first pair of paths through its two
// edges, prune the resulting path-intersection graph down to its dense core,
// and harvest the surviving pivot's close node pairs. Returns nullopt (=not
// found) below the density gate or when pruning leaves nothing — the
// guarantee only holds above the gate, and only up to the configured
// constants.
inline std::optional<ClusterResult> find_dense_cluster(
    const Graph& g, const PathSystem& sys, const ClusterConfig& cfg = {}) {
  if (!g.directed())
    throw ArgumentError("find_dense_cluster requires a directed graph");
  if (!g.unit_weights())
    throw ArgumentError("find_dense_cluster requires unit weights");
  const std::size_t n = g.node_count();
  const std::size_t p = sys.size();
  if (n == 0 || p == 0) return std::nullopt;

  const PreserverStats stats = compute_stats(g, sys);
  const Weight d = stats.avg_degree;
  // Density gate d >= 10 p / sqrt(n), squared to stay in integers.
  if (d * d * n < Weight(100) * p * p) return std::nullopt;

  std::vector<bool> high(n, false);
  for (NodeId v = 0; v < n; ++v) high[v] = Weight(4) * g.out_degree(v) >= d;

  // First path through each edge claims it; events between unclaimed edges
  // are dropped (they have no paths to charge).
  std::vector<std::size_t> owner(g.edge_count(), p);
  for (std::size_t i = 0; i < p; ++i) {
    const auto& nodes = sys.paths[i].nodes();
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      EdgeId e = *g.find_edge(nodes[k], nodes[k + 1]);
      if (owner[e] == p) owner[e] = i;
    }
  }

  // Path-intersection graph: an edge {a,b} carries the branching events
  // attributed to paths a and b; its weight is the event count. `events`
  // remembers the shared nodes so close pairs can be formed later.
  auto pack = [](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::unordered_map<std::uint64_t, std::vector<NodeId>> events;
  for (NodeId x = 0; x < n; ++x) {
    if (!high[x]) continue;
    const auto& out = g.out_edges(x);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (owner[out[i]] == p) continue;
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        if (owner[out[j]] == p) continue;
        if (owner[out[i]] == owner[out[j]]) continue;  // same path can't branch
        events[pack(owner[out[i]], owner[out[j]])].push_back(x);
      }
    }
  }

  // High-degree nodes per path, for the node-pruning threshold.
  std::vector<Weight> s_pi(p, 0);
  for (std::size_t i = 0; i < p; ++i) {
    Weight c = 0;
    for (NodeId v : sys.paths[i].nodes())
      if (high[v]) ++c;
    s_pi[i] = c;
  }

  // Prune light edges once: keep {a,b} iff weight > c1 * n * d^2 / (4 p^2).
  const Weight p2 = Weight(p) * p;
  std::unordered_map<std::uint64_t, Weight> alive;  // surviving edge weights
  for (const auto& [key, xs] : events) {
    const Weight w = xs.size();
    if (w * 4 * p2 * denominator(cfg.c1) > numerator(cfg.c1) * n * d * d)
      alive.emplace(key, w);
  }

  std::vector<std::vector<std::size_t>> adj(p);
  for (const auto& [key, w] : alive) {
    const auto a = static_cast<std::size_t>(key >> 32);
    const auto b = static_cast<std::size_t>(key & 0xffffffffu);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<Weight> incident(p, 0);
  for (const auto& [key, w] : alive) {
    incident[key >> 32] += w;
    incident[key & 0xffffffffu] += w;
  }

  // Prune low-incident-weight paths to fixpoint; removals cascade.
  std::vector<bool> dead(p, false);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < p; ++i) queue.push_back(i);
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    if (dead[i]) continue;
    if (Weight(16) * incident[i] > s_pi[i] * d) continue;
    dead[i] = true;
    for (std::size_t j : adj[i]) {
      if (dead[j]) continue;
      auto it = alive.find(pack(i, j));
      if (it == alive.end()) continue;
      incident[j] -= it->second;
      queue.push_back(j);
    }
  }

  std::size_t pivot = p;
  for (std::size_t i = 0; i < p; ++i) {
    if (dead[i]) continue;
    if (pivot == p || incident[i] > incident[pivot]) pivot = i;
  }
  if (pivot == p) return std::nullopt;

  // Order shared event nodes along the pivot.
  std::unordered_map<NodeId, std::size_t> pivot_pos;
  {
    const auto& pn = sys.paths[pivot].nodes();
    for (std::size_t k = 0; k < pn.size(); ++k) pivot_pos.emplace(pn[k], k);
  }

  // Candidate close pairs: consecutive event nodes per surviving neighbor.
  std::vector<std::pair<NodeId, NodeId>> candidates;
  for (std::size_t j : adj[pivot]) {
    if (dead[j] || !alive.count(pack(pivot, j))) continue;
    std::vector<NodeId> xs = events.at(pack(pivot, j));
    std::sort(xs.begin(), xs.end(), [&](NodeId a, NodeId b) {
      return pivot_pos.at(a) < pivot_pos.at(b);
    });
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); ++k)
      candidates.emplace_back(xs[k], xs[k + 1]);
  }
  if (candidates.empty()) return std::nullopt;

  // Keep pairs whose roundtrip distance clears the closeness threshold:
  // dist(x,y) + dist(y,x) <= c2 * ell_hat * p^2 / (n d^2), cross-multiplied.
  std::unordered_map<NodeId, std::vector<Dist>> dist_from;
  for (const auto& [x, y] : candidates) {
    for (NodeId v : {x, y}) {
      if (dist_from.count(v)) continue;
      auto hops = bfs_hops(g, v);
      std::vector<Dist> dd(n);
      for (NodeId u = 0; u < n; ++u)
        if (hops[u]) dd[u] = Weight(*hops[u]);
      dist_from.emplace(v, std::move(dd));
    }
  }
  const Weight close_lhs_scale =
      n * d * d * denominator(stats.ell_hat) * denominator(cfg.c2);
  const Weight close_rhs =
      numerator(cfg.c2) * numerator(stats.ell_hat) * p2;
  std::unordered_map<NodeId, std::unordered_set<NodeId>> partners;
  for (const auto& [x, y] : candidates) {
    const Dist& fwd = dist_from.at(x)[y];
    const Dist& back = dist_from.at(y)[x];
    if (!fwd || !back) continue;
    if ((*fwd + *back) * close_lhs_scale > close_rhs) continue;
    partners[x].insert(y);
    partners[y].insert(x);
  }
  if (partners.empty()) return std::nullopt;

  NodeId hub = kInvalidNode;
  for (const auto& [v, set] : partners)
    if (hub == kInvalidNode || set.size() > partners.at(hub).size() ||
        (set.size() == partners.at(hub).size() && v < hub))
      hub = v;

  ClusterResult r;
  r.nodes.assign(partners.at(hub).begin(), partners.at(hub).end());
  r.nodes.push_back(hub);
  std::sort(r.nodes.begin(), r.nodes.end());
  r.pivot = sys.paths[pivot];
  r.pivot_index = pivot;

  std::unordered_set<NodeId> in_s(r.nodes.begin(), r.nodes.end());
  for (std::size_t i = 0; i < p; ++i) {
    for (NodeId v : sys.paths[i].nodes()) {
      if (in_s.count(v)) {
        r.witness_demands.push_back(i);
        break;
      }
    }
  }

  r.degree_floor = g.out_degree(r.nodes.front());
  for (NodeId v : r.nodes)
    r.degree_floor = std::min(r.degree_floor, g.out_degree(v));

  bool all_reachable = true;
  Weight diam = 0;
  for (NodeId s : r.nodes) {
    auto hops = bfs_hops(g, s);
    for (NodeId t : r.nodes) {
      if (s == t) continue;
      if (!hops[t]) {
        all_reachable = false;
        break;
      }
      diam = std::max(diam, Weight(*hops[t]));
    }
    if (!all_reachable) break;
  }
  if (all_reachable) r.weak_diameter = diam;
  return r;
}

}  // namespace dpres

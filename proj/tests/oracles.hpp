// Shared test oracles: independent re-implementations used to cross-check
// the library. Everything here favors obviousness over speed — Floyd-
// Warshall instead of Dijkstra, exhaustive path enumeration instead of
// counting DPs — so a bug in the library cannot hide in its mirror.
#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/path.hpp"
#include "dpres/types.hpp"

namespace oracles {

using dpres::Dist;
using dpres::Graph;
using dpres::NodeId;
using dpres::Rng;
using dpres::Weight;

// All-pairs distances by Floyd-Warshall (the library uses Dijkstra).
inline std::vector<std::vector<Dist>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<Dist>> d(n, std::vector<Dist>(n));
  for (NodeId v = 0; v < n; ++v) d[v][v] = Weight(0);
  for (const dpres::Edge& e : g.edges()) {
    auto relax = [&](NodeId u, NodeId v) {
      if (!d[u][v] || e.weight < *d[u][v]) d[u][v] = e.weight;
    };
    relax(e.tail, e.head);
    if (!g.directed()) relax(e.head, e.tail);
  }
  for (NodeId k = 0; k < n; ++k)
    for (NodeId i = 0; i < n; ++i) {
      if (!d[i][k]) continue;
      for (NodeId j = 0; j < n; ++j) {
        if (!d[k][j]) continue;
        const Weight via = *d[i][k] + *d[k][j];
        if (!d[i][j] || via < *d[i][j]) d[i][j] = via;
      }
    }
  return d;
}

// Every simple s->t path, by brute-force DFS. Only for tiny graphs.
inline void enumerate_paths_rec(const Graph& g, NodeId t,
                                std::vector<NodeId>& cur,
                                std::vector<bool>& used,
                                std::vector<std::vector<NodeId>>& out) {
  const NodeId u = cur.back();
  if (u == t) {
    out.push_back(cur);
    return;
  }
  auto step = [&](NodeId v) {
    if (used[v]) return;
    used[v] = true;
    cur.push_back(v);
    enumerate_paths_rec(g, t, cur, used, out);
    cur.pop_back();
    used[v] = false;
  };
  for (dpres::EdgeId e : g.out_edges(u)) step(g.other_end(e, u));
}

inline std::vector<std::vector<NodeId>> enumerate_paths(const Graph& g,
                                                        NodeId s, NodeId t) {
  std::vector<NodeId> cur{s};
  std::vector<bool> used(g.node_count(), false);
  used[s] = true;
  std::vector<std::vector<NodeId>> out;
  enumerate_paths_rec(g, t, cur, used, out);
  return out;
}

inline Weight path_weight(const Graph& g, const std::vector<NodeId>& nodes) {
  Weight w = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto e = g.find_edge(nodes[i], nodes[i + 1]);
    if (!e && !g.directed()) e = g.find_edge(nodes[i + 1], nodes[i]);
    w += g.edge(*e).weight;
  }
  return w;
}

// The minimum-weight s->t paths among all simple paths, lexicographically
// sorted — ground truth for the tiebroken path and uniqueness predicates.
inline std::vector<std::vector<NodeId>> min_weight_paths(const Graph& g,
                                                         NodeId s, NodeId t) {
  std::vector<std::vector<NodeId>> all = enumerate_paths(g, s, t);
  if (all.empty()) return all;
  Weight best = path_weight(g, all.front());
  for (const auto& p : all) best = std::min(best, path_weight(g, p));
  std::vector<std::vector<NodeId>> out;
  for (const auto& p : all)
    if (path_weight(g, p) == best) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

// Random graph with exactly m distinct directed edges (no self-loops),
// weights uniform in [1, max_w].
inline Graph random_graph(Rng& rng, std::size_t n, std::size_t m,
                          bool directed, std::uint64_t max_w) {
  Graph g(n, directed);
  std::size_t guard = 0;
  while (g.edge_count() < m) {
    if (++guard > 100 * m + 1000) break;  // dense corner: accept fewer
    const NodeId u = static_cast<NodeId>(rng.below(n));
    const NodeId v = static_cast<NodeId>(rng.below(n));
    if (u == v || g.find_edge(u, v)) continue;
    if (!directed && g.find_edge(v, u)) continue;
    g.add_edge(u, v, Weight(1 + rng.below(max_w)));
  }
  return g;
}

// Random DAG: edges only ascend a hidden random node order.
inline Graph random_dag(Rng& rng, std::size_t n, std::size_t m,
                        std::uint64_t max_w) {
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  Graph g(n, /*directed=*/true);
  std::size_t guard = 0;
  while (g.edge_count() < m) {
    if (++guard > 100 * m + 1000) break;
    const NodeId u = static_cast<NodeId>(rng.below(n));
    const NodeId v = static_cast<NodeId>(rng.below(n));
    if (u == v || pos[u] >= pos[v] || g.find_edge(u, v)) continue;
    g.add_edge(u, v, Weight(1 + rng.below(max_w)));
  }
  return g;
}

}  // namespace oracles

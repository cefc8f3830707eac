#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/path.hpp"

namespace dpres {

namespace detail {

// Visit (neighbor, edge weight) over arcs leaving v; undirected edges count
// in both directions.
template <typename F>
void for_arcs_out(const Graph& g, NodeId v, F&& f) {
  for (EdgeId e : g.out_edges(v)) {
    const Edge& ed = g.edge(e);
    if (g.directed()) {
      f(ed.head, ed.weight);
    } else {
      f(g.other_end(e, v), ed.weight);
    }
  }
}

// Arcs entering v (arcs leaving v in the transpose).
template <typename F>
void for_arcs_in(const Graph& g, NodeId v, F&& f) {
  for (EdgeId e : g.in_edges(v)) {
    const Edge& ed = g.edge(e);
    if (g.directed()) {
      f(ed.tail, ed.weight);
    } else {
      f(g.other_end(e, v), ed.weight);
    }
  }
}

}  // namespace detail

// Single-source exact shortest-path distances. Unreachable stays nullopt.
inline std::vector<Dist> dijkstra(const Graph& g, NodeId s,
                                  bool reverse = false) {
  if (s >= g.node_count()) throw ArgumentError("dijkstra: source out of range");
  std::vector<Dist> dist(g.node_count());
  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[s] = Weight(0);
  pq.emplace(Weight(0), s);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (!dist[u] || *dist[u] < d) continue;
    auto relax = [&](NodeId v, const Weight& w) {
      Weight nd = d + w;
      if (!dist[v] || nd < *dist[v]) {
        dist[v] = nd;
        pq.emplace(std::move(nd), v);
      }
    };
    if (reverse) {
      detail::for_arcs_in(g, u, relax);
    } else {
      detail::for_arcs_out(g, u, relax);
    }
  }
  return dist;
}

inline Dist shortest_distance(const Graph& g, NodeId s, NodeId t) {
  if (t >= g.node_count()) throw ArgumentError("target out of range");
  return dijkstra(g, s)[t];
}

inline std::vector<std::vector<Dist>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<Dist>> m(g.node_count());
  for (NodeId s = 0; s < g.node_count(); ++s) m[s] = dijkstra(g, s);
  return m;
}

// BFS hop counts; depth_cap limits the search radius (SIZE_MAX = none).
inline std::vector<std::optional<std::uint32_t>> bfs_hops(
    const Graph& g, NodeId s, std::size_t depth_cap = SIZE_MAX,
    bool reverse = false) {
  std::vector<std::optional<std::uint32_t>> hops(g.node_count());
  hops[s] = 0;
  std::deque<NodeId> q{s};
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    if (*hops[u] >= depth_cap) continue;
    auto step = [&](NodeId v, const Weight&) {
      if (!hops[v]) {
        hops[v] = *hops[u] + 1;
        q.push_back(v);
      }
    };
    if (reverse) {
      detail::for_arcs_in(g, u, step);
    } else {
      detail::for_arcs_out(g, u, step);
    }
  }
  return hops;
}

// Lexicographic Dijkstra on labels (weight, hops): for every target, the
// minimum hop count among exact shortest paths. Both components are additive
// and non-negative, so the lexicographic order is a valid Dijkstra semiring.
struct DistHops {
  std::vector<Dist> dist;
  std::vector<std::size_t> hops;  // meaningful where dist is engaged
};

inline DistHops min_hops_shortest(const Graph& g, NodeId s) {
  DistHops r;
  r.dist.resize(g.node_count());
  r.hops.assign(g.node_count(), 0);
  using Item = std::tuple<Weight, std::size_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  r.dist[s] = Weight(0);
  pq.emplace(Weight(0), 0, s);
  while (!pq.empty()) {
    auto [d, h, u] = pq.top();
    pq.pop();
    if (!r.dist[u] || *r.dist[u] < d || (*r.dist[u] == d && r.hops[u] < h))
      continue;
    detail::for_arcs_out(g, u, [&](NodeId v, const Weight& w) {
      Weight nd = d + w;
      std::size_t nh = h + 1;
      if (!r.dist[v] || nd < *r.dist[v] ||
          (nd == *r.dist[v] && nh < r.hops[v])) {
        r.dist[v] = nd;
        r.hops[v] = nh;
        pq.emplace(std::move(nd), nh, v);
      }
    });
  }
  return r;
}

// The deterministic tie-broken shortest path: minimum weight, then
// lexicographically least node sequence. The comparator is prefix-monotone,
// so the resulting path choice is consistent (shared subpaths agree) on
// graphs with strictly positive weights.
inline std::optional<Path> tiebroken_shortest_path(const Graph& g, NodeId s,
                                                   NodeId t) {
  if (s >= g.node_count() || t >= g.node_count())
    throw ArgumentError("endpoint out of range");
  if (s == t) return Path::of(g, {s});
  auto dist_s = dijkstra(g, s);
  if (!dist_s[t]) return std::nullopt;
  auto dist_t = dijkstra(g, t, /*reverse=*/true);
  const Weight total = *dist_s[t];
  std::vector<NodeId> nodes{s};
  std::vector<bool> on_path(g.node_count(), false);
  on_path[s] = true;
  NodeId cur = s;
  while (cur != t) {
    NodeId best = kInvalidNode;
    detail::for_arcs_out(g, cur, [&](NodeId v, const Weight& w) {
      if (!dist_t[v]) return;
      if (*dist_s[cur] + w + *dist_t[v] != total) return;
      if (v < best) best = v;
    });
    if (best == kInvalidNode || on_path[best])
      throw std::logic_error(
          "tiebroken_shortest_path: shortest-path DAG has a zero-weight "
          "cycle; tie-breaking requires positive weights");
    on_path[best] = true;
    nodes.push_back(best);
    cur = best;
  }
  return Path::of(g, std::move(nodes));
}

namespace detail {

// Count minimum-weight s->t paths by DP over the shortest-path DAG
// (edge (u,v) belongs iff dist(s,u) + w + dist(v,t) == dist(s,t)).
// Throws std::domain_error if zero-weight edges make that DAG cyclic.
inline Weight count_shortest_paths(const Graph& g, NodeId s, NodeId t,
                                   const std::vector<Dist>& dist_s,
                                   const std::vector<Dist>& dist_t) {
  const Weight total = *dist_s[t];
  auto relevant = [&](NodeId u) {
    return dist_s[u] && dist_t[u] && *dist_s[u] + *dist_t[u] == total;
  };
  // Arcs of the DAG, grouped by tail; undirected edges may appear in either
  // orientation (not both, unless a zero weight makes the DAG degenerate —
  // the cycle check below catches that).
  std::vector<std::vector<NodeId>> succ(g.node_count());
  std::vector<std::uint32_t> indeg(g.node_count(), 0);
  std::vector<NodeId> nodes;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (relevant(u)) nodes.push_back(u);
  auto try_arc = [&](NodeId u, NodeId v, const Weight& w) {
    if (!relevant(u) || !relevant(v)) return;
    if (*dist_s[u] + w == *dist_s[v] && *dist_t[v] + w == *dist_t[u]) {
      succ[u].push_back(v);
      ++indeg[v];
    }
  };
  for (const Edge& e : g.edges()) {
    try_arc(e.tail, e.head, e.weight);
    if (!g.directed()) try_arc(e.head, e.tail, e.weight);
  }
  // Kahn's algorithm both orders the DAG and detects cycles.
  std::deque<NodeId> q;
  for (NodeId u : nodes)
    if (indeg[u] == 0) q.push_back(u);
  std::vector<Weight> count(g.node_count(), Weight(0));
  count[s] = 1;
  std::size_t seen = 0;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    ++seen;
    for (NodeId v : succ[u]) {
      count[v] += count[u];
      if (--indeg[v] == 0) q.push_back(v);
    }
  }
  if (seen != nodes.size())
    throw std::domain_error(
        "count_shortest_paths: zero-weight cycle in the shortest-path DAG");
  return count[t];
}

}  // namespace detail

// True iff `path` is the one and only minimum-weight path between its
// endpoints in g. A path that is not even shortest yields false.
inline bool is_unique_shortest(const Graph& g, const Path& path) {
  const NodeId s = path.source(), t = path.target();
  if (s >= g.node_count() || t >= g.node_count())
    throw ArgumentError("path endpoints out of range");
  if (s == t) return true;  // the trivial path is the only simple s->s path
  auto dist_s = dijkstra(g, s);
  if (!dist_s[t]) throw ArgumentError("is_unique_shortest: target unreachable");
  if (path.weight() != *dist_s[t]) return false;
  auto dist_t = dijkstra(g, t, /*reverse=*/true);
  return detail::count_shortest_paths(g, s, t, dist_s, dist_t) == 1;
}

// Minimum weight over s->t routes with at most max_hops edges (Bellman-Ford
// rounds). nullopt when no such route exists.
inline Dist hop_bounded_distance(const Graph& g, NodeId s, NodeId t,
                                 std::size_t max_hops) {
  if (s >= g.node_count() || t >= g.node_count())
    throw ArgumentError("endpoint out of range");
  std::vector<Dist> cur(g.node_count());
  cur[s] = Weight(0);
  for (std::size_t round = 0; round < max_hops; ++round) {
    std::vector<Dist> next = cur;
    bool changed = false;
    auto relax = [&](NodeId u, NodeId v, const Weight& w) {
      if (!cur[u]) return;
      Weight nd = *cur[u] + w;
      if (!next[v] || nd < *next[v]) {
        next[v] = std::move(nd);
        changed = true;
      }
    };
    for (const Edge& e : g.edges()) {
      relax(e.tail, e.head, e.weight);
      if (!g.directed()) relax(e.head, e.tail, e.weight);
    }
    cur.swap(next);
    if (!changed) break;
  }
  return cur[t];
}

// Minimum hop count among s->t paths of weight <= alpha * dist(s, t).
// nullopt when t is unreachable. The Bellman-Ford sweep materializes, round
// by round, exactly the (weight, hops) Pareto frontier needed: after h
// rounds cur[v] is the least weight reachable within h hops. alpha == 1
// short-circuits to the lexicographic Dijkstra.
inline std::optional<std::size_t> alpha_hopdist(const Graph& g, NodeId s,
                                                NodeId t,
                                                const Rational& alpha) {
  if (alpha < 1) throw ArgumentError("alpha_hopdist: alpha must be >= 1");
  if (s >= g.node_count() || t >= g.node_count())
    throw ArgumentError("endpoint out of range");
  if (s == t) return 0;
  if (alpha == 1) {
    DistHops r = min_hops_shortest(g, s);
    if (!r.dist[t]) return std::nullopt;
    return r.hops[t];
  }
  auto dist = dijkstra(g, s);
  if (!dist[t]) return std::nullopt;
  const Weight budget = floor_rational(alpha * Rational(*dist[t]));
  std::vector<Dist> cur(g.node_count());
  cur[s] = Weight(0);
  for (std::size_t h = 1;; ++h) {
    std::vector<Dist> next = cur;
    auto relax = [&](NodeId u, NodeId v, const Weight& w) {
      if (!cur[u]) return;
      Weight nd = *cur[u] + w;
      if (!next[v] || nd < *next[v]) next[v] = std::move(nd);
    };
    for (const Edge& e : g.edges()) {
      relax(e.tail, e.head, e.weight);
      if (!g.directed()) relax(e.head, e.tail, e.weight);
    }
    cur.swap(next);
    if (cur[t] && *cur[t] <= budget) return h;
    // The true shortest path has <= n-1 hops and weight <= budget, so this
    // loop always exits; the guard is belt and braces.
    if (h > g.node_count())
      throw std::logic_error("alpha_hopdist failed to converge");
  }
}

enum class UniqueAlphaResult { kUnique, kNotUnique, kBudgetExhausted };

// Decides whether `path` is the one and only s->t path of weight
// <= alpha * dist(s, t), by exhaustive simple-path enumeration with
// lower-bound pruning (remaining distance to t). node_budget caps the number
// of DFS expansions; overrunning it reports kBudgetExhausted rather than
// guessing.
inline UniqueAlphaResult is_unique_alpha_approx(
    const Graph& g, const Path& path, const Rational& alpha,
    std::uint64_t node_budget = 1'000'000) {
  if (alpha < 1) throw ArgumentError("alpha must be >= 1");
  const NodeId s = path.source(), t = path.target();
  if (s == t) return UniqueAlphaResult::kUnique;
  auto dist_s = dijkstra(g, s);
  if (!dist_s[t])
    throw ArgumentError("is_unique_alpha_approx: target unreachable");
  auto dist_t = dijkstra(g, t, /*reverse=*/true);
  const Weight budget = floor_rational(alpha * Rational(*dist_s[t]));
  if (path.weight() > budget) return UniqueAlphaResult::kNotUnique;

  std::uint64_t expansions = 0;
  std::uint64_t found = 0;
  std::vector<bool> on_stack(g.node_count(), false);
  std::vector<NodeId> first_found;
  std::vector<NodeId> stack_nodes;
  bool exhausted = false;

  std::function<void(NodeId, const Weight&)> dfs = [&](NodeId u,
                                                       const Weight& w) {
    if (found >= 2 || exhausted) return;
    if (u == t) {
      ++found;
      if (found == 1) first_found = stack_nodes;
      return;
    }
    detail::for_arcs_out(g, u, [&](NodeId v, const Weight& ew) {
      if (found >= 2 || exhausted) return;
      if (on_stack[v]) return;
      if (++expansions > node_budget) {
        exhausted = true;
        return;
      }
      Weight nw = w + ew;
      if (!dist_t[v] || nw + *dist_t[v] > budget) return;  // cannot finish
      on_stack[v] = true;
      stack_nodes.push_back(v);
      dfs(v, nw);
      stack_nodes.pop_back();
      on_stack[v] = false;
    });
  };
  on_stack[s] = true;
  stack_nodes.push_back(s);
  dfs(s, Weight(0));

  if (found >= 2) return UniqueAlphaResult::kNotUnique;
  if (exhausted) return UniqueAlphaResult::kBudgetExhausted;
  // Exactly one in-budget path exists; `path` is in budget, so it is that
  // path. The direct comparison is a cheap internal consistency check.
  if (found == 1 && first_found != path.nodes())
    throw std::logic_error("enumeration found a single in-budget path that "
                           "differs from the candidate");
  return found == 1 ? UniqueAlphaResult::kUnique
                    : UniqueAlphaResult::kNotUnique;
}

// Nodes common to both paths, ascending by id.
inline std::vector<NodeId> path_intersection(const Path& a, const Path& b) {
  std::vector<NodeId> xa = a.nodes(), xb = b.nodes();
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  std::vector<NodeId> out;
  std::set_intersection(xa.begin(), xa.end(), xb.begin(), xb.end(),
                        std::back_inserter(out));
  return out;
}

// Number of branching events of a directed graph: unordered pairs of
// distinct edges sharing a tail, i.e. sum over nodes of C(outdeg, 2).
inline std::uint64_t count_branching_events(const Graph& g) {
  if (!g.directed())
    throw ArgumentError("branching events are defined for directed graphs");
  std::uint64_t total = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint64_t d = g.out_degree(v);
    total += d * (d - 1) / 2;
  }
  return total;
}

// Builds the system of tie-broken shortest paths for the given demands and
// computes both flags honestly. Unreachable demands are contract violations.
inline PathSystem make_tiebroken_system(const Graph& g,
                                        const std::vector<DemandPair>& demands) {
  PathSystem sys;
  sys.graph = &g;
  sys.pairs = demands;
  sys.all_unique_shortest = true;
  std::unordered_set<EdgeId> used_edges;
  sys.pairwise_edge_disjoint = true;
  for (const DemandPair& d : demands) {
    auto p = tiebroken_shortest_path(g, d.source, d.target);
    if (!p)
      throw ArgumentError("demand (" + std::to_string(d.source) + "," +
                          std::to_string(d.target) + ") is unreachable");
    if (sys.all_unique_shortest && !is_unique_shortest(g, *p))
      sys.all_unique_shortest = false;
    const auto& nodes = p->nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      auto e = g.find_edge(nodes[i], nodes[i + 1]);
      if (!used_edges.insert(*e).second) sys.pairwise_edge_disjoint = false;
    }
    sys.paths.push_back(std::move(*p));
  }
  return sys;
}

}  // namespace dpres

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dpres/cluster.hpp"
#include "dpres/graph.hpp"
#include "dpres/path.hpp"
#include "dpres/shortest_paths.hpp"
#include "dpres/stats.hpp"

namespace dpres {

namespace detail {

// Dijkstra that sees only the edges whose flag is set; used by the greedy
// deletion loop so candidate removals don't have to copy the graph.
inline std::vector<Dist> dijkstra_masked(const Graph& g, NodeId s,
                                         const std::vector<char>& alive) {
  std::vector<Dist> dist(g.node_count());
  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[s] = Weight(0);
  pq.emplace(Weight(0), s);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (!dist[u] || *dist[u] < d) continue;
    for (EdgeId e : g.out_edges(u)) {
      if (!alive[e]) continue;
      const Edge& ed = g.edge(e);
      const NodeId v = g.directed() ? ed.head : g.other_end(e, u);
      Weight nd = d + ed.weight;
      if (!dist[v] || nd < *dist[v]) {
        dist[v] = nd;
        pq.emplace(std::move(nd), v);
      }
    }
  }
  return dist;
}

// Union-with-dedupe; transpose flips each edge (for results computed on the
// transposed graph).
inline void add_missing_edges(Graph& dst, const Graph& src,
                              bool transpose = false) {
  for (const Edge& e : src.edges()) {
    const NodeId a = transpose ? e.head : e.tail;
    const NodeId b = transpose ? e.tail : e.head;
    if (!dst.find_edge(a, b)) dst.add_edge(a, b, e.weight);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instance cleaning
// ---------------------------------------------------------------------------

struct CleanResult {
  Graph graph;  // union of the surviving (possibly spliced) paths
  std::vector<DemandPair> demands;
  PathSystem system;

  CleanResult() { system.graph = &graph; }
  CleanResult(CleanResult&& o) noexcept
      : graph(std::move(o.graph)),
        demands(std::move(o.demands)),
        system(std::move(o.system)) {
    system.graph = &graph;
  }
  CleanResult& operator=(CleanResult&& o) noexcept {
    graph = std::move(o.graph);
    demands = std::move(o.demands);
    system = std::move(o.system);
    system.graph = &graph;
    return *this;
  }
  CleanResult(const CleanResult&) = delete;
  CleanResult& operator=(const CleanResult&) = delete;
};

// Prunes an instance to its dense core: drop any chosen path shorter than
// |E|/(4p), remove any node of degree below |E|/(4n) — splicing each
// surviving path across removed internal nodes with a replacement edge of
// weight equal to the removed segment (= the true distance, since subpaths
// of unique shortest paths are shortest) — and rebuild the graph as the
// union of what survives, until both floors hold. Node ids keep the host
// numbering; the node floor counts only nodes still on some path.
//
// Path and node removals are processed one at a time (lowest path index /
// lowest node id first) against the *current* edge count, so the floors are
// exact at the fixpoint rather than approximations of a batch round.
inline CleanResult clean_instance(const Graph& g,
                                  const std::vector<DemandPair>& demands) {
  if (!g.directed())
    throw ArgumentError("clean_instance requires a directed graph");

  struct Rec {
    std::vector<NodeId> nodes;
    std::vector<Weight> step;  // step[i] = weight of nodes[i] -> nodes[i+1]
  };
  std::vector<Rec> recs;
  for (const DemandPair& d : demands) {
    auto p = tiebroken_shortest_path(g, d.source, d.target);
    if (!p)
      throw ArgumentError("demand (" + std::to_string(d.source) + "," +
                          std::to_string(d.target) + ") is unreachable");
    if (!is_unique_shortest(g, *p))
      throw ArgumentError("clean_instance requires a unique-shortest system; "
                          "demand (" + std::to_string(d.source) + "," +
                          std::to_string(d.target) + ") has shortest-path ties");
    Rec r;
    r.nodes = p->nodes();
    for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i)
      r.step.push_back(g.edge(*g.find_edge(r.nodes[i], r.nodes[i + 1])).weight);
    recs.push_back(std::move(r));
  }

  const std::size_t n_host = g.node_count();
  // Rebuilds the union graph; equal parallel contributions collapse, a
  // weight disagreement would mean the uniqueness precondition was violated.
  auto rebuild = [&](const std::vector<Rec>& rs) {
    Graph u(n_host, /*directed=*/true);
    for (const Rec& r : rs)
      for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i) {
        auto e = u.find_edge(r.nodes[i], r.nodes[i + 1]);
        if (!e) {
          u.add_edge(r.nodes[i], r.nodes[i + 1], r.step[i]);
        } else if (u.edge(*e).weight != r.step[i]) {
          throw VerifyError("conflicting spliced weights on edge (" +
                            std::to_string(r.nodes[i]) + "," +
                            std::to_string(r.nodes[i + 1]) +
                            "); input system was not unique-shortest");
        }
      }
    return u;
  };

  Graph cur = rebuild(recs);
  for (;;) {
    if (recs.empty())
      throw ArgumentError("EMPTY_INSTANCE: cleaning removed every path");
    const Weight m = cur.edge_count();
    const Weight p_cur = recs.size();

    // (a) first path below the length floor |pi| >= |E| / (4p)
    bool acted = false;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (Weight(4) * p_cur * recs[i].step.size() < m) {
        recs.erase(recs.begin() + static_cast<std::ptrdiff_t>(i));
        acted = true;
        break;
      }
    }
    if (acted) {
      cur = rebuild(recs);
      continue;
    }

    // (b) lowest-id on-path node below the degree floor deg >= |E| / (4n)
    std::vector<bool> on_path(n_host, false);
    Weight n_alive = 0;
    for (const Rec& r : recs)
      for (NodeId v : r.nodes)
        if (!on_path[v]) {
          on_path[v] = true;
          ++n_alive;
        }
    NodeId victim = kInvalidNode;
    for (NodeId v = 0; v < n_host; ++v) {
      if (!on_path[v]) continue;
      if (Weight(4) * n_alive * cur.degree(v) < m) {
        victim = v;
        break;
      }
    }
    if (victim == kInvalidNode) break;  // both floors hold: fixpoint

    for (std::size_t i = 0; i < recs.size();) {
      Rec& r = recs[i];
      auto it = std::find(r.nodes.begin(), r.nodes.end(), victim);
      if (it == r.nodes.end()) {
        ++i;
        continue;
      }
      const std::size_t k = static_cast<std::size_t>(it - r.nodes.begin());
      if (k == 0) {
        r.nodes.erase(r.nodes.begin());
        if (!r.step.empty()) r.step.erase(r.step.begin());
      } else if (k + 1 == r.nodes.size()) {
        r.nodes.pop_back();
        r.step.pop_back();
      } else {  // internal: splice the two incident steps into one edge
        r.step[k - 1] = r.step[k - 1] + r.step[k];
        r.step.erase(r.step.begin() + static_cast<std::ptrdiff_t>(k));
        r.nodes.erase(r.nodes.begin() + static_cast<std::ptrdiff_t>(k));
      }
      if (r.nodes.size() <= 1)
        recs.erase(recs.begin() + static_cast<std::ptrdiff_t>(i));
      else
        ++i;
    }
    cur = rebuild(recs);
  }

  CleanResult out;
  out.graph = std::move(cur);
  out.system.graph = &out.graph;
  out.system.all_unique_shortest = true;
  std::unordered_set<EdgeId> seen;
  out.system.pairwise_edge_disjoint = true;
  for (const Rec& r : recs) {
    out.demands.push_back(DemandPair{r.nodes.front(), r.nodes.back()});
    Path p = Path::of(out.graph, r.nodes);
    if (out.system.all_unique_shortest && !is_unique_shortest(out.graph, p))
      out.system.all_unique_shortest = false;
    for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i)
      if (!seen.insert(*out.graph.find_edge(r.nodes[i], r.nodes[i + 1])).second)
        out.system.pairwise_edge_disjoint = false;
    out.system.paths.push_back(std::move(p));
  }
  out.system.pairs = out.demands;
  return out;
}

// ---------------------------------------------------------------------------
// Minimal (alpha-)preservers
// ---------------------------------------------------------------------------

// Union of the tie-broken shortest paths, then greedy edge deletion in
// descending weight (ties by id): a deletion survives iff every demand still
// has a path of weight at most floor(alpha * dist). With the default
// alpha = 1 that is exact preservation, and the result is edge-minimal.
inline Graph minimal_preserver(const Graph& g,
                               const std::vector<DemandPair>& demands,
                               const Rational& alpha = Rational(1)) {
  if (alpha < 1) throw ArgumentError("alpha must be at least 1");
  Graph h(g.node_count(), g.directed());
  std::vector<Weight> budget;
  for (const DemandPair& d : demands) {
    auto p = tiebroken_shortest_path(g, d.source, d.target);
    if (!p)
      throw ArgumentError("demand (" + std::to_string(d.source) + "," +
                          std::to_string(d.target) + ") is unreachable");
    budget.push_back(floor_rational(alpha * Rational(p->weight())));
    const auto& nodes = p->nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      if (!h.find_edge(nodes[i], nodes[i + 1]))
        h.add_edge(nodes[i], nodes[i + 1],
                   g.edge(*g.find_edge(nodes[i], nodes[i + 1])).weight);
  }

  // Demands grouped by source so each deletion trial runs one Dijkstra per
  // distinct source.
  std::unordered_map<NodeId, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < demands.size(); ++i)
    by_source[demands[i].source].push_back(i);

  std::vector<EdgeId> order(h.edge_count());
  for (EdgeId e = 0; e < h.edge_count(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    if (h.edge(a).weight != h.edge(b).weight)
      return h.edge(a).weight > h.edge(b).weight;
    return a < b;
  });

  std::vector<char> alive(h.edge_count(), 1);
  for (EdgeId e : order) {
    alive[e] = 0;
    bool ok = true;
    for (const auto& [s, idxs] : by_source) {
      auto dist = detail::dijkstra_masked(h, s, alive);
      for (std::size_t i : idxs) {
        const Dist& dv = dist[demands[i].target];
        if (!dv || *dv > budget[i]) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) alive[e] = 1;
  }

  Graph out(g.node_count(), g.directed());
  for (EdgeId e = 0; e < h.edge_count(); ++e)
    if (alive[e]) out.add_edge(h.edge(e).tail, h.edge(e).head, h.edge(e).weight);
  return out;
}

// ---------------------------------------------------------------------------
// Sourcewise preservers
// ---------------------------------------------------------------------------

struct SourcewiseResult {
  Graph preserver;
  std::size_t source_count = 0;
  std::size_t demand_count = 0;
  std::optional<Weight> weak_diameter;  // nullopt if some pair is unreachable
  std::optional<Weight> size_bound;     // floor(sqrt(n*s*p*h)) + n, if h known
};

// Minimal preserver for demands emanating from a source set S, reported
// together with S's weak diameter h and the reference size scale
// sqrt(n*s*p*h) + n it is meant to be compared against.
inline SourcewiseResult sourcewise_preserver(
    const Graph& g, const std::vector<NodeId>& sources,
    const std::vector<DemandPair>& demands) {
  std::unordered_set<NodeId> src_set;
  for (NodeId s : sources) {
    if (s >= g.node_count())
      throw ArgumentError("source " + std::to_string(s) + " out of range");
    src_set.insert(s);
  }
  if (src_set.empty()) throw ArgumentError("empty source set");
  for (const DemandPair& d : demands)
    if (!src_set.count(d.source))
      throw ArgumentError("demand source " + std::to_string(d.source) +
                          " is not in the source set");

  SourcewiseResult r;
  r.preserver = minimal_preserver(g, demands);
  r.source_count = src_set.size();
  r.demand_count = demands.size();

  bool all_reachable = true;
  Weight h = 0;
  for (NodeId s : src_set) {
    auto dist = dijkstra(g, s);
    for (NodeId t : src_set) {
      if (s == t) continue;
      if (!dist[t]) {
        all_reachable = false;
        break;
      }
      h = std::max(h, *dist[t]);
    }
    if (!all_reachable) break;
  }
  if (all_reachable) {
    r.weak_diameter = h;
    r.size_bound = boost::multiprecision::sqrt(Weight(g.node_count()) *
                                               r.source_count *
                                               r.demand_count * h) +
                   g.node_count();
  }
  return r;
}

// ---------------------------------------------------------------------------
// D-preservers (distances >= D)
// ---------------------------------------------------------------------------

// Greedy D-preserver: sweep all ordered pairs at distance >= D from the
// farthest inward and add the pair's tie-broken shortest path whenever the
// subgraph built so far no longer preserves it. Correct by construction;
// the n^2/ell-hat size scale is something to measure against, not a
// guarantee of this greedy stand-in.
inline Graph d_preserver(const Graph& g, const Weight& min_dist) {
  if (!g.unit_weights())
    throw ArgumentError("d_preserver requires unit weights");
  if (min_dist <= 0) throw ArgumentError("distance threshold must be positive");

  const std::size_t n = g.node_count();
  struct Pair {
    std::uint32_t dist;
    NodeId s, t;
  };
  std::vector<Pair> pairs;
  for (NodeId s = 0; s < n; ++s) {
    auto hops = bfs_hops(g, s);
    for (NodeId t = 0; t < n; ++t) {
      if (s == t || !hops[t]) continue;
      if (Weight(*hops[t]) >= min_dist) pairs.push_back({*hops[t], s, t});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist > b.dist;
    if (a.s != b.s) return a.s < b.s;
    return a.t < b.t;
  });

  Graph h(n, g.directed());
  for (const Pair& pr : pairs) {
    auto hops = bfs_hops(h, pr.s);
    if (hops[pr.t] && *hops[pr.t] == pr.dist) continue;
    auto path = tiebroken_shortest_path(g, pr.s, pr.t);
    const auto& nodes = path->nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      if (!h.find_edge(nodes[i], nodes[i + 1]))
        h.add_edge(nodes[i], nodes[i + 1], Weight(1));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Small average-path-length construction
// ---------------------------------------------------------------------------

struct SmallEllhatResult {
  Graph preserver;
  std::size_t iterations = 0;   // dense-cluster rounds executed
  bool phi_gate_ok = false;     // phi >= 10 p / sqrt(n) held on entry
  Rational phi;                 // the phi actually used
  Rational size_scale;          // n^(2/3)p^(4/3)/phi + np/phi^2 + n*phi (approx)
};

// Repeatedly peels dense low-diameter clusters while the instance stays
// dense: every demand through the cluster S is split at its first S-node
// into a sourcewise pair from S and one into S (handled on the transpose),
// both preserved exactly; the instance then shrinks to the remaining chosen
// paths. Once the density drops below phi, everything left is kept as-is.
//
// On entry the graph is rebuilt as the union of the chosen paths, so density
// always refers to edges the demands actually use. A dense instance in which
// no cluster can be found is a calibration failure and aborts loudly rather
// than returning something unsound.
inline SmallEllhatResult small_ellhat_preserver(
    const Graph& g, const std::vector<DemandPair>& demands,
    const Rational& phi, const ClusterConfig& cfg = {}) {
  if (!g.directed())
    throw ArgumentError("small_ellhat_preserver requires a directed graph");
  if (!g.unit_weights())
    throw ArgumentError("small_ellhat_preserver requires unit weights");
  if (phi <= 0) throw ArgumentError("phi must be positive");

  const std::size_t n = g.node_count();
  const Weight p = demands.size();

  SmallEllhatResult res;
  res.phi = phi;
  res.phi_gate_ok =
      numerator(phi) * numerator(phi) * n >=
      Weight(100) * p * p * denominator(phi) * denominator(phi);
  res.preserver = Graph(n, /*directed=*/true);

  struct Rec {
    DemandPair demand;
    std::vector<NodeId> nodes;
  };
  std::vector<Rec> remaining;
  for (const DemandPair& d : demands) {
    auto path = tiebroken_shortest_path(g, d.source, d.target);
    if (!path)
      throw ArgumentError("demand (" + std::to_string(d.source) + "," +
                          std::to_string(d.target) + ") is unreachable");
    remaining.push_back(Rec{d, path->nodes()});
  }

  for (;;) {
    Graph cur(n, /*directed=*/true);
    for (const Rec& r : remaining)
      for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i)
        if (!cur.find_edge(r.nodes[i], r.nodes[i + 1]))
          cur.add_edge(r.nodes[i], r.nodes[i + 1], Weight(1));

    // Loop gate: average degree |E|/n >= phi, cross-multiplied.
    if (Weight(cur.edge_count()) * denominator(phi) < numerator(phi) * n) {
      detail::add_missing_edges(res.preserver, cur);
      break;
    }

    PathSystem sys;
    sys.graph = &cur;
    for (const Rec& r : remaining) {
      sys.pairs.push_back(r.demand);
      sys.paths.push_back(Path::of(cur, r.nodes));
    }
    auto cluster = find_dense_cluster(cur, sys, cfg);
    if (!cluster)
      throw VerifyError(
          "DENSITY_CONTRACT_VIOLATION: no dense cluster found at density >= " +
          rational_to_string(phi) + " (n=" + std::to_string(n) +
          ", p=" + std::to_string(remaining.size()) +
          ", m=" + std::to_string(cur.edge_count()) +
          "); cluster constants need recalibration");

    std::unordered_set<NodeId> in_s(cluster->nodes.begin(),
                                    cluster->nodes.end());
    std::vector<DemandPair> from_s, into_s;  // into_s is over the transpose
    for (std::size_t i : cluster->witness_demands) {
      const auto& nodes = sys.paths[i].nodes();
      NodeId split = kInvalidNode;
      for (NodeId v : nodes)
        if (in_s.count(v)) {
          split = v;
          break;
        }
      from_s.push_back(DemandPair{split, nodes.back()});
      into_s.push_back(DemandPair{split, nodes.front()});
    }

    auto sw1 = sourcewise_preserver(cur, cluster->nodes, from_s);
    detail::add_missing_edges(res.preserver, sw1.preserver);
    Graph curt = cur.transposed();
    auto sw2 = sourcewise_preserver(curt, cluster->nodes, into_s);
    detail::add_missing_edges(res.preserver, sw2.preserver, /*transpose=*/true);

    std::unordered_set<std::size_t> drop(cluster->witness_demands.begin(),
                                         cluster->witness_demands.end());
    std::vector<Rec> next;
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (!drop.count(i)) next.push_back(std::move(remaining[i]));
    remaining = std::move(next);
    ++res.iterations;
  }

  // Reference size scale from the analysis, evaluated with fixed-point
  // approximations of the fractional powers (reporting aid, not a bound).
  const Weight kScale = 1024;
  const Rational x23 =  // ~ n^(2/3) p^(4/3)
      Rational(iroot(Weight(n) * n * boost::multiprecision::pow(p, 4) *
                         boost::multiprecision::pow(kScale, 3),
                     3),
               kScale);
  res.size_scale = x23 / phi + Rational(Weight(n) * p) / (phi * phi) +
                   Rational(n) * phi;
  return res;
}

// ---------------------------------------------------------------------------
// Driver: unweighted directed preserver with distance bucketing
// ---------------------------------------------------------------------------

struct UnweightedPreserverResult {
  Graph preserver;
  struct Bucket {
    unsigned index = 0;  // demands with 2^index <= dist < 2^(index+1)
    std::size_t demands = 0;
    Rational ell_hat;
    bool small_branch = false;  // small-ell-hat pipeline vs D-preserver
  };
  std::vector<Bucket> buckets;
};

// Buckets demands by distance scale; a bucket whose average path length
// clears the threshold ell_hat <= n^(7/6)/p^(2/3) goes through the dense-
// cluster pipeline with phi = p^(2/3)/n^(1/6), the rest through the greedy
// D-preserver at its distance floor. Every demand distance is re-verified
// before returning.
inline UnweightedPreserverResult build_unweighted_preserver(
    const Graph& g, const std::vector<DemandPair>& demands,
    const ClusterConfig& cfg = {}) {
  if (!g.directed())
    throw ArgumentError("build_unweighted_preserver requires a directed graph");
  if (!g.unit_weights())
    throw ArgumentError("build_unweighted_preserver requires unit weights");

  const std::size_t n = g.node_count();
  UnweightedPreserverResult res;
  res.preserver = Graph(n, /*directed=*/true);
  if (demands.empty()) return res;

  std::unordered_map<NodeId, std::vector<std::optional<std::uint32_t>>> hops;
  for (const DemandPair& d : demands)
    if (!hops.count(d.source)) hops.emplace(d.source, bfs_hops(g, d.source));

  std::map<unsigned, std::vector<DemandPair>> buckets;
  for (const DemandPair& d : demands) {
    const auto& h = hops.at(d.source)[d.target];
    if (!h)
      throw ArgumentError("demand (" + std::to_string(d.source) + "," +
                          std::to_string(d.target) + ") is unreachable");
    if (*h == 0) continue;  // s == t needs no edges
    buckets[std::bit_width(*h) - 1].push_back(d);
  }

  for (const auto& [i, bucket] : buckets) {
    const Weight pb = bucket.size();
    Weight sum = 0;
    for (const DemandPair& d : bucket) sum += *hops.at(d.source)[d.target];

    UnweightedPreserverResult::Bucket rep;
    rep.index = i;
    rep.demands = bucket.size();
    rep.ell_hat = Rational(sum, pb);
    // ell_hat <= n^(7/6) / p^(2/3)  <=>  sum^6 <= n^7 p^2
    rep.small_branch =
        boost::multiprecision::pow(sum, 6) <=
        boost::multiprecision::pow(Weight(n), 7) * pb * pb;

    if (rep.small_branch) {
      // phi = p^(2/3)/n^(1/6) = (p^4/n)^(1/6), floored at 1/1024 resolution.
      const Weight kScale = 1024;
      const Rational phi(
          iroot(boost::multiprecision::pow(pb, 4) *
                    boost::multiprecision::pow(kScale, 6) / n,
                6),
          kScale);
      auto sub = small_ellhat_preserver(g, bucket, phi, cfg);
      detail::add_missing_edges(res.preserver, sub.preserver);
    } else {
      Graph sub = d_preserver(g, Weight(1) << i);
      detail::add_missing_edges(res.preserver, sub);
    }
    res.buckets.push_back(std::move(rep));
  }

  for (const auto& [s, hs] : hops) {
    auto hh = bfs_hops(res.preserver, s);
    for (const DemandPair& d : demands) {
      if (d.source != s) continue;
      const auto& want = hs[d.target];
      if (!hh[d.target] || *hh[d.target] != *want)
        throw VerifyError("constructed preserver fails demand (" +
                          std::to_string(d.source) + "," +
                          std::to_string(d.target) + ")");
    }
  }
  return res;
}

}  // namespace dpres

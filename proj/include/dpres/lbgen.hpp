#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/json_io.hpp"
#include "dpres/path.hpp"
#include "dpres/shortest_paths.hpp"

namespace dpres {

enum class Family {
  kPointLine,        // point-line incidence grid with over/under weights
  kApproxHopset,     // weighted layered grid (optionally layer-compressed)
  kShortcutLayered,  // directed unweighted layered 3d grid
  kUnweightedHopset  // undirected unweighted 3d grid with chain gadgets
};

inline std::string family_name(Family f) {
  switch (f) {
    case Family::kPointLine: return "pointline";
    case Family::kApproxHopset: return "approx-hopset";
    case Family::kShortcutLayered: return "shortcut";
    case Family::kUnweightedHopset: return "unweighted-hopset";
  }
  throw ArgumentError("unknown family");
}

inline Family family_from_name(const std::string& s) {
  if (s == "pointline") return Family::kPointLine;
  if (s == "approx-hopset") return Family::kApproxHopset;
  if (s == "shortcut") return Family::kShortcutLayered;
  if (s == "unweighted-hopset") return Family::kUnweightedHopset;
  throw ArgumentError("unknown family '" + s + "'");
}

// A generated adversarial instance: the graph, the demand endpoints, the
// critical paths the potential arguments sum over, a per-node layer index
// (-1 where the notion does not apply, e.g. chain midpoints), and the
// generation parameters echoed into `meta` for manifests and reports.
struct LowerBoundInstance {
  Family family = Family::kPointLine;
  Graph graph;
  std::vector<DemandPair> demands;  // aligned with critical_paths
  std::vector<Path> critical_paths;
  std::vector<std::int64_t> layer;                  // node id -> layer or -1
  std::vector<std::array<NodeId, 3>> midpoint_map;  // {midpoint, from, to}
  Json meta;
};

// q[i] = i with its (log2 r)-bit representation reversed; a permutation.
inline std::vector<std::uint32_t> bit_reversal_perm(std::uint32_t r) {
  if (r == 0 || (r & (r - 1)) != 0)
    throw ArgumentError("bit reversal needs a power-of-two length, got " +
                        std::to_string(r));
  unsigned bits = 0;
  while ((1u << bits) < r) ++bits;
  std::vector<std::uint32_t> q(r);
  for (std::uint32_t i = 0; i < r; ++i) {
    std::uint32_t rev = 0;
    for (unsigned b = 0; b < bits; ++b)
      if (i & (1u << b)) rev |= 1u << (bits - 1 - b);
    q[i] = rev;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Point-line incidence instance
// ---------------------------------------------------------------------------

// Grid points [k] x [2kl] as vertices; lines y = m x + b (m in [l], b in
// [kl]) traced left to right as directed paths. Every line meets exactly k
// grid points, so the incidence count is k^2 l^2 and the edge count is
// k^2 l^2 - k l^2. Lines are ranked by (slope, intercept); the i-th line's
// edges (1-based rank) all carry weight ceil(2*alpha*n)^i, the over/under
// weighting that makes each line its demand's only alpha-approximate route.
inline LowerBoundInstance gen_pointline(std::uint32_t k, std::uint32_t l,
                                        const Rational& alpha) {
  if (k < 1 || l < 1) throw ArgumentError("grid parameters must be >= 1");
  if (alpha < 1) throw ArgumentError("alpha must be at least 1");

  const std::uint32_t height = 2 * k * l;
  const std::size_t n = static_cast<std::size_t>(k) * k * 2 * l;
  auto id = [&](std::uint32_t x, std::uint32_t y) {
    return static_cast<NodeId>((x - 1) * height + (y - 1));
  };

  LowerBoundInstance inst;
  inst.family = Family::kPointLine;
  inst.graph = Graph(n, /*directed=*/true);
  inst.layer.assign(n, -1);

  const Weight base = ceil_rational(Rational(2 * Weight(n)) * alpha);
  Weight weight = 1;  // base^rank, maintained incrementally
  std::size_t lines = 0;
  for (std::uint32_t m = 1; m <= l; ++m) {
    for (std::uint32_t b = 1; b <= k * l; ++b) {
      weight *= base;
      ++lines;
      std::vector<NodeId> nodes;
      for (std::uint32_t x = 1; x <= k; ++x) nodes.push_back(id(x, m * x + b));
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        inst.graph.add_edge(nodes[i], nodes[i + 1], weight);
      inst.demands.push_back(DemandPair{nodes.front(), nodes.back()});
      inst.critical_paths.push_back(Path::of(inst.graph, std::move(nodes)));
    }
  }

  const std::size_t expect_edges =
      static_cast<std::size_t>(k) * k * l * l - static_cast<std::size_t>(k) * l * l;
  if (inst.graph.edge_count() != expect_edges)
    throw VerifyError("point-line edge count mismatch: " +
                      std::to_string(inst.graph.edge_count()) + " vs " +
                      std::to_string(expect_edges));

  inst.meta = Json{{"family", family_name(inst.family)},
                   {"k", k},
                   {"l", l},
                   {"alpha", rational_to_string(alpha)},
                   {"weight_base", base.str()},
                   {"nodes", n},
                   {"lines", lines},
                   {"edges", inst.graph.edge_count()},
                   {"degenerate", k == 1}};
  return inst;
}

// ---------------------------------------------------------------------------
// Approximate-hopset instance (weighted layered grid)
// ---------------------------------------------------------------------------

// Base grid: nodes (x, y), x in [X/2] (the layer), y in [2X], with X =
// sqrt(n). Layer x < X/2 sends (x,y) -> (x+1,y) at weight 1 and (x,y) ->
// (x+1,y+1) at weight base^{q_x}, where q is the bit-reversal permutation of
// [[X/2]]. The per-layer weight exponent is indexed by the actual layer
// number (1..X/2-1, so q_0 goes unused) — the construction's index range
// admits two readings and this is the one consistent with the layer count;
// meta records the choice. Critical paths start at (1, y0), y0 in [X], and
// take the layer-x diagonal iff the path parameter d (in [X]) exceeds q_x;
// distinct (y0, d) can repeat a path, so critical_paths is deduplicated and
// meta keeps both counts.
//
// With c > 1 the instance is compressed: only layers c, 2c, ... survive
// (2X nodes each, renumbered compactly), and each critical path contributes
// one edge between its nodes at consecutive kept layers, weighted by the
// true distance in the base grid; critical paths become their restrictions.
inline LowerBoundInstance gen_approx_hopset(std::uint32_t sqrt_n,
                                            const Rational& alpha,
                                            std::uint32_t c = 1) {
  if (sqrt_n < 2 || (sqrt_n & (sqrt_n - 1)) != 0)
    throw ArgumentError("sqrt_n must be a power of two >= 2");
  if (alpha < 1) throw ArgumentError("alpha must be at least 1");
  if (c < 1) throw ArgumentError("compression factor must be >= 1");

  const std::uint32_t X = sqrt_n;
  const std::uint32_t layers = X / 2;
  const std::uint32_t height = 2 * X;
  const std::size_t n = static_cast<std::size_t>(X) * X;
  auto id = [&](std::uint32_t x, std::uint32_t y) {
    return static_cast<NodeId>((x - 1) * height + (y - 1));
  };

  Graph base_graph(n, /*directed=*/true);
  const auto q = bit_reversal_perm(layers);
  const Weight base = ceil_rational(Rational(2 * Weight(n)) * alpha);
  std::vector<Weight> diag_weight(layers);  // indexed by layer, [1] onward
  for (std::uint32_t x = 1; x + 1 <= layers; ++x)
    diag_weight[x] = boost::multiprecision::pow(base, q[x]);
  for (std::uint32_t x = 1; x + 1 <= layers; ++x) {
    for (std::uint32_t y = 1; y <= height; ++y) {
      base_graph.add_edge(id(x, y), id(x + 1, y), Weight(1));
      if (y + 1 <= height)
        base_graph.add_edge(id(x, y), id(x + 1, y + 1), diag_weight[x]);
    }
  }

  // Critical paths, deduplicated (distinct d with the same comparison
  // profile trace the same nodes).
  std::vector<std::vector<NodeId>> raw;
  for (std::uint32_t y0 = 1; y0 <= X; ++y0) {
    for (std::uint32_t d = 1; d <= X; ++d) {
      std::vector<NodeId> nodes;
      std::uint32_t y = y0;
      nodes.push_back(id(1, y));
      for (std::uint32_t x = 1; x + 1 <= layers; ++x) {
        if (d > q[x]) ++y;
        if (y > height)
          throw VerifyError("critical path left the grid");  // cannot happen
        nodes.push_back(id(x + 1, y));
      }
      raw.push_back(std::move(nodes));
    }
  }
  const std::size_t p_raw = raw.size();
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

  LowerBoundInstance inst;
  inst.family = Family::kApproxHopset;
  inst.meta = Json{{"family", family_name(inst.family)},
                   {"sqrt_n", X},
                   {"alpha", rational_to_string(alpha)},
                   {"c", c},
                   {"weight_base", base.str()},
                   {"weight_index_note",
                    "diagonal weight exponent q_x is indexed by the actual "
                    "layer number x in [1, sqrt_n/2 - 1]; q_0 unused"},
                   {"paths_with_multiplicity", p_raw},
                   {"paths_distinct", raw.size()},
                   {"degenerate", layers < 2}};

  if (c == 1) {
    inst.graph = std::move(base_graph);
    inst.layer.assign(n, -1);
    for (std::uint32_t x = 1; x <= layers; ++x)
      for (std::uint32_t y = 1; y <= height; ++y)
        inst.layer[id(x, y)] = x;
    for (auto& nodes : raw) {
      inst.demands.push_back(DemandPair{nodes.front(), nodes.back()});
      inst.critical_paths.push_back(Path::of(inst.graph, std::move(nodes)));
    }
    inst.meta["nodes"] = inst.graph.node_count();
    inst.meta["edges"] = inst.graph.edge_count();
    return inst;
  }

  // Compression: layers c, 2c, ..., kept_count * c survive.
  const std::uint32_t kept_count = layers / c;
  if (kept_count == 0)
    throw ArgumentError("compression factor exceeds the layer count");
  const std::size_t cn = static_cast<std::size_t>(kept_count) * height;
  auto cid = [&](std::uint32_t j, std::uint32_t y) {  // j in [1, kept_count]
    return static_cast<NodeId>((j - 1) * height + (y - 1));
  };
  inst.graph = Graph(cn, /*directed=*/true);
  inst.layer.assign(cn, -1);
  for (std::uint32_t j = 1; j <= kept_count; ++j)
    for (std::uint32_t y = 1; y <= height; ++y) inst.layer[cid(j, y)] = j;

  std::unordered_map<NodeId, std::vector<Dist>> dist_cache;
  std::vector<std::vector<NodeId>> restricted;
  for (const auto& nodes : raw) {
    std::vector<NodeId> rest;      // compressed ids
    std::vector<NodeId> original;  // matching base-grid ids
    for (std::uint32_t j = 1; j <= kept_count; ++j) {
      const NodeId orig = nodes[j * c - 1];  // path node at layer j*c
      original.push_back(orig);
      rest.push_back(cid(j, static_cast<std::uint32_t>(orig % height) + 1));
    }
    for (std::size_t t = 0; t + 1 < original.size(); ++t) {
      if (inst.graph.find_edge(rest[t], rest[t + 1])) continue;
      auto [it, fresh] = dist_cache.try_emplace(original[t]);
      if (fresh) it->second = dijkstra(base_graph, original[t]);
      inst.graph.add_edge(rest[t], rest[t + 1], *it->second[original[t + 1]]);
    }
    restricted.push_back(std::move(rest));
  }
  std::sort(restricted.begin(), restricted.end());
  restricted.erase(std::unique(restricted.begin(), restricted.end()),
                   restricted.end());
  for (auto& rest : restricted) {
    inst.demands.push_back(DemandPair{rest.front(), rest.back()});
    inst.critical_paths.push_back(Path::of(inst.graph, std::move(rest)));
  }
  inst.meta["paths_distinct_compressed"] = inst.critical_paths.size();
  inst.meta["kept_layers"] = kept_count;
  inst.meta["nodes"] = inst.graph.node_count();
  inst.meta["edges"] = inst.graph.edge_count();
  return inst;
}

// ---------------------------------------------------------------------------
// Shortcut instance (directed unweighted layered grid)
// ---------------------------------------------------------------------------

// Layers [[2cr+1]] over a [4cr] x [4cr] x [4cr^2] coordinate grid. Layer i
// advances either straight or by w_i = (1,0,q_{(i/2) mod r}) (even i) /
// (0,1,q_{((i-1)/2) mod r}) (odd i); both edge kinds are unit weight.
// Critical paths start anywhere in [2cr] x [2cr] x [2cr^2] with parameters
// (d1, d2) in [r]^2 and take the w_i edge exactly when the relevant q-entry
// is below the relevant parameter, which keeps them inside the grid
// (asserted) and makes every (start, d1, d2) trace a distinct path.
inline LowerBoundInstance gen_shortcut(std::uint32_t r, std::uint32_t c = 1) {
  if (r < 2 || (r & (r - 1)) != 0)
    throw ArgumentError("r must be a power of two >= 2");
  if (c < 1) throw ArgumentError("c must be >= 1");

  const std::uint32_t steps = 2 * c * r;  // transitions; layers = steps + 1
  const std::uint32_t a = 4 * c * r;      // first two coordinate ranges
  const std::uint32_t z = 4 * c * r * r;  // third coordinate range
  const std::size_t per_layer = static_cast<std::size_t>(a) * a * z;
  const std::size_t n = per_layer * (steps + 1);
  auto id = [&](std::uint32_t i, std::uint32_t x1, std::uint32_t x2,
                std::uint32_t x3) {
    return static_cast<NodeId>(i * per_layer +
                               ((static_cast<std::size_t>(x1 - 1) * a +
                                 (x2 - 1)) *
                                    z +
                                (x3 - 1)));
  };

  LowerBoundInstance inst;
  inst.family = Family::kShortcutLayered;
  inst.graph = Graph(n, /*directed=*/true);
  inst.layer.assign(n, -1);
  for (std::uint32_t i = 0; i <= steps; ++i) {
    const std::size_t from = i * per_layer;
    for (std::size_t off = 0; off < per_layer; ++off)
      inst.layer[from + off] = i;
  }

  const auto q = bit_reversal_perm(r);
  // w[i] = {dx1, dx2, dx3} for layer i.
  std::vector<std::array<std::uint32_t, 3>> w(steps);
  for (std::uint32_t i = 0; i < steps; ++i) {
    if (i % 2 == 0)
      w[i] = {1, 0, q[(i / 2) % r]};
    else
      w[i] = {0, 1, q[((i - 1) / 2) % r]};
  }

  for (std::uint32_t i = 0; i < steps; ++i) {
    for (std::uint32_t x1 = 1; x1 <= a; ++x1) {
      for (std::uint32_t x2 = 1; x2 <= a; ++x2) {
        for (std::uint32_t x3 = 1; x3 <= z; ++x3) {
          const NodeId u = id(i, x1, x2, x3);
          inst.graph.add_edge(u, id(i + 1, x1, x2, x3), Weight(1));
          const std::uint32_t y1 = x1 + w[i][0];
          const std::uint32_t y2 = x2 + w[i][1];
          const std::uint32_t y3 = x3 + w[i][2];
          if (y1 <= a && y2 <= a && y3 <= z)
            inst.graph.add_edge(u, id(i + 1, y1, y2, y3), Weight(1));
        }
      }
    }
  }

  for (std::uint32_t x1 = 1; x1 <= 2 * c * r; ++x1) {
    for (std::uint32_t x2 = 1; x2 <= 2 * c * r; ++x2) {
      for (std::uint32_t x3 = 1; x3 <= 2 * c * r * r; ++x3) {
        for (std::uint32_t d1 = 1; d1 <= r; ++d1) {
          for (std::uint32_t d2 = 1; d2 <= r; ++d2) {
            std::uint32_t p1 = x1, p2 = x2, p3 = x3;
            std::vector<NodeId> nodes{id(0, p1, p2, p3)};
            for (std::uint32_t i = 0; i < steps; ++i) {
              const bool take =
                  (i % 2 == 0) ? (w[i][2] < d1) : (w[i][2] < d2);
              if (take) {
                p1 += w[i][0];
                p2 += w[i][1];
                p3 += w[i][2];
                if (p1 > a || p2 > a || p3 > z)
                  throw VerifyError("critical path left the grid");
              }
              nodes.push_back(id(i + 1, p1, p2, p3));
            }
            inst.demands.push_back(DemandPair{nodes.front(), nodes.back()});
            inst.critical_paths.push_back(
                Path::of(inst.graph, std::move(nodes)));
          }
        }
      }
    }
  }

  const std::size_t expect_paths = static_cast<std::size_t>(2 * c * r) *
                                   (2 * c * r) * (2 * c * r * r) * r * r;
  if (inst.critical_paths.size() != expect_paths)
    throw VerifyError("critical path count mismatch");

  inst.meta = Json{{"family", family_name(inst.family)},
                   {"r", r},
                   {"c", c},
                   {"layers", steps + 1},
                   {"nodes", n},
                   {"edges", inst.graph.edge_count()},
                   {"paths", inst.critical_paths.size()}};
  return inst;
}

// ---------------------------------------------------------------------------
// Unweighted-hopset instance (undirected, chain gadgets)
// ---------------------------------------------------------------------------

// Important nodes (i,j,k), i in [[2cr+1]], j in [4cr], k in [3cr^2],
// connected by a single edge to (i+1,j,k) and, where the target stays in
// grid, by a two-edge chain through a fresh midpoint to
// (i+1, j, k + q_{(i/2) mod r}) for even i and (i+1, j+1, k + q_{((i-1)/2)
// mod r}) for odd i. Critical paths start at (0,j,k) with j in [cr], k in
// [cr^2] under parameters r/2 < d2 < d1 <= r and take the chain at even
// layers iff q >= d1, at odd layers iff q >= d2 (the comparison runs the
// other way round than in the directed shortcut family). For r = 2 no
// (d1,d2) qualifies and the path collection is empty.
inline LowerBoundInstance gen_unweighted_hopset(std::uint32_t r,
                                                std::uint32_t c = 1) {
  if (r < 2 || (r & (r - 1)) != 0)
    throw ArgumentError("r must be a power of two >= 2");
  if (c < 1) throw ArgumentError("c must be >= 1");

  const std::uint32_t steps = 2 * c * r;
  const std::uint32_t jmax = 4 * c * r;
  const std::uint32_t kmax = 3 * c * r * r;
  const std::size_t per_layer = static_cast<std::size_t>(jmax) * kmax;
  const std::size_t importants = per_layer * (steps + 1);
  auto id = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    return static_cast<NodeId>(i * per_layer +
                               (static_cast<std::size_t>(j - 1) * kmax +
                                (k - 1)));
  };

  const auto q = bit_reversal_perm(r);
  // Chain targets per layer: even advances k, odd advances j and k.
  auto chain_target = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k)
      -> std::pair<std::uint32_t, std::uint32_t> {  // (j', k')
    if (i % 2 == 0) return {j, k + q[(i / 2) % r]};
    return {j + 1, k + q[((i - 1) / 2) % r]};
  };

  // Count chains first so the graph can be sized up front.
  std::size_t chains = 0;
  for (std::uint32_t i = 0; i < steps; ++i)
    for (std::uint32_t j = 1; j <= jmax; ++j)
      for (std::uint32_t k = 1; k <= kmax; ++k) {
        auto [tj, tk] = chain_target(i, j, k);
        if (tj <= jmax && tk <= kmax) ++chains;
      }

  LowerBoundInstance inst;
  inst.family = Family::kUnweightedHopset;
  inst.graph = Graph(importants + chains, /*directed=*/false);
  inst.layer.assign(importants + chains, -1);
  for (std::uint32_t i = 0; i <= steps; ++i) {
    const std::size_t from = i * per_layer;
    for (std::size_t off = 0; off < per_layer; ++off)
      inst.layer[from + off] = i;
  }

  // mid_of[u] -> midpoint of u's (unique) outgoing chain, for path tracing.
  std::unordered_map<std::uint64_t, NodeId> mid_of;
  NodeId next_mid = static_cast<NodeId>(importants);
  for (std::uint32_t i = 0; i < steps; ++i) {
    for (std::uint32_t j = 1; j <= jmax; ++j) {
      for (std::uint32_t k = 1; k <= kmax; ++k) {
        const NodeId u = id(i, j, k);
        inst.graph.add_edge(u, id(i + 1, j, k), Weight(1));
        auto [tj, tk] = chain_target(i, j, k);
        if (tj > jmax || tk > kmax) continue;
        const NodeId v = id(i + 1, tj, tk);
        const NodeId mid = next_mid++;
        inst.graph.add_edge(u, mid, Weight(1));
        inst.graph.add_edge(mid, v, Weight(1));
        inst.midpoint_map.push_back({mid, u, v});
        mid_of.emplace(u, mid);
      }
    }
  }

  for (std::uint32_t j0 = 1; j0 <= c * r; ++j0) {
    for (std::uint32_t k0 = 1; k0 <= c * r * r; ++k0) {
      for (std::uint32_t d1 = r / 2 + 2; d1 <= r; ++d1) {
        for (std::uint32_t d2 = r / 2 + 1; d2 < d1; ++d2) {
          std::uint32_t j = j0, k = k0;
          std::vector<NodeId> nodes{id(0, j, k)};
          for (std::uint32_t i = 0; i < steps; ++i) {
            const std::uint32_t qv =
                (i % 2 == 0) ? q[(i / 2) % r] : q[((i - 1) / 2) % r];
            const bool chain = (i % 2 == 0) ? (qv >= d1) : (qv >= d2);
            if (chain) {
              auto [tj, tk] = chain_target(i, j, k);
              if (tj > jmax || tk > kmax)
                throw VerifyError("critical path left the grid");
              nodes.push_back(mid_of.at(nodes.back()));
              j = tj;
              k = tk;
            }
            nodes.push_back(id(i + 1, j, k));
          }
          inst.demands.push_back(DemandPair{nodes.front(), nodes.back()});
          inst.critical_paths.push_back(Path::of(inst.graph, std::move(nodes)));
        }
      }
    }
  }

  inst.meta = Json{{"family", family_name(inst.family)},
                   {"r", r},
                   {"c", c},
                   {"layers", steps + 1},
                   {"important_nodes", importants},
                   {"midpoints", chains},
                   {"nodes", inst.graph.node_count()},
                   {"edges", inst.graph.edge_count()},
                   {"paths", inst.critical_paths.size()}};
  return inst;
}

// ---------------------------------------------------------------------------
// Instance (de)serialization
// ---------------------------------------------------------------------------

inline Json instance_to_json(const LowerBoundInstance& inst) {
  Json j = graph_to_json(inst.graph);
  j["demands"] = demands_to_json(inst.demands);
  Json paths = Json::array();
  for (const Path& p : inst.critical_paths) {
    Json nodes = Json::array();
    for (NodeId v : p.nodes()) nodes.push_back(v);
    paths.push_back(std::move(nodes));
  }
  j["critical_paths"] = std::move(paths);
  j["layers"] = inst.layer;
  if (!inst.midpoint_map.empty()) {
    Json mids = Json::array();
    for (const auto& m : inst.midpoint_map)
      mids.push_back(Json::array({m[0], m[1], m[2]}));
    j["midpoints"] = std::move(mids);
  }
  j["meta"] = inst.meta;
  return j;
}

inline LowerBoundInstance instance_from_json(const Json& j) {
  LowerBoundInstance inst;
  inst.graph = graph_from_json(j);
  if (!j.contains("meta") || !j["meta"].contains("family"))
    throw ArgumentError("instance JSON lacks meta.family");
  inst.meta = j["meta"];
  inst.family = family_from_name(inst.meta["family"].get<std::string>());
  if (j.contains("demands"))
    inst.demands = demands_from_json(j["demands"], inst.graph.node_count());
  if (j.contains("critical_paths")) {
    for (const Json& nodes : j["critical_paths"]) {
      std::vector<NodeId> seq;
      for (const Json& v : nodes) seq.push_back(v.get<NodeId>());
      inst.critical_paths.push_back(Path::of(inst.graph, std::move(seq)));
    }
  }
  if (j.contains("layers")) {
    inst.layer = j["layers"].get<std::vector<std::int64_t>>();
    if (inst.layer.size() != inst.graph.node_count())
      throw ArgumentError("layer map size mismatch");
  }
  if (j.contains("midpoints")) {
    for (const Json& m : j["midpoints"])
      inst.midpoint_map.push_back(
          {m.at(0).get<NodeId>(), m.at(1).get<NodeId>(), m.at(2).get<NodeId>()});
  }
  return inst;
}

}  // namespace dpres

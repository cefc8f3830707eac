#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "dpres/lbgen.hpp"
#include "oracles.hpp"

using dpres::ArgumentError;
using dpres::Family;
using dpres::Graph;
using dpres::NodeId;
using dpres::Path;
using dpres::Rational;
using dpres::Weight;

TEST_CASE("bit reversal permutations match the frozen tables") {
  CHECK(dpres::bit_reversal_perm(2) == std::vector<std::uint32_t>{0, 1});
  CHECK(dpres::bit_reversal_perm(4) == std::vector<std::uint32_t>{0, 2, 1, 3});
  CHECK(dpres::bit_reversal_perm(8) ==
        std::vector<std::uint32_t>{0, 4, 2, 6, 1, 5, 3, 7});
  auto q = dpres::bit_reversal_perm(16);
  std::sort(q.begin(), q.end());
  std::vector<std::uint32_t> iota(16);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(q == iota);
}

TEST_CASE("point-line instances carry geometric weights on disjoint lines") {
  // k=2, l=1, alpha=2: n = 8, base = ceil(2*8*2) = 32, two one-edge lines at
  // weights 32 and 32^2. With height 4 the line (m=1,b=1) runs from node 1
  // to node 6 and (m=1,b=2) from 2 to 7.
  auto inst = dpres::gen_pointline(2, 1, Rational(2));
  CHECK(inst.family == Family::kPointLine);
  CHECK(inst.graph.node_count() == 8);
  CHECK(inst.graph.edge_count() == 2);
  REQUIRE(inst.critical_paths.size() == 2);
  CHECK(inst.critical_paths[0].nodes() == std::vector<NodeId>{1, 6});
  CHECK(inst.critical_paths[1].nodes() == std::vector<NodeId>{2, 7});
  CHECK(inst.critical_paths[0].weight() == 32);
  CHECK(inst.critical_paths[1].weight() == 1024);
  CHECK(inst.demands[0].source == 1);
  CHECK(inst.demands[0].target == 6);
  CHECK(inst.meta["weight_base"] == "32");
  CHECK(inst.meta["degenerate"] == false);
  for (std::int64_t l : inst.layer) CHECK(l == -1);
  for (const Path& p : inst.critical_paths)
    CHECK(dpres::is_unique_shortest(inst.graph, p));

  // k=3, l=2, alpha=1: 36 nodes, 24 edges, 12 two-edge lines whose rank-i
  // weight is 72^i per edge.
  auto big = dpres::gen_pointline(3, 2, Rational(1));
  CHECK(big.graph.node_count() == 36);
  CHECK(big.graph.edge_count() == 24);
  REQUIRE(big.critical_paths.size() == 12);
  CHECK(big.meta["weight_base"] == "72");
  CHECK(big.critical_paths[0].weight() == Weight(2) * 72);
  CHECK(big.critical_paths[11].weight() ==
        Weight(2) * boost::multiprecision::pow(Weight(72), 12));

  // k=1 collapses every line to a point.
  auto deg = dpres::gen_pointline(1, 2, Rational(1));
  CHECK(deg.graph.edge_count() == 0);
  CHECK(deg.critical_paths.size() == 4);
  for (const Path& p : deg.critical_paths) CHECK(p.nodes().size() == 1);
  CHECK(deg.meta["degenerate"] == true);

  CHECK_THROWS_AS(dpres::gen_pointline(0, 1, Rational(1)), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_pointline(2, 1, Rational(1, 2)), ArgumentError);
}

TEST_CASE("layered grid instances follow the frozen profile walk") {
  // X=4, alpha=2: one transition layer, base 64, diagonal exponent q_1 = 1.
  // 16 raw (y0,d) walks collapse to 8 distinct two-node paths.
  auto inst = dpres::gen_approx_hopset(4, Rational(2));
  CHECK(inst.family == Family::kApproxHopset);
  CHECK(inst.graph.node_count() == 16);
  CHECK(inst.graph.edge_count() == 15);
  REQUIRE(inst.critical_paths.size() == 8);
  CHECK(inst.meta["paths_with_multiplicity"] == 16);
  CHECK(inst.meta["paths_distinct"] == 8);
  CHECK(inst.meta["weight_base"] == "64");
  CHECK(inst.meta["degenerate"] == false);

  const std::vector<std::vector<NodeId>> expect = {
      {0, 8}, {0, 9}, {1, 9}, {1, 10}, {2, 10}, {2, 11}, {3, 11}, {3, 12}};
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(inst.critical_paths[i].nodes() == expect[i]);
    CHECK(inst.demands[i].source == expect[i].front());
    CHECK(inst.demands[i].target == expect[i].back());
  }
  // Straight edges weigh 1, the layer-1 diagonal weighs 64^1.
  CHECK(inst.graph.edge(*inst.graph.find_edge(0, 8)).weight == 1);
  CHECK(inst.graph.edge(*inst.graph.find_edge(0, 9)).weight == 64);
  for (NodeId v = 0; v < 16; ++v) CHECK(inst.layer[v] == (v < 8 ? 1 : 2));

  CHECK_THROWS_AS(dpres::gen_approx_hopset(3, Rational(2)), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_approx_hopset(1, Rational(2)), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_approx_hopset(4, Rational(1, 2)), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_approx_hopset(4, Rational(2), 0), ArgumentError);
}

TEST_CASE("layer compression rebuilds paths at true distances") {
  // X=8, alpha=2, c=2: layers 2 and 4 survive with 16 nodes each. The four
  // comparison profiles against q = (2,1,3) restrict to the (y2,y4) offsets
  // (0,0), (0,1), (1,2), (1,3), giving 25 distinct compressed paths, each a
  // single edge weighted by its true base-grid distance.
  auto inst = dpres::gen_approx_hopset(8, Rational(2), 2);
  CHECK(inst.graph.node_count() == 32);
  CHECK(inst.graph.edge_count() == 25);
  CHECK(inst.critical_paths.size() == 25);
  CHECK(inst.meta["paths_with_multiplicity"] == 64);
  CHECK(inst.meta["paths_distinct"] == 32);
  CHECK(inst.meta["paths_distinct_compressed"] == 25);
  CHECK(inst.meta["kept_layers"] == 2);
  CHECK(inst.meta["weight_base"] == "256");

  // Straight-profile start y0=1: two unit steps. Full-diagonal profile:
  // the layer-2 and layer-3 diagonals cost 256 + 256^3.
  CHECK(inst.graph.edge(*inst.graph.find_edge(0, 16)).weight == 2);
  const Weight diag = Weight(256) + boost::multiprecision::pow(Weight(256), 3);
  CHECK(inst.graph.edge(*inst.graph.find_edge(1, 19)).weight == diag);
  for (const Path& p : inst.critical_paths) CHECK(p.nodes().size() == 2);
  for (NodeId v = 0; v < 32; ++v) CHECK(inst.layer[v] == (v < 16 ? 1 : 2));

  // c=4 keeps a single layer: paths shrink to points and no edges remain.
  auto one = dpres::gen_approx_hopset(8, Rational(2), 4);
  CHECK(one.graph.node_count() == 16);
  CHECK(one.graph.edge_count() == 0);
  CHECK(one.critical_paths.size() == 11);
  CHECK(one.meta["kept_layers"] == 1);
  for (const Path& p : one.critical_paths) CHECK(p.nodes().size() == 1);
  for (const auto& d : one.demands) CHECK(d.source == d.target);

  // X=2 has no transition layer at all.
  auto tiny = dpres::gen_approx_hopset(2, Rational(1));
  CHECK(tiny.graph.node_count() == 4);
  CHECK(tiny.graph.edge_count() == 0);
  CHECK(tiny.critical_paths.size() == 2);
  CHECK(tiny.meta["degenerate"] == true);

  CHECK_THROWS_AS(dpres::gen_approx_hopset(4, Rational(2), 4), ArgumentError);
}

TEST_CASE("directed shortcut grids are topologically numbered by layer") {
  auto inst = dpres::gen_shortcut(2, 1);
  CHECK(inst.family == Family::kShortcutLayered);
  CHECK(inst.graph.node_count() == 5120);
  CHECK(inst.graph.edge_count() == 7568);
  CHECK(inst.critical_paths.size() == 512);
  CHECK(inst.meta["layers"] == 5);
  CHECK(inst.graph.directed());
  CHECK(inst.graph.unit_weights());

  // Node ids ascend with the layer, so the id order is itself topological.
  for (dpres::EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    const auto& ed = inst.graph.edge(e);
    REQUIRE(ed.tail < ed.head);
    REQUIRE(inst.layer[ed.head] == inst.layer[ed.tail] + 1);
  }

  // First walk: start (1,1,1), d=(1,1) takes the two q=0 transitions and
  // then runs straight.
  CHECK(inst.critical_paths[0].nodes() ==
        std::vector<NodeId>{0, 1152, 2192, 3216, 4240});
  for (const Path& p : inst.critical_paths) {
    CHECK(p.nodes().size() == 5);
    CHECK(p.weight() == 4);
  }
  for (std::size_t i = 0; i < inst.demands.size(); ++i) {
    CHECK(inst.demands[i].source == inst.critical_paths[i].nodes().front());
    CHECK(inst.demands[i].target == inst.critical_paths[i].nodes().back());
  }

  CHECK_THROWS_AS(dpres::gen_shortcut(3), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_shortcut(1), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_shortcut(2, 0), ArgumentError);
}

TEST_CASE("chain gadgets keep their midpoints off the layer map") {
  // r=2: 480 important nodes; chains per transition are 96, 84, 88 and 77
  // (clipped at the j/k walls), so 345 midpoints, 4*96 + 2*345 edges — and
  // no critical path exists because r/2 + 2 > r.
  auto inst = dpres::gen_unweighted_hopset(2, 1);
  CHECK(inst.family == Family::kUnweightedHopset);
  CHECK(!inst.graph.directed());
  CHECK(inst.graph.unit_weights());
  CHECK(inst.meta["important_nodes"] == 480);
  CHECK(inst.meta["midpoints"] == 345);
  CHECK(inst.graph.node_count() == 825);
  CHECK(inst.graph.edge_count() == 1074);
  CHECK(inst.critical_paths.empty());
  CHECK(inst.demands.empty());
  REQUIRE(inst.midpoint_map.size() == 345);
  for (NodeId v = 0; v < 480; ++v) CHECK(inst.layer[v] == v / 96);
  for (NodeId v = 480; v < 825; ++v) CHECK(inst.layer[v] == -1);
  for (const auto& m : inst.midpoint_map) {
    CHECK(m[0] >= 480);
    CHECK(inst.graph.degree(m[0]) == 2);
    CHECK(inst.graph.find_edge(m[1], m[0]));
    CHECK(inst.graph.find_edge(m[0], m[2]));
  }

  // r=4: the only admissible parameter pair is (d1,d2) = (4,3), whose chain
  // comparison fires exactly once (layer 7, q = 3), so each of the 64 walks
  // crosses one midpoint and spends 9 unit edges.
  auto big = dpres::gen_unweighted_hopset(4, 1);
  CHECK(big.meta["important_nodes"] == 6912);
  CHECK(big.graph.node_count() == 12678);
  CHECK(big.graph.edge_count() == 17676);
  REQUIRE(big.critical_paths.size() == 64);
  std::map<NodeId, std::array<NodeId, 3>> by_mid;
  for (const auto& m : big.midpoint_map) by_mid[m[0]] = m;
  for (const Path& p : big.critical_paths) {
    const auto& nodes = p.nodes();
    CHECK(nodes.size() == 10);
    CHECK(p.weight() == 9);
    CHECK(big.layer[nodes.front()] == 0);
    CHECK(big.layer[nodes.back()] == 8);
    std::size_t mids = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] < 6912) continue;
      ++mids;
      REQUIRE(i > 0);
      REQUIRE(i + 1 < nodes.size());
      auto it = by_mid.find(nodes[i]);
      REQUIRE(it != by_mid.end());
      CHECK(it->second[1] == nodes[i - 1]);
      CHECK(it->second[2] == nodes[i + 1]);
    }
    CHECK(mids == 1);
  }

  CHECK_THROWS_AS(dpres::gen_unweighted_hopset(3), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_unweighted_hopset(1), ArgumentError);
  CHECK_THROWS_AS(dpres::gen_unweighted_hopset(2, 0), ArgumentError);
}

TEST_CASE("instances survive the JSON round trip") {
  auto inst = dpres::gen_approx_hopset(4, Rational(2));
  auto back = dpres::instance_from_json(dpres::instance_to_json(inst));
  CHECK(back.family == inst.family);
  REQUIRE(back.graph.node_count() == inst.graph.node_count());
  REQUIRE(back.graph.edge_count() == inst.graph.edge_count());
  for (dpres::EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    const auto& a = inst.graph.edge(e);
    const auto& b = back.graph.edge(e);
    CHECK(a.tail == b.tail);
    CHECK(a.head == b.head);
    CHECK(a.weight == b.weight);
  }
  REQUIRE(back.demands.size() == inst.demands.size());
  for (std::size_t i = 0; i < inst.demands.size(); ++i) {
    CHECK(back.demands[i].source == inst.demands[i].source);
    CHECK(back.demands[i].target == inst.demands[i].target);
  }
  REQUIRE(back.critical_paths.size() == inst.critical_paths.size());
  for (std::size_t i = 0; i < inst.critical_paths.size(); ++i)
    CHECK(back.critical_paths[i].nodes() == inst.critical_paths[i].nodes());
  CHECK(back.layer == inst.layer);
  CHECK(back.meta == inst.meta);

  // Midpoint maps ride along for the chain-gadget family.
  auto chains = dpres::gen_unweighted_hopset(2, 1);
  auto cback = dpres::instance_from_json(dpres::instance_to_json(chains));
  CHECK(cback.midpoint_map == chains.midpoint_map);
  CHECK(cback.critical_paths.empty());

  // A bare graph is not an instance.
  CHECK_THROWS_AS(dpres::instance_from_json(dpres::graph_to_json(inst.graph)),
                  ArgumentError);
}

#pragma once

#include <unordered_set>
#include <vector>

#include "dpres/graph.hpp"

namespace dpres {

// Source-target pair whose distance a preserver must keep. source == target
// is legal (distance 0) and shows up in degenerate generator settings.
struct DemandPair {
  NodeId source;
  NodeId target;
  bool operator==(const DemandPair& o) const {
    return source == o.source && target == o.target;
  }
};

// A simple path validated against a host graph: consecutive nodes joined by
// an edge (respecting direction when the host is directed), no repeated
// node. Weight is computed once at construction. A single node is a valid
// path of weight 0.
class Path {
 public:
  Path() = default;

  static Path of(const Graph& g, std::vector<NodeId> nodes) {
    if (nodes.empty()) throw ArgumentError("empty node sequence is not a path");
    std::unordered_set<NodeId> seen;
    Weight w = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] >= g.node_count())
        throw ArgumentError("path node out of range");
      if (!seen.insert(nodes[i]).second)
        throw ArgumentError("path repeats node " + std::to_string(nodes[i]));
      if (i + 1 < nodes.size()) {
        auto e = g.find_edge(nodes[i], nodes[i + 1]);
        if (!e && !g.directed()) e = g.find_edge(nodes[i + 1], nodes[i]);
        if (!e)
          throw ArgumentError("missing edge (" + std::to_string(nodes[i]) +
                              "," + std::to_string(nodes[i + 1]) +
                              ") on path");
        w += g.edge(*e).weight;
      }
    }
    Path p;
    p.nodes_ = std::move(nodes);
    p.weight_ = std::move(w);
    return p;
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  NodeId source() const { return nodes_.front(); }
  NodeId target() const { return nodes_.back(); }
  // Number of edges.
  std::size_t length() const { return nodes_.size() - 1; }
  const Weight& weight() const { return weight_; }

  bool contains(NodeId v) const {
    return std::find(nodes_.begin(), nodes_.end(), v) != nodes_.end();
  }

  bool operator==(const Path& o) const { return nodes_ == o.nodes_; }

 private:
  std::vector<NodeId> nodes_;
  Weight weight_{0};
};

// Demands with their chosen paths over one host graph, plus the two flags
// downstream constructions branch on. Construction helpers in
// shortest_paths.hpp / reduction.hpp compute the flags honestly; nothing in
// the library sets them by assertion.
struct PathSystem {
  const Graph* graph = nullptr;
  std::vector<DemandPair> pairs;
  std::vector<Path> paths;  // aligned with pairs
  bool all_unique_shortest = false;
  bool pairwise_edge_disjoint = false;

  std::size_t size() const { return pairs.size(); }
};

}  // namespace dpres

#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpres/types.hpp"

namespace dpres {

struct Edge {
  NodeId tail;
  NodeId head;
  Weight weight;
};

// Directed or undirected weighted graph with immutable node count.
// Invariants enforced on every mutation: endpoints in [0, n), weight >= 0,
// no self-loops, no duplicate (tail, head) pair (unordered pair when
// undirected). Degree queries are O(1); adjacency is indexed by tail and by
// head so both traversal directions are cheap.
class Graph {
 public:
  Graph() : Graph(0, true) {}
  Graph(std::size_t n, bool directed) : n_(n), directed_(directed) {
    out_.resize(n);
    in_.resize(n);
  }

  bool directed() const { return directed_; }
  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  EdgeId add_edge(NodeId tail, NodeId head, Weight weight) {
    if (tail >= n_ || head >= n_)
      throw ArgumentError("edge endpoint out of range: (" +
                          std::to_string(tail) + "," + std::to_string(head) +
                          ") with n=" + std::to_string(n_));
    if (tail == head)
      throw ArgumentError("self-loop rejected at node " + std::to_string(tail));
    if (weight < 0)
      throw ArgumentError("negative weight on edge (" + std::to_string(tail) +
                          "," + std::to_string(head) + ")");
    const std::uint64_t k = key(tail, head);
    if (index_.count(k))
      throw ArgumentError("duplicate edge (" + std::to_string(tail) + "," +
                          std::to_string(head) + ")");
    const EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{tail, head, std::move(weight)});
    index_.emplace(k, id);
    out_[tail].push_back(id);
    if (directed_) {
      in_[head].push_back(id);
    } else {
      out_[head].push_back(id);  // incident list mirrors both endpoints
    }
    return id;
  }

  // Directed: edges leaving v. Undirected: all incident edges.
  const std::vector<EdgeId>& out_edges(NodeId v) const { return out_[v]; }
  // Directed: edges entering v. Undirected: same as out_edges.
  const std::vector<EdgeId>& in_edges(NodeId v) const {
    return directed_ ? in_[v] : out_[v];
  }

  std::size_t out_degree(NodeId v) const { return out_[v].size(); }
  std::size_t in_degree(NodeId v) const {
    return directed_ ? in_[v].size() : out_[v].size();
  }
  // Total degree: indeg + outdeg when directed, incident count when not.
  // Degree-threshold callers pick out_degree or degree per the property they
  // implement; both are exposed on purpose.
  std::size_t degree(NodeId v) const {
    return directed_ ? out_[v].size() + in_[v].size() : out_[v].size();
  }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const {
    if (u >= n_ || v >= n_ || u == v) return std::nullopt;
    auto it = index_.find(key(u, v));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v).has_value(); }

  // Endpoint of e opposite to `from`.
  NodeId other_end(EdgeId e, NodeId from) const {
    const Edge& ed = edges_[e];
    return ed.tail == from ? ed.head : ed.tail;
  }

  Graph transposed() const {
    if (!directed_) return *this;
    Graph t(n_, true);
    for (const Edge& e : edges_) t.add_edge(e.head, e.tail, e.weight);
    return t;
  }

  bool unit_weights() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.weight == 1; });
  }

  Weight total_weight() const {
    Weight s = 0;
    for (const Edge& e : edges_) s += e.weight;
    return s;
  }

 private:
  std::uint64_t key(NodeId u, NodeId v) const {
    NodeId a = u, b = v;
    if (!directed_ && a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::size_t n_;
  bool directed_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
};

}  // namespace dpres

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpres/graph.hpp"
#include "dpres/path.hpp"

namespace dpres {

using Json = nlohmann::ordered_json;  // insertion order == serialization order

// ---- graph <-> JSON -------------------------------------------------------
// {"directed": bool, "n": int, "edges": [[tail, head, "weight"], ...]}
// Weights are decimal strings so arbitrary-precision values survive the trip.
// Optional keys an instance may carry: "demands", "critical_paths", "meta".

inline Json graph_to_json(const Graph& g) {
  Json j;
  j["directed"] = g.directed();
  j["n"] = g.node_count();
  Json edges = Json::array();
  for (const Edge& e : g.edges())
    edges.push_back(Json::array({e.tail, e.head, e.weight.str()}));
  j["edges"] = std::move(edges);
  return j;
}

inline Weight weight_from_json(const Json& v) {
  try {
    if (v.is_string()) return Weight(v.get<std::string>());
    if (v.is_number_unsigned()) return Weight(v.get<std::uint64_t>());
    if (v.is_number_integer()) return Weight(v.get<std::int64_t>());
  } catch (const std::runtime_error& e) {
    throw ArgumentError(std::string("bad weight literal: ") + e.what());
  }
  throw ArgumentError("weight must be a decimal string or integer");
}

inline Graph graph_from_json(const Json& j) {
  if (!j.is_object()) throw ArgumentError("graph JSON must be an object");
  if (!j.contains("n") || !j["n"].is_number_unsigned())
    throw ArgumentError("graph JSON needs a non-negative integer \"n\"");
  if (!j.contains("directed") || !j["directed"].is_boolean())
    throw ArgumentError("graph JSON needs a boolean \"directed\"");
  Graph g(j["n"].get<std::size_t>(), j["directed"].get<bool>());
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw ArgumentError("\"edges\" must be an array");
    for (const Json& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3)
        throw ArgumentError("each edge must be [tail, head, weight]");
      if (!e[0].is_number_unsigned() || !e[1].is_number_unsigned())
        throw ArgumentError("edge endpoints must be non-negative integers");
      g.add_edge(e[0].get<NodeId>(), e[1].get<NodeId>(), weight_from_json(e[2]));
    }
  }
  return g;
}

inline Json demands_to_json(const std::vector<DemandPair>& demands) {
  Json arr = Json::array();
  for (const DemandPair& d : demands)
    arr.push_back(Json::array({d.source, d.target}));
  return arr;
}

inline std::vector<DemandPair> demands_from_json(const Json& arr,
                                                 std::size_t n) {
  if (!arr.is_array()) throw ArgumentError("\"demands\" must be an array");
  std::vector<DemandPair> out;
  for (const Json& d : arr) {
    if (!d.is_array() || d.size() != 2 || !d[0].is_number_unsigned() ||
        !d[1].is_number_unsigned())
      throw ArgumentError("each demand must be [source, target]");
    DemandPair p{d[0].get<NodeId>(), d[1].get<NodeId>()};
    if (p.source >= n || p.target >= n)
      throw ArgumentError("demand endpoint out of range");
    out.push_back(p);
  }
  return out;
}

// ---- distance matrices ----------------------------------------------------
// [[0, "5"], ["UNREACHABLE", "0"], ...] — the literal string marks
// unreachable pairs; everything else is a decimal string.

inline Json matrix_to_json(const std::vector<std::vector<Dist>>& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const Dist& d : row)
      r.push_back(d ? Json(d->str()) : Json("UNREACHABLE"));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<std::vector<Dist>> matrix_from_json(const Json& rows) {
  if (!rows.is_array()) throw ArgumentError("matrix must be an array of rows");
  std::vector<std::vector<Dist>> m;
  for (const Json& r : rows) {
    if (!r.is_array()) throw ArgumentError("matrix rows must be arrays");
    std::vector<Dist> row;
    for (const Json& v : r) {
      if (v.is_string() && v.get<std::string>() == "UNREACHABLE")
        row.push_back(std::nullopt);
      else
        row.push_back(weight_from_json(v));
    }
    m.push_back(std::move(row));
  }
  return m;
}

// ---- DIMACS ---------------------------------------------------------------
// Export is defined only for all-unit weights; anything else is refused so a
// lossy file can never masquerade as the instance.

inline std::string graph_to_dimacs(const Graph& g) {
  if (!g.unit_weights())
    throw ArgumentError("DIMACS export requires all edge weights == 1");
  std::ostringstream os;
  os << "p sp " << g.node_count() << " " << g.edge_count() << "\n";
  for (const Edge& e : g.edges())
    os << "a " << (e.tail + 1) << " " << (e.head + 1) << " 1\n";
  return os.str();
}

// ---- files ----------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write file: " + path);
  out << body;
}

// Parse failures surface the byte offset from the JSON parser; the CLI
// forwards that as part of its exit-2 diagnostics.
inline Json parse_json(const std::string& text) { return Json::parse(text); }

inline Json load_json_file(const std::string& path) {
  return parse_json(read_text_file(path));
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// ---- manifest fingerprints -------------------------------------------------
// FNV-1a 64-bit: a stable fingerprint for reproducibility bookkeeping.

inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace dpres

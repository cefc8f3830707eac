#pragma once

#include <cstddef>
#include <cstdint>

#include "dpres/graph.hpp"
#include "dpres/path.hpp"
#include "dpres/shortest_paths.hpp"

namespace dpres {

// Instance-level density measurements that drive the construction switches.
// `ell` and `avg_degree` are the ceiled integer ratios; `ell_hat` is kept as
// an exact rational so threshold comparisons can cross-multiply instead of
// rounding.
struct PreserverStats {
  std::size_t edge_count = 0;
  std::size_t ell = 0;         // ceil(|E| / p)
  std::size_t avg_degree = 0;  // ceil(|E| / n)
  Rational ell_hat = 0;        // (sum of chosen path lengths) / p
  std::uint64_t branching_events = 0;
};

inline PreserverStats compute_stats(const Graph& g, const PathSystem& sys) {
  PreserverStats s;
  s.edge_count = g.edge_count();
  const std::size_t p = sys.size();
  const std::size_t n = g.node_count();
  if (p > 0) {
    s.ell = static_cast<std::size_t>(
        ceil_div(Weight(s.edge_count), Weight(p)).convert_to<std::uint64_t>());
    Weight total_len = 0;
    for (const Path& pi : sys.paths) total_len += pi.length();
    s.ell_hat = Rational(total_len, Weight(p));
  }
  if (n > 0)
    s.avg_degree = static_cast<std::size_t>(
        ceil_div(Weight(s.edge_count), Weight(n)).convert_to<std::uint64_t>());
  s.branching_events = count_branching_events(g);
  return s;
}

}  // namespace dpres

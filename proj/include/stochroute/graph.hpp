#pragma once

#include <utility>
#include <vector>

#include "stochroute/instance.hpp"

namespace stochroute {

// delta+(S): arcs (i,j) with i in S, j not in S. Unknown vertex ids throw.
std::vector<std::pair<int, int>> out_arcs(const std::vector<int>& vertex_set,
                                          const Instance& inst);
// delta-(S): arcs (i,j) with i not in S, j in S.
std::vector<std::pair<int, int>> in_arcs(const std::vector<int>& vertex_set,
                                         const Instance& inst);

inline std::vector<std::pair<int, int>> out_arcs(int vertex, const Instance& inst) {
  return out_arcs(std::vector<int>{vertex}, inst);
}
inline std::vector<std::pair<int, int>> in_arcs(int vertex, const Instance& inst) {
  return in_arcs(std::vector<int>{vertex}, inst);
}

// Strongly connected components of a digraph given as adjacency lists
// (Tarjan). Components are emitted in a deterministic order and each
// component's vertices are sorted ascending.
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adjacency);

}  // namespace stochroute

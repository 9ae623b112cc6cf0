#pragma once

#include <vector>

#include "stochroute/instance.hpp"
#include "stochroute/lp.hpp"

namespace stochroute {

struct SubtourViolation {
  int vehicle;
  std::vector<int> subset;  // vertex set S, sorted
};

// Per vehicle, builds the digraph of selected arcs and returns every
// strongly connected component that carries arcs but excludes the home
// depot. Empty result means the selection is connected for every vehicle.
std::vector<SubtourViolation> separate_subtours(
    const Instance& inst, const std::vector<std::vector<uint8_t>>& x);

// Row sum_{(i,j) in SxS} x_ij^m <= |S|-1 over the given variable index map
// ([vehicle][V*V] -> variable index or -1).
LinearProgram::Row subtour_row(const Instance& inst, const SubtourViolation& v,
                               const std::vector<std::vector<int>>& x_idx);

}  // namespace stochroute

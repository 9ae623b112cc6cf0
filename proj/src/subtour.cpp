#include "stochroute/subtour.hpp"

#include "stochroute/graph.hpp"

namespace stochroute {

std::vector<SubtourViolation> separate_subtours(
    const Instance& inst, const std::vector<std::vector<uint8_t>>& x) {
  std::vector<SubtourViolation> out;
  const int V = inst.num_vertices();
  for (int m = 0; m < static_cast<int>(x.size()); ++m) {
    std::vector<std::vector<int>> adj(V);
    bool any = false;
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j)
        if (i != j && x[m][inst.arc(i, j)]) {
          adj[i].push_back(j);
          any = true;
        }
    if (!any) continue;
    for (auto& comp : strongly_connected_components(adj)) {
      if (comp.size() < 2) continue;  // no self-loops, so no single-vertex cycles
      bool has_home = false;
      for (int v : comp) has_home |= v == inst.home_depot();
      if (!has_home) out.push_back({m, std::move(comp)});
    }
  }
  return out;
}

LinearProgram::Row subtour_row(const Instance& inst, const SubtourViolation& v,
                               const std::vector<std::vector<int>>& x_idx) {
  LinearProgram::Row row;
  for (int i : v.subset)
    for (int j : v.subset) {
      if (i == j) continue;
      int idx = x_idx[v.vehicle][inst.arc(i, j)];
      if (idx >= 0) row.coef.emplace_back(idx, 1.0);
    }
  row.sense = LinearProgram::RowSense::le;
  row.rhs = static_cast<double>(v.subset.size()) - 1.0;
  row.name = "subtour_m" + std::to_string(v.vehicle);
  return row;
}

}  // namespace stochroute

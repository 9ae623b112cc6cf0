#include "stochroute/routes.hpp"

#include <algorithm>
#include <stdexcept>

namespace stochroute {

namespace {

// Hierholzer walk over one vehicle's selected arcs. Returns false and fills
// `stranded` when some selected arcs are unreachable from the home depot.
bool walk_from_depot(const Instance& inst, const std::vector<uint8_t>& x,
                     std::vector<int>* route, std::vector<int>* stranded) {
  const int V = inst.num_vertices();
  const int d0 = inst.home_depot();

  // successor lists, lowest target first for determinism
  std::vector<std::vector<int>> succ(V);
  int arc_count = 0;
  for (int i = 0; i < V; ++i)
    for (int j = 0; j < V; ++j)
      if (i != j && x[inst.arc(i, j)]) {
        succ[i].push_back(j);
        ++arc_count;
      }

  route->clear();
  if (arc_count == 0) return true;  // idle vehicle

  std::vector<std::vector<int>> remaining = succ;
  std::vector<int> circuit;
  // Hierholzer: initial walk from d0, then splice sub-cycles at repeats.
  std::vector<int> path{d0};
  std::vector<int> walk_stack{d0};
  circuit.clear();
  while (!walk_stack.empty()) {
    int v = walk_stack.back();
    if (!remaining[v].empty()) {
      int w = remaining[v].front();
      remaining[v].erase(remaining[v].begin());
      walk_stack.push_back(w);
    } else {
      circuit.push_back(v);
      walk_stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());

  int used = static_cast<int>(circuit.size()) - 1;
  if (used != arc_count) {
    // some component never reached: report its vertex set
    std::vector<uint8_t> leftover(V, 0);
    for (int i = 0; i < V; ++i)
      if (!remaining[i].empty()) {
        leftover[i] = 1;
        for (int j : remaining[i]) leftover[j] = 1;
      }
    stranded->clear();
    for (int v = 0; v < V; ++v)
      if (leftover[v]) stranded->push_back(v);
    return false;
  }
  *route = std::move(circuit);
  return true;
}

}  // namespace

RouteExtraction extract_routes(const Instance& inst,
                               const std::vector<std::vector<uint8_t>>& x) {
  RouteExtraction out;
  out.routes.routes.resize(inst.num_vehicles());
  for (int m = 0; m < inst.num_vehicles(); ++m) {
    if (!walk_from_depot(inst, x[m], &out.routes.routes[m], &out.stranded)) {
      out.ok = false;
      out.offending_vehicle = m;
      return out;
    }
  }
  return out;
}

std::vector<std::vector<uint8_t>> routes_to_arcs(const Instance& inst,
                                                 const RouteSet& routes) {
  const int V = inst.num_vertices();
  std::vector<std::vector<uint8_t>> x(routes.routes.size(),
                                      std::vector<uint8_t>(V * V, 0));
  for (size_t m = 0; m < routes.routes.size(); ++m) {
    const auto& r = routes.routes[m];
    if (r.empty()) continue;
    if (r.front() != inst.home_depot() || r.back() != inst.home_depot())
      throw std::invalid_argument("route must start and end at the home depot");
    for (size_t k = 0; k + 1 < r.size(); ++k) x[m][inst.arc(r[k], r[k + 1])] = 1;
  }
  return x;
}

FuelCheck route_fuel_check(const std::vector<int>& route, int vehicle,
                           const std::vector<std::vector<double>>& fuel,
                           const Instance& inst) {
  FuelCheck out;
  if (route.size() < 2) return out;  // idle: trivially feasible
  double segment = 0.0;
  for (size_t k = 0; k + 1 < route.size(); ++k) {
    segment += fuel[vehicle][inst.arc(route[k], route[k + 1])];
    if (inst.is_depot(route[k + 1])) {  // fuel resets at every depot visit
      out.segment_totals.push_back(segment);
      segment = 0.0;
    }
  }
  if (segment > 0.0) out.segment_totals.push_back(segment);  // open tail (defensive)
  for (double s : out.segment_totals) out.max_segment = std::max(out.max_segment, s);
  out.feasible = out.max_segment <= inst.fuel_capacity(vehicle) + 1e-9;
  return out;
}

}  // namespace stochroute

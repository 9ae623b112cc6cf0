#pragma once

#include <optional>
#include <vector>

#include "stochroute/instance.hpp"

namespace stochroute {

// Closed walks per vehicle, each beginning and ending at the home depot.
// An idle vehicle has an empty list (no walk at all).
struct RouteSet {
  std::vector<std::vector<int>> routes;  // [vehicle] -> vertex sequence

  bool vehicle_is_idle(int m) const { return routes[m].empty(); }
};

// First-stage decision in arc space: x (0/1 arc selection) and z (fuel flow),
// both per vehicle over the dense arc layout of Instance.
struct FirstStageSolution {
  std::vector<std::vector<uint8_t>> x;  // [vehicle][V*V]
  std::vector<std::vector<double>> z;   // [vehicle][V*V]
  double objective = 0.0;
};

// Result of decoding one vehicle's arc set into a closed walk. When the arcs
// do not form a single walk through the home depot, `stranded` carries the
// vertex set of one disconnected component (a separation certificate).
struct RouteExtraction {
  RouteSet routes;
  bool ok = true;
  int offending_vehicle = -1;
  std::vector<int> stranded;  // vertices of a component disconnected from d0
};

// Decodes per-vehicle arc indicators into closed walks from the home depot
// (Hierholzer splicing; vertices may repeat at depots, arcs may not).
// Preconditions: per-vehicle degree balance everywhere, unit degree at d0.
RouteExtraction extract_routes(const Instance& inst,
                               const std::vector<std::vector<uint8_t>>& x);

// Encodes routes back into arc indicators (inverse of extract_routes for
// route sets that are vertex-disjoint outside the home depot).
std::vector<std::vector<uint8_t>> routes_to_arcs(const Instance& inst, const RouteSet& routes);

struct FuelCheck {
  bool feasible = true;
  double max_segment = 0.0;              // largest depot-to-depot fuel total
  std::vector<double> segment_totals;    // per depot-to-depot segment
};

// Splits a closed walk at depot visits and sums fuel per segment; feasible
// iff every segment total is within the vehicle's capacity.
FuelCheck route_fuel_check(const std::vector<int>& route, int vehicle,
                           const std::vector<std::vector<double>>& fuel,
                           const Instance& inst);

}  // namespace stochroute

#pragma once

#include <cstdint>
#include <vector>

#include "stochroute/instance.hpp"

namespace stochroute {

// Exact single-vehicle route optimization by label-setting over
// (visited-POI set, last POI, fuel since refuel) states. Between consecutive
// stops the walk may thread up to two refueling sites (sufficient for the
// generator's quarter-point geometry, where three near-collinear sites do
// not exist). Arc prices are arbitrary nonnegative and independent of the
// burn matrix, which makes the same engine serve both route planning
// (price = burn = nominal fuel) and recourse repricing (price zero on
// first-stage arcs, realized fuel elsewhere).
class RouteDp {
 public:
  RouteDp(const Instance& inst, int vehicle, std::vector<double> price,
          std::vector<double> burn);

  struct Result {
    bool feasible = false;
    bool aborted = false;  // best-first label cap hit; result unusable
    double cost = 0.0;
    std::vector<int> route;  // closed walk, present when requested
  };

  // Exact sweep over all submasks of target_mask (memory ~ 2^n * n labels;
  // capped at n <= 18).
  Result solve(uint64_t target_mask, bool want_route) const;

  // Optimal closing cost for every POI subset in one sweep (+inf when
  // infeasible); index = POI bitmask.
  std::vector<double> all_mask_costs() const;

  // Cost-ordered search with dominance; exact, and fast when the optimum is
  // cheap relative to arc prices (recourse repair). Aborts after label_cap
  // pops.
  Result solve_best_first(uint64_t target_mask, int64_t label_cap = 4'000'000) const;

  // Optimal refuel threading for a fixed POI visiting order (any length).
  Result solve_fixed_order(const std::vector<int>& poi_ordinals, bool want_route) const;

 private:
  struct Hop {  // u -> (<=2 refuel stops) -> w
    double pre = 0.0;    // burn from u to the first stop (or to w directly)
    double post = -1.0;  // fuel level on arrival at w; -1 = no stop
    double cost = 0.0;
    int stops[2] = {-1, -1};
    int n_stops = 0;
  };
  struct Label {
    double cost = 0.0;
    double fuel = 0.0;
  };

  const Instance* inst_;
  int vehicle_;
  int n_;  // POI count
  double cap_;
  std::vector<double> price_, burn_;
  // hop endpoints: index 0 = home depot, 1..n = POIs
  std::vector<std::vector<std::vector<Hop>>> hops_;

  int hop_index(int poi_ordinal) const { return poi_ordinal + 1; }
  void build_hops();
  bool hop_applies(const Hop& h, double fuel_now, double* fuel_out) const;
};

}  // namespace stochroute

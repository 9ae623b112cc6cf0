#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stochroute/evaluator.hpp"
#include "stochroute/formulation_min.hpp"
#include "stochroute/subtour.hpp"
#include "test_support.hpp"

using namespace stochroute;
using stochroute::testing::tiny_instance;

TEST_CASE("one POI with enough fuel: only round trip") {
  auto inst = tiny_instance({{5, 0}}, {}, 12.0);
  auto res = solve_min_extensive(inst, nominal_scenario_set(inst));
  REQUIRE(res.status == LpSolution::Status::optimal);
  CHECK(res.objective == doctest::Approx(10.0));
  CHECK(res.routes.routes[0] == std::vector<int>{0, inst.poi_vertex(0), 0});
}

TEST_CASE("refuel depot threaded when the tank cannot do the round trip") {
  // direct round trip 20 > F = 16; threading (5,0) keeps segments at 15 and 5
  auto inst = tiny_instance({{10, 0}}, {{5, 0}}, 16.0);
  auto res = solve_min_extensive(inst, nominal_scenario_set(inst));
  REQUIRE(res.status == LpSolution::Status::optimal);
  CHECK(res.objective == doctest::Approx(20.0));
  bool visits_refuel = false;
  for (int v : res.routes.routes[0]) visits_refuel |= v == 1;
  CHECK(visits_refuel);
  auto fc = route_fuel_check(res.routes.routes[0], 0, {inst.nominal_fuel_matrix(0)}, inst);
  CHECK(fc.feasible);
}

TEST_CASE("three POIs, two vehicles match the exhaustive oracle") {
  for (uint64_t seed : {31ULL, 32ULL, 33ULL}) {
    GeneratorConfig gc;
    gc.n_pois = 3;
    gc.n_refuel = 1;
    gc.n_vehicles = 2;
    gc.capacity_multiplier = 3.0;
    gc.seed = seed;
    auto inst = generate_instance(gc);
    auto det = nominal_scenario_set(inst);
    auto mip = solve_min_extensive(inst, det);
    auto oracle = brute_force_optimum(inst, det, Formulation::min_cost);
    REQUIRE(mip.status == LpSolution::Status::optimal);
    CHECK(mip.objective == doctest::Approx(oracle.objective).epsilon(1e-9));
  }
}

TEST_CASE("recourse value") {
  auto inst = tiny_instance({{5, 0}}, {{3, 3}}, 12.0);
  auto det = solve_min_extensive(inst, nominal_scenario_set(inst));
  REQUIRE(det.status == LpSolution::Status::optimal);
  Scenario nominal = nominal_scenario_set(inst).scenarios[0];

  SUBCASE("replaying the first stage is optimal and free") {
    auto rv = recourse_value_min(inst, det.first_stage, nominal);
    REQUIRE(rv.status == LpSolution::Status::optimal);
    CHECK(rv.value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rv.y == det.first_stage.x);  // y replays x
  }
  SUBCASE("an inflated used arc forces a paid reroute") {
    Scenario bad = nominal;
    bad.fuel[0][inst.arc(0, inst.poi_vertex(0))] = 9.0;  // direct segment now 14 > 12
    auto rv = recourse_value_min(inst, det.first_stage, bad);
    REQUIRE(rv.status == LpSolution::Status::optimal);
    CHECK(rv.value > 1e-6);
    // rerouted plan stays connected
    CHECK(separate_subtours(inst, rv.y).empty());
  }
  SUBCASE("uniform scaling within capacity keeps recourse free") {
    Scenario mild = nominal;
    for (auto& f : mild.fuel[0]) f *= 1.1;
    auto rv = recourse_value_min(inst, det.first_stage, mild);
    CHECK(rv.value == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("recourse is free exactly when the segments stay feasible") {
    // at scale 2.0 the POI becomes unreachable altogether: the recourse MIP
    // reports infeasibility rather than a value
    for (double scale : {1.05, 1.15, 1.5, 2.0}) {
      Scenario s = nominal;
      for (auto& f : s.fuel[0]) f *= scale;
      auto extraction = extract_routes(inst, det.first_stage.x);
      REQUIRE(extraction.ok);
      auto fc = route_fuel_check(extraction.routes.routes[0], 0, s.fuel, inst);
      auto rv = recourse_value_min(inst, det.first_stage, s);
      if (rv.status != LpSolution::Status::optimal) {
        CHECK(scale == 2.0);
        continue;
      }
      if (fc.feasible) {
        CHECK(rv.value == doctest::Approx(0.0).epsilon(1e-9));
      } else {
        CHECK(rv.value > 1e-9);
      }
    }
  }
}

TEST_CASE("extensive form") {
  auto inst = tiny_instance({{5, 0}}, {{3, 3}}, 12.0);
  Scenario nominal = nominal_scenario_set(inst).scenarios[0];

  SUBCASE("single nominal scenario equals the deterministic optimum") {
    auto det = solve_min_extensive(inst, nominal_scenario_set(inst));
    CHECK(det.objective == doctest::Approx(10.0));
    CHECK(det.per_scenario_beta[0] == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("half-half mix prices the disruptive scenario at its recourse") {
    ScenarioSet ss;
    Scenario benign = nominal;
    benign.probability = 0.5;
    Scenario bad = benign;
    bad.fuel[0][inst.arc(0, inst.poi_vertex(0))] = 9.0;
    ss.scenarios = {benign, bad};
    auto res = solve_min_extensive(inst, ss);
    REQUIRE(res.status == LpSolution::Status::optimal);
    // re-evaluate the incumbent's two-stage value independently
    auto b0 = recourse_value_min(inst, res.first_stage, benign);
    auto b1 = recourse_value_min(inst, res.first_stage, bad);
    double re_eval =
        first_stage_cost(inst, res.first_stage) + 0.5 * b0.value + 0.5 * b1.value;
    CHECK(res.objective == doctest::Approx(re_eval).epsilon(1e-9));
    CHECK(res.per_scenario_beta[0] == doctest::Approx(b0.value).epsilon(1e-6));
    CHECK(res.per_scenario_beta[1] == doctest::Approx(b1.value).epsilon(1e-6));
  }
  SUBCASE("a zero-weight scenario is inert") {
    ScenarioSet ss;
    Scenario main = nominal;
    main.probability = 1.0;
    ss.scenarios = {main};
    auto one = solve_min_extensive(inst, ss);
    // adding a scenario with beta = 0 at the optimum and renormalizing keeps
    // the objective
    ScenarioSet two = ss;
    two.scenarios[0].probability = 0.5;
    Scenario mild = main;
    mild.probability = 0.5;
    for (auto& f : mild.fuel[0]) f *= 1.05;
    two.scenarios.push_back(mild);
    auto res = solve_min_extensive(inst, two);
    CHECK(res.objective == doctest::Approx(one.objective).epsilon(1e-6));
  }
  SUBCASE("size guard refuses oversized builds with a clear diagnostic") {
    ScenarioSet ss;
    for (int i = 0; i < 4; ++i) {
      Scenario s = nominal;
      s.probability = 0.25;
      ss.scenarios.push_back(s);
    }
    CHECK_THROWS_WITH_AS(build_extensive_min(inst, ss, CostSource::nominal_fuel, 10),
                         doctest::Contains("extensive form too large"),
                         std::invalid_argument);
  }
}

TEST_CASE("incumbents stay connected and fuel-feasible across scenarios") {
  GeneratorConfig gc;
  gc.n_pois = 4;
  gc.n_refuel = 2;
  gc.n_vehicles = 2;
  gc.capacity_multiplier = 3.0;
  gc.seed = 8;
  auto inst = generate_instance(gc);
  auto scens = testing::gamma_set(inst, 2, 12.0, 9);
  auto res = solve_min_extensive(inst, scens, CostSource::nominal_fuel, {}, 100000);
  if (res.status != LpSolution::Status::optimal) return;  // scenario made a POI unreachable
  CHECK(separate_subtours(inst, res.first_stage.x).empty());
  // nominal fuel accepts the first stage (cross-module property)
  auto extraction = extract_routes(inst, res.first_stage.x);
  REQUIRE(extraction.ok);
  std::vector<std::vector<double>> nominal;
  for (int m = 0; m < inst.num_vehicles(); ++m) nominal.push_back(inst.nominal_fuel_matrix(m));
  for (int m = 0; m < inst.num_vehicles(); ++m) {
    auto fc = route_fuel_check(extraction.routes.routes[m], m, nominal, inst);
    CHECK(fc.feasible);
  }
}

TEST_CASE("travel-cost objective switch") {
  auto inst = tiny_instance({{5, 0}}, {}, 12.0);
  // make the travel cost differ from fuel on purpose
  auto cost = std::vector<double>(inst.num_vertices() * inst.num_vertices(), 0.0);
  cost[inst.arc(0, inst.poi_vertex(0))] = 7.0;
  cost[inst.arc(inst.poi_vertex(0), 0)] = 7.0;
  inst.set_travel_cost(cost);
  auto fs = build_first_stage_min(inst, CostSource::travel_cost);
  auto sol = solve_mip(fs.lp);
  REQUIRE(sol.status == LpSolution::Status::optimal);
  CHECK(sol.objective == doctest::Approx(14.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stochroute/json_io.hpp"
#include "test_support.hpp"

using namespace stochroute;

TEST_CASE("generation is deterministic under a fixed seed") {
  GeneratorConfig gc;
  gc.n_pois = 10;
  gc.seed = 42;
  auto a = generate_instance(gc);
  auto b = generate_instance(gc);
  CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
}

TEST_CASE("capacity is exactly multiplier * lambda") {
  GeneratorConfig gc;
  gc.n_pois = 7;
  gc.capacity_multiplier = 2.75;
  gc.seed = 5;
  auto inst = generate_instance(gc);
  const auto& coords = inst.coordinates();
  double lambda = 0.0;
  for (int p = 0; p < inst.num_pois(); ++p) {
    int v = inst.poi_vertex(p);
    lambda = std::max(lambda, std::hypot(coords[v].x - coords[0].x, coords[v].y - coords[0].y));
  }
  for (int m = 0; m < inst.num_vehicles(); ++m)
    CHECK(inst.fuel_capacity(m) / lambda == doctest::Approx(2.75).epsilon(1e-12));
}

TEST_CASE("lambda recomputed from the emitted coordinates") {
  GeneratorConfig gc;
  gc.n_pois = 3;
  gc.grid_size = 100.0;
  gc.seed = 7;
  gc.capacity_multiplier = 1.0;  // capacity equals lambda directly
  auto inst = generate_instance(gc);
  auto j = instance_to_json(inst);
  double lambda = 0.0;
  double hx = j["home_depot"]["x"].get<double>(), hy = j["home_depot"]["y"].get<double>();
  for (const auto& p : j["pois"])
    lambda = std::max(lambda, std::hypot(p["x"].get<double>() - hx, p["y"].get<double>() - hy));
  CHECK(inst.fuel_capacity(0) == doctest::Approx(lambda).epsilon(1e-12));
}

TEST_CASE("fuel and cost are floor-rounded Euclidean distances") {
  GeneratorConfig gc;
  gc.n_pois = 5;
  gc.seed = 11;
  auto inst = generate_instance(gc);
  const auto& coords = inst.coordinates();
  for (int i = 0; i < inst.num_vertices(); ++i)
    for (int k = 0; k < inst.num_vertices(); ++k) {
      if (i == k) continue;
      double d = std::hypot(coords[i].x - coords[k].x, coords[i].y - coords[k].y);
      CHECK(inst.travel_cost(i, k) == std::floor(d));
      CHECK(inst.nominal_fuel(i, k, 0) == std::floor(d));
    }
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("config validation") {
  GeneratorConfig gc;
  gc.n_pois = 0;
  CHECK_THROWS_AS(generate_instance(gc), std::invalid_argument);
  gc.n_pois = 1;
  gc.grid_size = 0.0;
  CHECK_THROWS_AS(generate_instance(gc), std::invalid_argument);
}

TEST_CASE("beta sampling with zero spread reproduces the nominal exactly") {
  GeneratorConfig gc;
  gc.n_pois = 4;
  gc.seed = 2;
  auto inst = generate_instance(gc);
  ScenarioConfig sc;
  sc.n_scenarios = 5;
  sc.fuel_model = ScenarioConfig::FuelModel::beta;
  sc.spread = 0.0;
  sc.seed = 3;
  auto set = sample_fuel_scenarios(inst, sc);
  for (const auto& s : set.scenarios)
    for (int m = 0; m < inst.num_vehicles(); ++m)
      for (int a = 0; a < inst.num_vertices() * inst.num_vertices(); ++a)
        CHECK(s.fuel[m][a] == doctest::Approx(inst.nominal_fuel_matrix(m)[a]).epsilon(1e-12));
}

TEST_CASE("gamma sampling is mean-preserving") {
  GeneratorConfig gc;
  gc.n_pois = 2;
  gc.n_refuel = 0;
  gc.n_vehicles = 1;
  gc.seed = 9;
  auto inst = generate_instance(gc);

  SUBCASE("1000 scenarios put per-arc means within 5% of nominal") {
    ScenarioConfig sc;
    sc.n_scenarios = 1000;
    sc.fuel_model = ScenarioConfig::FuelModel::gamma;
    sc.gamma_shape = 4.0;
    sc.seed = 10;
    auto set = sample_fuel_scenarios(inst, sc);
    auto mean = set.mean_fuel();
    for (int i = 0; i < inst.num_vertices(); ++i)
      for (int k = 0; k < inst.num_vertices(); ++k) {
        if (i == k) continue;
        double nominal = inst.nominal_fuel(i, k, 0);
        if (nominal == 0.0) {
          CHECK(mean[0][inst.arc(i, k)] == 0.0);
        } else {
          CHECK(std::fabs(mean[0][inst.arc(i, k)] - nominal) / nominal < 0.05);
        }
      }
  }
  SUBCASE("10000 scenarios tighten the means to 2%") {
    ScenarioConfig sc;
    sc.n_scenarios = 10000;
    sc.fuel_model = ScenarioConfig::FuelModel::gamma;
    sc.gamma_shape = 4.0;
    sc.seed = 11;
    auto set = sample_fuel_scenarios(inst, sc);
    auto mean = set.mean_fuel();
    for (int i = 0; i < inst.num_vertices(); ++i)
      for (int k = 0; k < inst.num_vertices(); ++k) {
        if (i == k || inst.nominal_fuel(i, k, 0) == 0.0) continue;
        double nominal = inst.nominal_fuel(i, k, 0);
        CHECK(std::fabs(mean[0][inst.arc(i, k)] - nominal) / nominal < 0.02);
      }
  }
}

TEST_CASE("fuel scenarios: equal probabilities summing to one, repeatable") {
  GeneratorConfig gc;
  gc.n_pois = 3;
  gc.seed = 1;
  auto inst = generate_instance(gc);
  ScenarioConfig sc;
  sc.n_scenarios = 20;
  sc.seed = 6;
  auto a = sample_fuel_scenarios(inst, sc);
  auto b = sample_fuel_scenarios(inst, sc);
  CHECK(scenarios_to_json(inst, a).dump() == scenarios_to_json(inst, b).dump());
  double total = 0.0;
  for (const auto& s : a.scenarios) total += s.probability;
  CHECK(std::fabs(total - 1.0) < 1e-9);
  CHECK(validate_scenarios(inst, a).empty());
}

TEST_CASE("availability enumeration") {
  GeneratorConfig gc;
  gc.n_pois = 2;
  gc.n_vehicles = 3;
  gc.seed = 13;
  auto inst = generate_instance(gc);

  SUBCASE("degenerate Bernoullis give one scenario") {
    auto set = testing::availability_set(inst, {1.0, 1.0, 1.0});
    REQUIRE(set.size() == 1);
    CHECK(set[0].probability == doctest::Approx(1.0));
    CHECK(set.all_available());
  }
  SUBCASE("one fractional probability gives the two-atom law") {
    auto set = testing::availability_set(inst, {1.0, 1.0, 0.75});
    REQUIRE(set.size() == 2);
    CHECK(set[0].probability == doctest::Approx(0.75));
    CHECK(set[0].availability == std::vector<uint8_t>{1, 1, 1});
    CHECK(set[1].probability == doctest::Approx(0.25));
    CHECK(set[1].availability == std::vector<uint8_t>{1, 1, 0});
  }
  SUBCASE("two fair coins enumerate four quarters") {
    auto set = testing::availability_set(inst, {1.0, 0.5, 0.5});
    REQUIRE(set.size() == 4);
    for (const auto& s : set.scenarios) CHECK(s.probability == doctest::Approx(0.25));
  }
  SUBCASE("expected availability is exact") {
    auto set = testing::availability_set(inst, {1.0, 0.7, 0.3});
    std::vector<double> ealpha(3, 0.0);
    double total = 0.0;
    for (const auto& s : set.scenarios) {
      total += s.probability;
      for (int m = 0; m < 3; ++m) ealpha[m] += s.probability * s.availability[m];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ealpha[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ealpha[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(ealpha[2] == doctest::Approx(0.3).epsilon(1e-12));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stochroute/lshaped.hpp"
#include "stochroute/subtour.hpp"
#include "test_support.hpp"

using namespace stochroute;
using stochroute::testing::availability_set;
using stochroute::testing::tiny_instance;

TEST_CASE("subtour separation") {
  auto inst = tiny_instance({{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}}, {{0, 2}}, 100.0, 2);
  const int V = inst.num_vertices();
  int d0 = 0, d1 = 1;
  int t1 = inst.poi_vertex(0), t2 = inst.poi_vertex(1), t3 = inst.poi_vertex(2),
      t4 = inst.poi_vertex(3), t5 = inst.poi_vertex(4);

  SUBCASE("a single tour through the depot is clean") {
    std::vector<std::vector<uint8_t>> x(2, std::vector<uint8_t>(V * V, 0));
    x[0][inst.arc(d0, t1)] = x[0][inst.arc(t1, t2)] = x[0][inst.arc(t2, d0)] = 1;
    CHECK(separate_subtours(inst, x).empty());
  }
  SUBCASE("textbook off-depot 2-cycle is detected for the right vehicle") {
    std::vector<std::vector<uint8_t>> x(2, std::vector<uint8_t>(V * V, 0));
    x[1][inst.arc(d0, t1)] = x[1][inst.arc(t1, d0)] = 1;
    x[1][inst.arc(t2, t3)] = x[1][inst.arc(t3, t2)] = 1;
    auto v = separate_subtours(inst, x);
    REQUIRE(v.size() == 1);
    CHECK(v[0].vehicle == 1);
    CHECK(v[0].subset == std::vector<int>{t2, t3});
  }
  SUBCASE("two disjoint off-depot cycles are both returned in one call") {
    std::vector<std::vector<uint8_t>> x(2, std::vector<uint8_t>(V * V, 0));
    x[0][inst.arc(d0, t1)] = x[0][inst.arc(t1, d0)] = 1;
    x[0][inst.arc(t2, t3)] = x[0][inst.arc(t3, t2)] = 1;
    x[0][inst.arc(t4, t5)] = x[0][inst.arc(t5, t4)] = 1;
    auto v = separate_subtours(inst, x);
    REQUIRE(v.size() == 2);
    CHECK(v[0].subset == std::vector<int>{t2, t3});
    CHECK(v[1].subset == std::vector<int>{t4, t5});
  }
  SUBCASE("cycles through a refueling site still violate connectivity") {
    std::vector<std::vector<uint8_t>> x(2, std::vector<uint8_t>(V * V, 0));
    x[0][inst.arc(t1, d1)] = x[0][inst.arc(d1, t1)] = 1;
    auto v = separate_subtours(inst, x);
    REQUIRE(v.size() == 1);
    CHECK(v[0].subset == std::vector<int>{d1, t1});
  }
  SUBCASE("the emitted row forbids exactly the detected set") {
    std::vector<std::vector<uint8_t>> x(2, std::vector<uint8_t>(V * V, 0));
    x[0][inst.arc(t2, t3)] = x[0][inst.arc(t3, t2)] = 1;
    auto v = separate_subtours(inst, x);
    REQUIRE(v.size() == 1);
    std::vector<std::vector<int>> x_idx(2, std::vector<int>(V * V, -1));
    int next = 0;
    for (int m = 0; m < 2; ++m)
      for (int a = 0; a < V * V; ++a)
        if (a / V != a % V) x_idx[m][a] = next++;
    auto row = subtour_row(inst, v[0], x_idx);
    CHECK(row.rhs == doctest::Approx(1.0));  // |S| - 1
    CHECK(row.coef.size() == 2);             // both arcs inside S for that vehicle
    CHECK(row.sense == LinearProgram::RowSense::le);
  }
}

TEST_CASE("single cut assembly") {
  auto inst = tiny_instance({{4, 0}, {0, 5}}, {{2, 2}}, 25.0, 2);
  auto master = build_first_stage_profit(inst, ProfitVariant::ts);
  int theta = master.lp.add_var(-100.0, 0.0, 1.0, false, "theta");
  auto det = solve_profit_deterministic(inst, ProfitVariant::ts);
  REQUIRE(det.status == LpSolution::Status::optimal);
  std::vector<std::vector<double>> at(det.first_stage.x.size());
  for (size_t m = 0; m < at.size(); ++m)
    at[m].assign(det.first_stage.x[m].begin(), det.first_stage.x[m].end());

  auto scenario_with = [&](std::vector<uint8_t> avail, double p) {
    Scenario s;
    s.probability = p;
    s.availability = std::move(avail);
    s.fuel = {inst.nominal_fuel_matrix(0), inst.nominal_fuel_matrix(1)};
    return s;
  };

  SUBCASE("all-available scenario yields the zero surface") {
    ScenarioSet set;
    set.scenarios = {scenario_with({1, 1}, 1.0)};
    std::vector<ProfitRecourse> recs;
    std::vector<LpSolution> sols;
    recs.push_back(build_recourse_profit(inst, det.first_stage, set[0]));
    sols.push_back(solve_lp(recs[0].lp));
    auto cut = make_single_cut(inst, set, recs, sols, master, theta, 1, at, true);
    // theta <= 0: the only nonzero coefficient is theta's
    CHECK(cut.row.rhs == doctest::Approx(0.0).epsilon(1e-9));
    for (const auto& [j, c] : cut.row.coef) {
      if (j == theta)
        CHECK(c == doctest::Approx(1.0));
      else
        CHECK(std::fabs(c) < 1e-9);
    }
  }
  SUBCASE("two equiprobable scenarios average the single-scenario cuts") {
    ScenarioSet both;
    both.scenarios = {scenario_with({1, 1}, 0.5), scenario_with({1, 0}, 0.5)};
    std::vector<ProfitRecourse> recs;
    std::vector<LpSolution> sols;
    for (const auto& s : both.scenarios) {
      recs.push_back(build_recourse_profit(inst, det.first_stage, s));
      sols.push_back(solve_lp(recs.back().lp));
    }
    auto combined = make_single_cut(inst, both, recs, sols, master, theta, 1, at, true);

    auto single = [&](int idx) {
      ScenarioSet one;
      one.scenarios = {both.scenarios[idx]};
      one.scenarios[0].probability = 1.0;
      std::vector<ProfitRecourse> r;
      std::vector<LpSolution> so;
      r.push_back(build_recourse_profit(inst, det.first_stage, one[0]));
      so.push_back(solve_lp(r[0].lp));
      return make_single_cut(inst, one, r, so, master, theta, 1, at, true);
    };
    auto a = single(0);
    auto b = single(1);
    // compare coefficient maps: combined = (a + b) / 2
    std::vector<double> ca(master.lp.num_vars() + 1, 0.0), cb = ca, cc = ca;
    for (const auto& [j, c] : a.row.coef) ca[j] = c;
    for (const auto& [j, c] : b.row.coef) cb[j] = c;
    for (const auto& [j, c] : combined.row.coef) cc[j] = c;
    for (int j = 0; j < master.lp.num_vars(); ++j)
      if (j != theta) CHECK(cc[j] == doctest::Approx(0.5 * (ca[j] + cb[j])).epsilon(1e-9));
    CHECK(combined.row.rhs == doctest::Approx(0.5 * (a.row.rhs + b.row.rhs)).epsilon(1e-9));
  }
  SUBCASE("a non-optimal scenario solution is a hard error") {
    ScenarioSet set;
    set.scenarios = {scenario_with({1, 1}, 1.0)};
    std::vector<ProfitRecourse> recs;
    std::vector<LpSolution> sols;
    recs.push_back(build_recourse_profit(inst, det.first_stage, set[0]));
    sols.emplace_back();  // default: infeasible status
    CHECK_THROWS_AS(make_single_cut(inst, set, recs, sols, master, theta, 1, at, false),
                    std::runtime_error);
  }
}

TEST_CASE("decomposition runs") {
  GeneratorConfig gc;
  gc.n_pois = 4;
  gc.n_refuel = 1;
  gc.n_vehicles = 2;
  gc.capacity_multiplier = 2.5;
  gc.seed = 7;
  auto inst = generate_instance(gc);

  SUBCASE("certain availability converges immediately to the deterministic optimum") {
    auto res = run_lshaped(inst, availability_set(inst, {1.0, 1.0}), ProfitVariant::ts);
    REQUIRE(res.converged);
    CHECK(res.trace.size() <= 2);
    auto det = solve_profit_deterministic(inst, ProfitVariant::ts);
    CHECK(res.solve.objective == doctest::Approx(det.objective).epsilon(1e-9));
    for (double b : res.solve.per_scenario_beta) CHECK(b == doctest::Approx(0.0));
  }
  SUBCASE("uncertain availability matches the extensive form") {
    LShapedOptions lo;
    lo.eps = 1e-9;
    auto scens = availability_set(inst, {1.0, 0.5});
    auto res = run_lshaped(inst, scens, ProfitVariant::ts, lo);
    REQUIRE(res.converged);
    auto ext = solve_profit_extensive(inst, scens, ProfitVariant::ts, {}, 100000);
    CHECK(res.solve.objective == doctest::Approx(ext.objective).epsilon(1e-6));
    // bound trace is monotone with lb <= ub
    for (size_t k = 1; k < res.trace.size(); ++k) {
      CHECK(res.trace[k].lb >= res.trace[k - 1].lb - 1e-9);
      CHECK(res.trace[k].ub <= res.trace[k - 1].ub + 1e-9);
      CHECK(res.trace[k].lb <= res.trace[k].ub + 1e-6);
    }
    // the incumbent is subtour-clean
    CHECK(separate_subtours(inst, res.solve.first_stage.x).empty());
    // theta matches the expected recourse at convergence
    CHECK(std::fabs(res.ub - res.lb) <= 1e-9 + 1e-9 * std::fabs(res.ub));
  }
  SUBCASE("looser epsilon never needs more iterations") {
    auto scens = availability_set(inst, {1.0, 0.5});
    LShapedOptions tight;
    tight.eps = 1e-9;
    LShapedOptions loose;
    loose.eps = 0.1;
    auto a = run_lshaped(inst, scens, ProfitVariant::ts, tight);
    auto b = run_lshaped(inst, scens, ProfitVariant::ts, loose);
    CHECK(b.trace.size() <= a.trace.size());
  }
  SUBCASE("bounds trace CSV has the documented header") {
    auto res = run_lshaped(inst, availability_set(inst, {1.0, 0.75}), ProfitVariant::ts);
    auto csv = bounds_trace_csv(res.trace);
    CHECK(csv.rfind("iteration,lb,ub,gap,seconds\n", 0) == 0);
  }
}

TEST_CASE("lexicographic tie-break zeroes a surely-missing vehicle") {
  GeneratorConfig gc;
  gc.n_pois = 5;
  gc.n_refuel = 2;
  gc.n_vehicles = 2;
  gc.capacity_multiplier = 2.75;
  gc.seed = 15;
  auto inst = generate_instance(gc);
  auto res = run_lshaped_lex_min_vehicle(inst, availability_set(inst, {1.0, 0.0}),
                                         ProfitVariant::ts, 1);
  REQUIRE(res.converged);
  CHECK(res.solve.vehicle_profit[1] == 0.0);
  // the tie-break never costs objective value
  auto plain = run_lshaped(inst, availability_set(inst, {1.0, 0.0}), ProfitVariant::ts);
  CHECK(res.solve.objective == doctest::Approx(plain.solve.objective).epsilon(1e-6));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "stochroute/graph.hpp"
#include "stochroute/lp.hpp"
#include "stochroute/mip.hpp"

using namespace stochroute;

namespace {

// dual objective including bound contributions via reduced costs
double dual_value(const LinearProgram& lp, const LpSolution& s) {
  double v = 0.0;
  for (int r = 0; r < lp.num_rows(); ++r) v += s.duals[r] * lp.rows[r].rhs;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (std::fabs(s.reduced_costs[j]) > 1e-9) v += s.reduced_costs[j] * s.x[j];
  return v;
}

double row_activity(const LinearProgram::Row& row, const std::vector<double>& x) {
  double act = 0.0;
  for (const auto& [j, c] : row.coef) act += c * x[j];
  return act;
}

}  // namespace

TEST_CASE("single-constraint LP with its dual") {
  LinearProgram lp;
  lp.sense = LinearProgram::Sense::maximize;
  lp.add_var(0, kInf, 1.0, false, "x");
  lp.add_row({{{0, 1.0}}, LinearProgram::RowSense::le, 5.0, "cap"});
  auto s = solve_lp(lp);
  REQUIRE(s.status == LpSolution::Status::optimal);
  CHECK(s.x[0] == doctest::Approx(5.0));
  CHECK(s.duals[0] == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(5.0));
}

TEST_CASE("constant objective over a box") {
  LinearProgram lp;
  lp.add_var(0, 1, 0.0, false, "x");
  auto s = solve_lp(lp);
  REQUIRE(s.status == LpSolution::Status::optimal);
  CHECK(s.objective == 0.0);
}

TEST_CASE("statuses: infeasible and unbounded") {
  {
    LinearProgram lp;
    lp.add_var(0, 1, 1.0, false);
    lp.add_row({{{0, 1.0}}, LinearProgram::RowSense::ge, 2.0, ""});
    CHECK(solve_lp(lp).status == LpSolution::Status::infeasible);
  }
  {
    LinearProgram lp;
    lp.sense = LinearProgram::Sense::maximize;
    lp.add_var(0, kInf, 1.0, false);
    CHECK(solve_lp(lp).status == LpSolution::Status::unbounded);
  }
}

TEST_CASE("integrality flags are rejected by solve_lp") {
  LinearProgram lp;
  lp.add_var(0, 1, 1.0, true);
  CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
}

TEST_CASE("transportation LP matches vertex enumeration") {
  // min 4a+6b+9c; a+b >= 5; b+c >= 3; 2a+c <= 8; all vars in [0, 10]
  LinearProgram lp;
  lp.add_var(0, 10, 4.0, false, "a");
  lp.add_var(0, 10, 6.0, false, "b");
  lp.add_var(0, 10, 9.0, false, "c");
  lp.add_row({{{0, 1.0}, {1, 1.0}}, LinearProgram::RowSense::ge, 5.0, ""});
  lp.add_row({{{1, 1.0}, {2, 1.0}}, LinearProgram::RowSense::ge, 3.0, ""});
  lp.add_row({{{0, 2.0}, {2, 1.0}}, LinearProgram::RowSense::le, 8.0, ""});
  auto s = solve_lp(lp);
  REQUIRE(s.status == LpSolution::Status::optimal);

  // brute force: enumerate basic feasible points on a fine grid of active
  // constraint triples via direct 3x3 solves
  std::vector<std::array<double, 4>> planes = {
      {1, 1, 0, 5}, {0, 1, 1, 3}, {2, 0, 1, 8},
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0},
      {1, 0, 0, 10}, {0, 1, 0, 10}, {0, 0, 1, 10}};
  double best = kInf;
  int P = static_cast<int>(planes.size());
  for (int i = 0; i < P; ++i)
    for (int j = i + 1; j < P; ++j)
      for (int k = j + 1; k < P; ++k) {
        double A[3][3] = {{planes[i][0], planes[i][1], planes[i][2]},
                          {planes[j][0], planes[j][1], planes[j][2]},
                          {planes[k][0], planes[k][1], planes[k][2]}};
        double b[3] = {planes[i][3], planes[j][3], planes[k][3]};
        double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                     A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                     A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
        if (std::fabs(det) < 1e-9) continue;
        auto solve3 = [&](int col) {
          double M[3][3];
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) M[r][c] = c == col ? b[r] : A[r][c];
          return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                  M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                  M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
                 det;
        };
        double x0 = solve3(0), x1 = solve3(1), x2 = solve3(2);
        bool feas = x0 >= -1e-9 && x1 >= -1e-9 && x2 >= -1e-9 && x0 <= 10 + 1e-9 &&
                    x1 <= 10 + 1e-9 && x2 <= 10 + 1e-9 && x0 + x1 >= 5 - 1e-9 &&
                    x1 + x2 >= 3 - 1e-9 && 2 * x0 + x2 <= 8 + 1e-9;
        if (feas) best = std::min(best, 4 * x0 + 6 * x1 + 9 * x2);
      }
  CHECK(s.objective == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("strong duality and complementary slackness on random LPs") {
  std::mt19937_64 rng(2024);
  auto urand = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  int optimal = 0;
  for (int t = 0; t < 150; ++t) {
    int n = 1 + static_cast<int>(rng() % 10), m = 1 + static_cast<int>(rng() % 8);
    LinearProgram lp;
    lp.sense = rng() & 1 ? LinearProgram::Sense::maximize : LinearProgram::Sense::minimize;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      double lo = rng() % 4 == 0 ? -kInf : urand(-4, 0);
      double hi = rng() % 4 == 0 ? kInf : urand(0.5, 5);
      lp.add_var(lo, hi, urand(-3, 3), false);
      x0[j] = urand(std::isinf(lo) ? -2.0 : lo, std::isinf(hi) ? 2.0 : hi);
    }
    for (int r = 0; r < m; ++r) {
      LinearProgram::Row row;
      double act = 0;
      for (int j = 0; j < n; ++j) {
        if (rng() % 3 == 0) continue;
        double c = urand(-4, 4);
        row.coef.emplace_back(j, c);
        act += c * x0[j];
      }
      int s3 = static_cast<int>(rng() % 3);
      row.sense = s3 == 0 ? LinearProgram::RowSense::le
                          : s3 == 1 ? LinearProgram::RowSense::ge
                                    : LinearProgram::RowSense::eq;
      row.rhs = row.sense == LinearProgram::RowSense::le   ? act + urand(0, 3)
                : row.sense == LinearProgram::RowSense::ge ? act - urand(0, 3)
                                                           : act;
      lp.add_row(row);
    }
    auto s = solve_lp(lp);
    REQUIRE((s.status == LpSolution::Status::optimal ||
             s.status == LpSolution::Status::unbounded));
    if (s.status != LpSolution::Status::optimal) continue;
    ++optimal;
    // primal feasibility within 1e-7
    for (int r = 0; r < m; ++r) {
      double act = row_activity(lp.rows[r], s.x);
      if (lp.rows[r].sense == LinearProgram::RowSense::le) CHECK(act <= lp.rows[r].rhs + 1e-7);
      if (lp.rows[r].sense == LinearProgram::RowSense::ge) CHECK(act >= lp.rows[r].rhs - 1e-7);
      if (lp.rows[r].sense == LinearProgram::RowSense::eq)
        CHECK(std::fabs(act - lp.rows[r].rhs) < 1e-7);
    }
    // strong duality within 1e-6
    CHECK(std::fabs(s.objective - dual_value(lp, s)) < 1e-6);
    // complementary slackness within 1e-6
    for (int r = 0; r < m; ++r) {
      double slack = lp.rows[r].rhs - row_activity(lp.rows[r], s.x);
      CHECK(std::fabs(s.duals[r] * slack) < 1e-6);
    }
  }
  CHECK(optimal > 60);  // most random programs are bounded
}

TEST_CASE("deterministic resolves") {
  LinearProgram lp;
  lp.sense = LinearProgram::Sense::maximize;
  lp.add_var(0, 4, 2.0, false);
  lp.add_var(0, 4, 1.0, false);
  lp.add_row({{{0, 1.0}, {1, 2.0}}, LinearProgram::RowSense::le, 6.0, ""});
  auto a = solve_lp(lp);
  auto b = solve_lp(lp);
  CHECK(a.x == b.x);
  CHECK(a.duals == b.duals);
}

TEST_CASE("binary knapsack") {
  LinearProgram lp;
  lp.sense = LinearProgram::Sense::maximize;
  lp.add_var(0, 1, 3.0, true, "a");
  lp.add_var(0, 1, 2.0, true, "b");
  lp.add_row({{{0, 2.0}, {1, 2.0}}, LinearProgram::RowSense::le, 3.0, ""});
  auto s = solve_mip(lp);
  REQUIRE(s.status == LpSolution::Status::optimal);
  CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("integral polytope solves at the root") {
  // assignment-like system is integral: no branching needed
  LinearProgram lp;
  lp.sense = LinearProgram::Sense::maximize;
  for (int j = 0; j < 4; ++j) lp.add_var(0, 1, 1.0 + j, true);
  lp.add_row({{{0, 1.0}, {1, 1.0}}, LinearProgram::RowSense::le, 1.0, ""});
  lp.add_row({{{2, 1.0}, {3, 1.0}}, LinearProgram::RowSense::le, 1.0, ""});
  auto s = solve_mip(lp);
  REQUIRE(s.status == LpSolution::Status::optimal);
  CHECK(s.objective == doctest::Approx(6.0));
  CHECK(s.nodes == 1);
  auto lp_relax = lp;
  for (auto& v : lp_relax.vars) v.integer = false;
  CHECK(solve_lp(lp_relax).objective == doctest::Approx(s.objective));
}

TEST_CASE("asymmetric 5-city tour with a lazy subtour hook") {
  const int N = 5;
  std::mt19937_64 rng(7);
  std::vector<std::vector<double>> d(N, std::vector<double>(N, 0.0));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) d[i][j] = 1.0 + static_cast<double>(rng() % 97);

  LinearProgram lp;
  std::vector<std::vector<int>> var(N, std::vector<int>(N, -1));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) var[i][j] = lp.add_var(0, 1, d[i][j], true);
  for (int i = 0; i < N; ++i) {
    LinearProgram::Row out_row, in_row;
    for (int j = 0; j < N; ++j)
      if (i != j) {
        out_row.coef.emplace_back(var[i][j], 1.0);
        in_row.coef.emplace_back(var[j][i], 1.0);
      }
    out_row.sense = in_row.sense = LinearProgram::RowSense::eq;
    out_row.rhs = in_row.rhs = 1.0;
    lp.add_row(out_row);
    lp.add_row(in_row);
  }
  int hook_rows = 0;
  LazyHook hook = [&](const std::vector<double>& x) {
    std::vector<std::vector<int>> adj(N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j && x[var[i][j]] > 0.5) adj[i].push_back(j);
    std::vector<LinearProgram::Row> rows;
    for (auto& comp : strongly_connected_components(adj)) {
      if (comp.size() < 2 || comp.size() == N) continue;
      LinearProgram::Row row;
      for (int i : comp)
        for (int j : comp)
          if (i != j) row.coef.emplace_back(var[i][j], 1.0);
      row.sense = LinearProgram::RowSense::le;
      row.rhs = static_cast<double>(comp.size()) - 1.0;
      rows.push_back(row);
      ++hook_rows;
    }
    return rows;
  };
  auto s = solve_mip(lp, hook);
  REQUIRE(s.status == LpSolution::Status::optimal);

  // brute force over all (N-1)! tours
  std::vector<int> perm{1, 2, 3, 4};
  double best = kInf;
  do {
    double c = d[0][perm[0]];
    for (int k = 0; k + 1 < N - 1; ++k) c += d[perm[k]][perm[k + 1]];
    c += d[perm[N - 2]][0];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(s.objective == doctest::Approx(best));

  // incumbents satisfy every hook row at termination: the winner is one tour
  std::vector<std::vector<int>> adj(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j && s.x[var[i][j]] > 0.5) adj[i].push_back(j);
  auto comps = strongly_connected_components(adj);
  CHECK(comps.size() == 1);
}

TEST_CASE("branch and bound matches exhaustive enumeration") {
  std::mt19937_64 rng(99);
  auto urand = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int t = 0; t < 60; ++t) {
    int n = 2 + static_cast<int>(rng() % 11), m = 1 + static_cast<int>(rng() % 5);
    LinearProgram lp;
    lp.sense = rng() & 1 ? LinearProgram::Sense::maximize : LinearProgram::Sense::minimize;
    for (int j = 0; j < n; ++j) lp.add_var(0, 1, std::floor(urand(-5, 6)), true);
    std::vector<int> x0(n);
    for (int j = 0; j < n; ++j) x0[j] = static_cast<int>(rng() & 1);
    for (int r = 0; r < m; ++r) {
      LinearProgram::Row row;
      double act = 0;
      for (int j = 0; j < n; ++j) {
        if (rng() % 3 == 0) continue;
        double c = std::floor(urand(-4, 5));
        row.coef.emplace_back(j, c);
        act += c * x0[j];
      }
      row.sense = rng() & 1 ? LinearProgram::RowSense::le : LinearProgram::RowSense::ge;
      row.rhs = row.sense == LinearProgram::RowSense::le
                    ? act + static_cast<double>(rng() % 3)
                    : act - static_cast<double>(rng() % 3);
      lp.add_row(row);
    }
    auto s = solve_mip(lp);
    double best = lp.sense == LinearProgram::Sense::maximize ? -kInf : kInf;
    for (int mask = 0; mask < (1 << n); ++mask) {
      bool feas = true;
      for (int r = 0; r < m && feas; ++r) {
        double act = 0;
        for (const auto& [j, c] : lp.rows[r].coef) act += c * ((mask >> j) & 1);
        feas = lp.rows[r].sense == LinearProgram::RowSense::le ? act <= lp.rows[r].rhs + 1e-9
                                                               : act >= lp.rows[r].rhs - 1e-9;
      }
      if (!feas) continue;
      double obj = 0;
      for (int j = 0; j < n; ++j) obj += lp.vars[j].obj * ((mask >> j) & 1);
      best = lp.sense == LinearProgram::Sense::maximize ? std::max(best, obj)
                                                        : std::min(best, obj);
    }
    REQUIRE(s.status == LpSolution::Status::optimal);
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-9));
    CHECK(s.best_bound == doctest::Approx(best).epsilon(1e-9));  // proven at optimality
  }
}

TEST_CASE("warm incumbent is honored") {
  LinearProgram lp;
  lp.sense = LinearProgram::Sense::maximize;
  lp.add_var(0, 1, 3.0, true);
  lp.add_var(0, 1, 2.0, true);
  lp.add_row({{{0, 2.0}, {1, 2.0}}, LinearProgram::RowSense::le, 3.0, ""});
  MipOptions mo;
  mo.warm_start = {1.0, 0.0};
  auto s = solve_mip(lp, nullptr, mo);
  CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("LP text format carries 12 significant digits") {
  LinearProgram lp;
  lp.sense = LinearProgram::Sense::minimize;
  lp.add_var(0, 1.5, 1.0 / 3.0, false, "alpha");
  lp.add_var(-kInf, kInf, -2.0, true, "beta");
  lp.add_row({{{0, 0.123456789012}, {1, -1.0}}, LinearProgram::RowSense::le, 7.25, "r0"});
  auto text = write_lp_format(lp, "sample");
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("0.123456789012") != std::string::npos);
  CHECK(text.find("0.333333333333") != std::string::npos);
  CHECK(text.find("Generals") != std::string::npos);
  CHECK(text.find("alpha") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

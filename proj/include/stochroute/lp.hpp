#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace stochroute {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse linear program with bounded variables. Rows reference variables by
// index; variable bounds are handled natively by the solver (they never
// become rows).
struct LinearProgram {
  enum class Sense { minimize, maximize };
  enum class RowSense : char { le = 'L', eq = 'E', ge = 'G' };

  struct Variable {
    double lo = 0.0;
    double hi = kInf;
    double obj = 0.0;
    bool integer = false;
    std::string name;
  };

  struct Row {
    std::vector<std::pair<int, double>> coef;  // (variable index, coefficient)
    RowSense sense = RowSense::le;
    double rhs = 0.0;
    std::string name;
  };

  Sense sense = Sense::minimize;
  std::vector<Variable> vars;
  std::vector<Row> rows;

  int add_var(double lo, double hi, double obj, bool integer, std::string name = {}) {
    vars.push_back({lo, hi, obj, integer, std::move(name)});
    return static_cast<int>(vars.size()) - 1;
  }
  int add_row(Row row) {
    rows.push_back(std::move(row));
    return static_cast<int>(rows.size()) - 1;
  }
  int num_vars() const { return static_cast<int>(vars.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
};

// Solution report for LP and MIP solves.
//
// Dual convention (user objective space, strong duality holds as
//   objective = sum_r dual_r * rhs_r + sum_{j nonbasic at bound} rc_j * x_j):
// for a maximization, the dual of a binding <= row is nonnegative; signs
// flip for minimization. Reduced costs follow the same convention.
struct LpSolution {
  enum class Status { optimal, infeasible, unbounded, feasible, time_limit, iteration_limit };

  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;          // per row (LP solves only)
  std::vector<double> reduced_costs;  // per variable (LP solves only)

  // MIP extras
  double best_bound = 0.0;
  double gap = 0.0;
  int64_t nodes = 0;
  bool hit_time_limit = false;

  bool has_solution() const {
    return status == Status::optimal || status == Status::feasible;
  }
};

// Simplex solve of a pure LP (throws std::invalid_argument if any variable
// carries an integrality flag). Deterministic: Dantzig pricing with a
// Bland's-rule fallback on stalling; final solution re-derived from the
// optimal basis by dense LU so reported primals/duals are tight.
LpSolution solve_lp(const LinearProgram& lp);

// Emits the program in LP text format, numerically exact to 12 significant
// digits. Used by --dump-lp.
std::string write_lp_format(const LinearProgram& lp, const std::string& name = "problem");

}  // namespace stochroute

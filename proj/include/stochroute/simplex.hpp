#pragma once

#include <vector>

#include "stochroute/lp.hpp"

namespace stochroute {

// Bounded-variable full-tableau simplex over the internal minimization form.
// Columns are the structural variables followed by one slack per row
// (slack bounds encode the row sense) and any phase-1 artificials.
//
// Supports warm restarts: after bound changes or row additions the engine
// repairs the current basis with the dual or primal method as appropriate.
// Exposed for the branch-and-bound driver; solve_lp wraps it.
class SimplexTableau {
 public:
  enum class Result { optimal, infeasible, unbounded, iteration_limit };
  enum class ColStatus : uint8_t { basic, at_lo, at_up, free_nb, fixed };

  explicit SimplexTableau(const LinearProgram& lp);

  // Full cold solve (phase 1 + phase 2).
  Result solve();

  // Changes a structural variable's bounds in place and marks the needed
  // repair; call resolve() afterwards.
  void set_bound(int col, double lo, double hi);
  // Appends a row (new slack basic); call resolve() afterwards.
  void add_row(const LinearProgram::Row& row);
  // Repairs the current basis after set_bound/add_row edits.
  Result resolve();

  // --- accessors (valid after an optimal solve) ---------------------------
  int num_structurals() const { return n_; }
  int num_rows() const { return m_; }
  double objective_internal() const;          // internal min space
  double value(int col) const { return xval_[col]; }
  std::vector<double> structural_values() const;
  // Recomputes basic values, duals and reduced costs from the basis via
  // dense LU on the original data. Returns false if the polished point is
  // not optimal (numerical drift); caller may re-solve.
  bool polish();
  const std::vector<double>& duals_internal() const { return y_; }
  const std::vector<double>& reduced_costs_internal() const { return dj_; }
  ColStatus col_status(int col) const { return stat_[col]; }

  int64_t iterations() const { return iter_count_; }

 private:
  double& T(int r, int c) { return tab_[static_cast<size_t>(r) * stride_ + c]; }
  double Tc(int r, int c) const { return tab_[static_cast<size_t>(r) * stride_ + c]; }
  void ensure_capacity(int cols, int rows);
  void compute_dj_and_obj();
  void pivot(int row, int col, double step, bool leaving_to_upper);
  void bound_flip(int col, double step);
  Result primal_loop(bool phase1);
  Result dual_loop();
  bool price_entering(bool phase1, bool bland, int* col, int* dir) const;
  void start_phase1();
  bool finish_phase1();  // false => infeasible
  void rebuild_from_basis();
  double infeasibility(int col, double v) const;

  int n_ = 0;  // structural columns
  int m_ = 0;  // rows
  int total_ = 0;
  int stride_ = 0;
  std::vector<double> tab_;   // m_ x stride_
  std::vector<double> beta_;  // basic values per row
  std::vector<double> cost_;  // internal min objective per column
  std::vector<double> lo_, hi_;
  std::vector<double> xval_;  // nonbasic values; basic mirrored from beta_
  std::vector<double> dj_;
  std::vector<ColStatus> stat_;
  std::vector<int> basis_;      // column basic in each row
  std::vector<int> art_sign_;   // per row: 0 none, else +-1 artificial sign
  std::vector<int> art_col_;    // per row: artificial column index or -1
  double obj_ = 0.0;
  bool need_primal_ = false, need_dual_ = false, basis_valid_ = false;
  int64_t iter_count_ = 0;

  // original data for polish/cold rebuilds; rows as built plus added ones
  std::vector<LinearProgram::Row> rows_;
  std::vector<double> orig_cost_;
  std::vector<double> y_;  // internal duals after polish

  static constexpr double kFeasTol = 1e-9;
  static constexpr double kDjTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;
};

}  // namespace stochroute

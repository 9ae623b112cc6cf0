#include "stochroute/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochroute {

namespace {
constexpr double kPhase1Done = 1e-7;

// Dense LU with partial pivoting; solves in place.
struct DenseLU {
  int n = 0;
  std::vector<double> a;  // n x n row-major
  std::vector<int> perm;

  bool factor() {
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
      int piv = k;
      double best = std::fabs(a[static_cast<size_t>(k) * n + k]);
      for (int i = k + 1; i < n; ++i) {
        double v = std::fabs(a[static_cast<size_t>(i) * n + k]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12) return false;
      if (piv != k) {
        for (int j = 0; j < n; ++j)
          std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(piv) * n + j]);
        std::swap(perm[k], perm[piv]);
      }
      double inv = 1.0 / a[static_cast<size_t>(k) * n + k];
      for (int i = k + 1; i < n; ++i) {
        double f = a[static_cast<size_t>(i) * n + k] * inv;
        a[static_cast<size_t>(i) * n + k] = f;
        if (f == 0.0) continue;
        const double* rk = &a[static_cast<size_t>(k) * n];
        double* ri = &a[static_cast<size_t>(i) * n];
        for (int j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
      }
    }
    return true;
  }

  void solve(std::vector<double>& x) const {  // A x = b, b in x
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = x[perm[i]];
    for (int i = 0; i < n; ++i) {
      double s = b[i];
      const double* ri = &a[static_cast<size_t>(i) * n];
      for (int j = 0; j < i; ++j) s -= ri[j] * b[j];
      b[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = b[i];
      const double* ri = &a[static_cast<size_t>(i) * n];
      for (int j = i + 1; j < n; ++j) s -= ri[j] * b[j];
      b[i] = s / ri[i];
    }
    x = std::move(b);
  }

  void solve_transposed(std::vector<double>& x) const {  // A^T y = c, c in x
    // (PA)^T = A^T P^T; solve U^T w = c, L^T v = w, y = P^T v
    std::vector<double> w = x;
    for (int i = 0; i < n; ++i) {
      double s = w[i];
      for (int j = 0; j < i; ++j) s -= a[static_cast<size_t>(j) * n + i] * w[j];
      w[i] = s / a[static_cast<size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = w[i];
      for (int j = i + 1; j < n; ++j) s -= a[static_cast<size_t>(j) * n + i] * w[j];
      w[i] = s;
    }
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[perm[i]] = w[i];
    x = std::move(y);
  }
};

}  // namespace

SimplexTableau::SimplexTableau(const LinearProgram& lp) {
  n_ = lp.num_vars();
  m_ = 0;
  orig_cost_.resize(n_);
  lo_.resize(n_);
  hi_.resize(n_);
  const double flip = lp.sense == LinearProgram::Sense::maximize ? -1.0 : 1.0;
  for (int j = 0; j < n_; ++j) {
    const auto& v = lp.vars[j];
    if (!(v.lo <= v.hi)) throw std::invalid_argument("variable with lo > hi");
    if (!std::isfinite(v.obj)) throw std::invalid_argument("non-finite objective coefficient");
    orig_cost_[j] = flip * v.obj;
    lo_[j] = v.lo;
    hi_[j] = v.hi;
  }
  rows_.reserve(lp.rows.size());
  for (const auto& r : lp.rows) {
    for (const auto& [j, c] : r.coef) {
      if (j < 0 || j >= n_) throw std::invalid_argument("row references unknown variable");
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite row coefficient");
    }
    rows_.push_back(r);
  }
  m_ = static_cast<int>(rows_.size());
}

void SimplexTableau::ensure_capacity(int cols, int rows) {
  if (cols <= stride_ && rows <= static_cast<int>(tab_.size() / std::max(1, stride_))) return;
  int new_stride = std::max(cols + 64, stride_);
  size_t new_rows = std::max<size_t>(rows, 8);
  std::vector<double> fresh(new_rows * new_stride, 0.0);
  int old_rows = stride_ == 0 ? 0 : static_cast<int>(tab_.size() / stride_);
  for (int r = 0; r < std::min(old_rows, rows); ++r)
    std::copy_n(&tab_[static_cast<size_t>(r) * stride_], stride_,
                &fresh[static_cast<size_t>(r) * new_stride]);
  tab_ = std::move(fresh);
  stride_ = new_stride;
}

void SimplexTableau::start_phase1() {
  const int slack0 = n_;
  total_ = n_ + m_;
  stride_ = 0;
  tab_.clear();
  ensure_capacity(total_ + m_ + 64, m_);  // room for artificials and lazy rows

  cost_.assign(total_, 0.0);
  lo_.resize(n_);
  hi_.resize(n_);
  lo_.resize(total_, 0.0);
  hi_.resize(total_, 0.0);
  xval_.assign(total_, 0.0);
  stat_.assign(total_, ColStatus::at_lo);
  dj_.assign(total_, 0.0);
  beta_.assign(m_, 0.0);
  basis_.assign(m_, -1);
  art_sign_.assign(m_, 0);
  art_col_.assign(m_, -1);

  // structural starting point: nearest finite bound, else free at 0
  for (int j = 0; j < n_; ++j) {
    if (lo_[j] == hi_[j]) {
      stat_[j] = ColStatus::fixed;
      xval_[j] = lo_[j];
    } else if (std::isfinite(lo_[j])) {
      stat_[j] = ColStatus::at_lo;
      xval_[j] = lo_[j];
    } else if (std::isfinite(hi_[j])) {
      stat_[j] = ColStatus::at_up;
      xval_[j] = hi_[j];
    } else {
      stat_[j] = ColStatus::free_nb;
      xval_[j] = 0.0;
    }
  }

  // slack bounds encode the row sense
  for (int r = 0; r < m_; ++r) {
    int sc = slack0 + r;
    switch (rows_[r].sense) {
      case LinearProgram::RowSense::le:
        lo_[sc] = 0.0;
        hi_[sc] = kInf;
        break;
      case LinearProgram::RowSense::ge:
        lo_[sc] = -kInf;
        hi_[sc] = 0.0;
        break;
      case LinearProgram::RowSense::eq:
        lo_[sc] = hi_[sc] = 0.0;
        break;
    }
  }

  for (int r = 0; r < m_; ++r) {
    double* row = &tab_[static_cast<size_t>(r) * stride_];
    double act = 0.0;
    for (const auto& [j, c] : rows_[r].coef) {
      row[j] += c;
      act += c * xval_[j];
    }
    int sc = slack0 + r;
    row[sc] = 1.0;
    double s = rows_[r].rhs - act;
    if (s >= lo_[sc] - kFeasTol && s <= hi_[sc] + kFeasTol) {
      basis_[r] = sc;
      beta_[r] = s;
      stat_[sc] = ColStatus::basic;
      xval_[sc] = s;
    } else {
      double clamped = std::clamp(s, lo_[sc], hi_[sc]);
      stat_[sc] = clamped == lo_[sc] ? ColStatus::at_lo : ColStatus::at_up;
      if (lo_[sc] == hi_[sc]) stat_[sc] = ColStatus::fixed;
      xval_[sc] = clamped;
      double residual = s - clamped;
      int sign = residual > 0 ? 1 : -1;
      int ac = total_++;
      ensure_capacity(total_, m_);
      row = &tab_[static_cast<size_t>(r) * stride_];  // may have moved
      cost_.push_back(0.0);
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      xval_.push_back(std::fabs(residual));
      stat_.push_back(ColStatus::basic);
      dj_.push_back(0.0);
      if (sign < 0)
        for (int c = 0; c < total_; ++c) row[c] = -row[c];
      row[ac] = 1.0;
      basis_[r] = ac;
      beta_[r] = std::fabs(residual);
      art_sign_[r] = sign;
      art_col_[r] = ac;
    }
  }
  // phase-1 objective: sum of artificials
  for (int r = 0; r < m_; ++r)
    if (art_col_[r] >= 0) cost_[art_col_[r]] = 1.0;
}

void SimplexTableau::compute_dj_and_obj() {
  obj_ = 0.0;
  for (int j = 0; j < total_; ++j) {
    dj_[j] = cost_[j];
    obj_ += cost_[j] * xval_[j];
  }
  for (int r = 0; r < m_; ++r) {
    double cb = cost_[basis_[r]];
    if (cb == 0.0) continue;
    const double* row = &tab_[static_cast<size_t>(r) * stride_];
    for (int j = 0; j < total_; ++j) dj_[j] -= cb * row[j];
  }
  for (int r = 0; r < m_; ++r) dj_[basis_[r]] = 0.0;
}

double SimplexTableau::infeasibility(int col, double v) const {
  double viol = 0.0;
  if (v < lo_[col]) viol = lo_[col] - v;
  if (v > hi_[col]) viol = std::max(viol, v - hi_[col]);
  return viol;
}

bool SimplexTableau::price_entering(bool phase1, bool bland, int* col, int* dir) const {
  (void)phase1;
  int best = -1, best_dir = 0;
  double best_score = kDjTol;
  for (int j = 0; j < total_; ++j) {
    ColStatus s = stat_[j];
    if (s == ColStatus::basic || s == ColStatus::fixed) continue;
    double d = dj_[j];
    int candidate_dir = 0;
    if ((s == ColStatus::at_lo || s == ColStatus::free_nb) && d < -kDjTol)
      candidate_dir = 1;
    else if ((s == ColStatus::at_up || s == ColStatus::free_nb) && d > kDjTol)
      candidate_dir = -1;
    if (candidate_dir == 0) continue;
    if (bland) {
      *col = j;
      *dir = candidate_dir;
      return true;
    }
    double score = std::fabs(d);
    if (score > best_score + 1e-12) {
      best_score = score;
      best = j;
      best_dir = candidate_dir;
    }
  }
  if (best < 0) return false;
  *col = best;
  *dir = best_dir;
  return true;
}

void SimplexTableau::bound_flip(int col, double step) {
  if (step == 0.0) return;
  for (int r = 0; r < m_; ++r) {
    double a = Tc(r, col);
    if (a != 0.0) {
      beta_[r] -= step * a;
      xval_[basis_[r]] = beta_[r];
    }
  }
  xval_[col] += step;
}

void SimplexTableau::pivot(int row, int col, double step, bool leaving_to_upper) {
  int leaving = basis_[row];
  // move entering variable by `step`; all basic values shift
  for (int r = 0; r < m_; ++r) {
    double a = Tc(r, col);
    if (a != 0.0) beta_[r] -= step * a;
  }
  double enter_val = xval_[col] + step;
  // leaving variable snaps exactly to its bound
  xval_[leaving] = leaving_to_upper ? hi_[leaving] : lo_[leaving];
  stat_[leaving] = leaving_to_upper ? ColStatus::at_up : ColStatus::at_lo;
  if (lo_[leaving] == hi_[leaving]) stat_[leaving] = ColStatus::fixed;

  // eliminate the entering column
  double p = T(row, col);
  double* prow = &tab_[static_cast<size_t>(row) * stride_];
  double inv = 1.0 / p;
  for (int j = 0; j < total_; ++j) prow[j] *= inv;
  prow[col] = 1.0;
  for (int r = 0; r < m_; ++r) {
    if (r == row) continue;
    double f = Tc(r, col);
    if (f == 0.0) continue;
    double* rrow = &tab_[static_cast<size_t>(r) * stride_];
    for (int j = 0; j < total_; ++j) rrow[j] -= f * prow[j];
    rrow[col] = 0.0;
  }
  double fd = dj_[col];
  if (fd != 0.0) {
    for (int j = 0; j < total_; ++j) dj_[j] -= fd * prow[j];
  }
  dj_[col] = 0.0;

  basis_[row] = col;
  stat_[col] = ColStatus::basic;
  beta_[row] = enter_val;
  xval_[col] = enter_val;
  for (int r = 0; r < m_; ++r) xval_[basis_[r]] = beta_[r];
  ++iter_count_;
}

SimplexTableau::Result SimplexTableau::primal_loop(bool phase1) {
  const int64_t max_iter = 20000 + 200LL * (m_ + n_);
  int64_t iters = 0;
  int64_t stall = 0;
  double last_obj = kInf;
  bool bland = false;

  for (;;) {
    if (++iters > max_iter) return Result::iteration_limit;
    int q = -1, dir = 0;
    if (!price_entering(phase1, bland, &q, &dir)) return Result::optimal;

    // ratio test
    double t_own = kInf;
    if (dir > 0 && std::isfinite(hi_[q])) t_own = hi_[q] - xval_[q];
    if (dir < 0 && std::isfinite(lo_[q])) t_own = xval_[q] - lo_[q];

    double best_t = kInf;
    int leave_row = -1;
    double best_a = 0.0;
    bool leave_upper = false;
    for (int r = 0; r < m_; ++r) {
      double a = Tc(r, q);
      double delta = dir * a;
      if (std::fabs(delta) <= kPivotTol) continue;
      int b = basis_[r];
      double t;
      bool to_upper;
      if (delta > 0) {  // basic value decreases toward its lower bound
        if (!std::isfinite(lo_[b])) continue;
        t = (beta_[r] - lo_[b]) / delta;
        to_upper = false;
      } else {  // basic value increases toward its upper bound
        if (!std::isfinite(hi_[b])) continue;
        t = (beta_[r] - hi_[b]) / delta;
        to_upper = true;
      }
      if (t < 0.0) t = 0.0;  // numerical slippage -> degenerate step
      bool take;
      if (leave_row < 0 || t < best_t - 1e-12) {
        take = true;
      } else if (t < best_t + 1e-12) {  // tie
        take = bland ? basis_[r] < basis_[leave_row]
                     : std::fabs(a) > std::fabs(best_a) + 1e-12;
      } else {
        take = false;
      }
      if (take) {
        best_t = std::min(leave_row < 0 ? t : best_t, t);
        leave_row = r;
        best_a = a;
        leave_upper = to_upper;
      }
    }

    if (t_own <= best_t) {  // entering variable hits its opposite bound first
      if (!std::isfinite(t_own)) return Result::unbounded;
      obj_ += dj_[q] * dir * t_own;
      bound_flip(q, dir * t_own);
      stat_[q] = dir > 0 ? ColStatus::at_up : ColStatus::at_lo;
    } else {
      obj_ += dj_[q] * dir * best_t;
      pivot(leave_row, q, dir * best_t, leave_upper);
    }

    if (obj_ < last_obj - 1e-12) {
      last_obj = obj_;
      stall = 0;
      bland = false;
    } else if (++stall > 2 * (m_ + total_) + 50) {
      bland = true;  // anti-cycling fallback
    }
  }
}

SimplexTableau::Result SimplexTableau::dual_loop() {
  const int64_t max_iter = 20000 + 200LL * (m_ + n_);
  int64_t iters = 0;
  for (;;) {
    if (++iters > max_iter) return Result::iteration_limit;
    // leaving: most infeasible basic value
    int row = -1;
    double worst = kFeasTol;
    bool below = false;
    for (int r = 0; r < m_; ++r) {
      int b = basis_[r];
      double v = beta_[r];
      if (v < lo_[b] - kFeasTol && lo_[b] - v > worst) {
        worst = lo_[b] - v;
        row = r;
        below = true;
      } else if (v > hi_[b] + kFeasTol && v - hi_[b] > worst) {
        worst = v - hi_[b];
        row = r;
        below = false;
      }
    }
    if (row < 0) return Result::optimal;

    int b = basis_[row];
    double target = below ? lo_[b] : hi_[b];
    double need = beta_[row] - target;  // sign: negative when below

    const double* prow = &tab_[static_cast<size_t>(row) * stride_];
    int q = -1;
    double best_ratio = kInf, best_alpha = 0.0;
    for (int j = 0; j < total_; ++j) {
      ColStatus s = stat_[j];
      if (s == ColStatus::basic || s == ColStatus::fixed) continue;
      double alpha = prow[j];
      if (std::fabs(alpha) <= kPivotTol) continue;
      double delta = need / alpha;  // required movement of x_j
      bool ok = (delta > 0 && (s == ColStatus::at_lo || s == ColStatus::free_nb)) ||
                (delta < 0 && (s == ColStatus::at_up || s == ColStatus::free_nb));
      if (!ok) continue;
      double ratio = std::fabs(dj_[j]) / std::fabs(alpha);
      bool take = ratio < best_ratio - 1e-12 ||
                  (ratio < best_ratio + 1e-12 && q >= 0 &&
                   std::fabs(alpha) > std::fabs(best_alpha) + 1e-12);
      if (q < 0) take = true;
      if (take) {
        best_ratio = std::min(best_ratio, ratio);
        q = j;
        best_alpha = alpha;
      }
    }
    if (q < 0) return Result::infeasible;

    double step = need / best_alpha;
    obj_ += dj_[q] * step;
    pivot(row, q, step, !below);
  }
}

SimplexTableau::Result SimplexTableau::solve() {
  iter_count_ = 0;
  start_phase1();
  compute_dj_and_obj();
  bool any_art = false;
  for (int r = 0; r < m_; ++r) any_art |= art_col_[r] >= 0;
  if (any_art) {
    Result r1 = primal_loop(true);
    if (r1 == Result::iteration_limit || r1 == Result::unbounded) {
      basis_valid_ = false;
      return r1 == Result::unbounded ? Result::infeasible : r1;
    }
    double infeas = 0.0;
    for (int r = 0; r < m_; ++r)
      if (cost_[basis_[r]] == 1.0) infeas += std::max(0.0, beta_[r]);
    if (infeas > kPhase1Done) {
      basis_valid_ = false;
      return Result::infeasible;
    }
    if (!finish_phase1()) {
      basis_valid_ = false;
      return Result::infeasible;
    }
  }
  // phase 2: real costs; artificials pinned at zero
  for (int j = 0; j < total_; ++j) cost_[j] = j < n_ ? orig_cost_[j] : 0.0;
  compute_dj_and_obj();
  Result r2 = primal_loop(false);
  basis_valid_ = r2 == Result::optimal;
  need_primal_ = need_dual_ = false;
  return r2;
}

bool SimplexTableau::finish_phase1() {
  for (int r = 0; r < m_; ++r) {
    int ac = art_col_[r];
    if (ac < 0) continue;
    // artificials that left the basis can never return
    if (stat_[ac] != ColStatus::basic) {
      lo_[ac] = hi_[ac] = 0.0;
      stat_[ac] = ColStatus::fixed;
      xval_[ac] = 0.0;
      continue;
    }
  }
  for (int r = 0; r < m_; ++r) {
    int bcol = basis_[r];
    bool is_art = false;
    for (int rr = 0; rr < m_; ++rr)
      if (art_col_[rr] == bcol) is_art = true;
    if (!is_art) continue;
    if (std::fabs(beta_[r]) > kPhase1Done) return false;
    // pivot the artificial out on any usable column
    int q = -1;
    double best = kPivotTol * 10;
    const double* prow = &tab_[static_cast<size_t>(r) * stride_];
    for (int j = 0; j < total_; ++j) {
      if (stat_[j] == ColStatus::basic || stat_[j] == ColStatus::fixed) continue;
      bool j_is_art = false;
      for (int rr = 0; rr < m_; ++rr)
        if (art_col_[rr] == j) j_is_art = true;
      if (j_is_art) continue;
      if (std::fabs(prow[j]) > best) {
        best = std::fabs(prow[j]);
        q = j;
      }
    }
    if (q >= 0) {
      pivot(r, q, 0.0, false);
      lo_[bcol] = hi_[bcol] = 0.0;
      stat_[bcol] = ColStatus::fixed;
      xval_[bcol] = 0.0;
    } else {
      // redundant row: artificial stays basic at zero, pinned
      lo_[bcol] = hi_[bcol] = 0.0;
    }
  }
  return true;
}

void SimplexTableau::set_bound(int col, double lo, double hi) {
  if (col < 0 || col >= n_) throw std::invalid_argument("set_bound on non-structural column");
  if (!(lo <= hi)) throw std::invalid_argument("set_bound with lo > hi");
  lo_[col] = lo;
  hi_[col] = hi;
  if (!basis_valid_) return;
  if (stat_[col] == ColStatus::basic) {
    if (infeasibility(col, xval_[col]) > kFeasTol) need_dual_ = true;
    return;
  }
  double old = xval_[col];
  double nv;
  ColStatus ns;
  if (lo == hi) {
    nv = lo;
    ns = ColStatus::fixed;
  } else if (std::isfinite(lo) && (old <= lo || !std::isfinite(hi) ||
                                   std::fabs(old - lo) <= std::fabs(old - hi))) {
    nv = lo;
    ns = ColStatus::at_lo;
  } else if (std::isfinite(hi)) {
    nv = hi;
    ns = ColStatus::at_up;
  } else {
    nv = 0.0;
    ns = ColStatus::free_nb;
  }
  stat_[col] = ns;
  if (nv != old) {
    bound_flip(col, nv - old);  // shifts basic values
    need_dual_ = true;
  }
  // reduced-cost sign condition may break when the anchor bound changes
  double d = dj_[col];
  if ((ns == ColStatus::at_lo && d < -kDjTol) || (ns == ColStatus::at_up && d > kDjTol) ||
      (ns == ColStatus::free_nb && std::fabs(d) > kDjTol))
    need_primal_ = true;
}

void SimplexTableau::add_row(const LinearProgram::Row& row) {
  for (const auto& [j, c] : row.coef) {
    if (j < 0 || j >= n_) throw std::invalid_argument("row references unknown variable");
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite row coefficient");
  }
  rows_.push_back(row);
  ++m_;
  if (!basis_valid_) return;  // will be built on next cold solve

  int sc = total_++;
  ensure_capacity(total_, m_);
  cost_.push_back(0.0);
  dj_.push_back(0.0);
  switch (row.sense) {
    case LinearProgram::RowSense::le:
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      break;
    case LinearProgram::RowSense::ge:
      lo_.push_back(-kInf);
      hi_.push_back(0.0);
      break;
    case LinearProgram::RowSense::eq:
      lo_.push_back(0.0);
      hi_.push_back(0.0);
      break;
  }
  // ensure the tableau has a fresh zeroed row
  size_t need = static_cast<size_t>(m_) * stride_;
  if (tab_.size() < need) tab_.resize(need, 0.0);
  double* nrow = &tab_[static_cast<size_t>(m_ - 1) * stride_];
  std::fill(nrow, nrow + stride_, 0.0);
  double act = 0.0;
  for (const auto& [j, c] : row.coef) {
    nrow[j] += c;
    act += c * xval_[j];
  }
  nrow[sc] = 1.0;
  // eliminate existing basic columns (their tableau columns are unit vectors)
  for (int r = 0; r < m_ - 1; ++r) {
    double f = nrow[basis_[r]];
    if (f == 0.0) continue;
    const double* rrow = &tab_[static_cast<size_t>(r) * stride_];
    for (int j = 0; j < total_; ++j) nrow[j] -= f * rrow[j];
    nrow[basis_[r]] = 0.0;
  }
  double s = row.rhs - act;
  basis_.push_back(sc);
  beta_.push_back(s);
  art_sign_.push_back(0);
  art_col_.push_back(-1);
  stat_.push_back(ColStatus::basic);
  xval_.push_back(s);
  if (infeasibility(sc, s) > kFeasTol) need_dual_ = true;
}

SimplexTableau::Result SimplexTableau::resolve() {
  if (!basis_valid_) return solve();
  if (need_primal_) {
    // restore dual feasibility by flipping wrong-signed nonbasic variables
    // to their opposite bound; any primal damage lands on the dual repair
    bool flipped_all = true;
    for (int j = 0; j < total_ && flipped_all; ++j) {
      ColStatus s = stat_[j];
      if (s == ColStatus::basic || s == ColStatus::fixed) continue;
      double d = dj_[j];
      if (s == ColStatus::at_lo && d < -kDjTol) {
        if (std::isfinite(hi_[j])) {
          bound_flip(j, hi_[j] - xval_[j]);
          stat_[j] = ColStatus::at_up;
        } else {
          flipped_all = false;
        }
      } else if (s == ColStatus::at_up && d > kDjTol) {
        if (std::isfinite(lo_[j])) {
          bound_flip(j, lo_[j] - xval_[j]);
          stat_[j] = ColStatus::at_lo;
        } else {
          flipped_all = false;
        }
      } else if (s == ColStatus::free_nb && std::fabs(d) > kDjTol) {
        flipped_all = false;
      }
    }
    if (!flipped_all) return solve();
    need_primal_ = false;
    need_dual_ = true;
  }
  Result r = Result::optimal;
  if (need_dual_) {
    r = dual_loop();
    if (r == Result::iteration_limit) return solve();
    if (r == Result::infeasible) {
      basis_valid_ = false;  // bounds must be re-applied via cold solve later
      return r;
    }
  } else if (need_primal_) {
    compute_dj_and_obj();
    r = primal_loop(false);
    if (r == Result::iteration_limit) return solve();
    if (r == Result::unbounded) {
      basis_valid_ = false;
      return r;
    }
  }
  need_primal_ = need_dual_ = false;
  basis_valid_ = true;
  return r;
}

double SimplexTableau::objective_internal() const {
  double o = 0.0;
  for (int j = 0; j < n_; ++j) o += orig_cost_[j] * xval_[j];
  return o;
}

std::vector<double> SimplexTableau::structural_values() const {
  return std::vector<double>(xval_.begin(), xval_.begin() + n_);
}

void SimplexTableau::rebuild_from_basis() {
  // not needed in the normal path; cold solve is the recovery mechanism
  solve();
}

bool SimplexTableau::polish() {
  if (!basis_valid_ || m_ == 0) {
    // trivially compute duals for the row-free case
    y_.assign(m_, 0.0);
    dj_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) dj_[j] = orig_cost_[j];
    return true;
  }
  const int slack0 = n_;
  std::vector<int> pos(total_, -1);
  for (int r = 0; r < m_; ++r) pos[basis_[r]] = r;

  DenseLU lu;
  lu.n = m_;
  lu.a.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    for (const auto& [j, c] : rows_[r].coef)
      if (pos[j] >= 0) lu.a[static_cast<size_t>(r) * m_ + pos[j]] += c;
    int sc = slack0 + r;
    if (pos[sc] >= 0) lu.a[static_cast<size_t>(r) * m_ + pos[sc]] += 1.0;
    if (art_col_[r] >= 0 && pos[art_col_[r]] >= 0)
      lu.a[static_cast<size_t>(r) * m_ + pos[art_col_[r]]] += art_sign_[r];
  }
  if (!lu.factor()) return false;

  // basic values from original data
  std::vector<double> rhs_eff(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    double v = rows_[r].rhs;
    for (const auto& [j, c] : rows_[r].coef)
      if (pos[j] < 0) v -= c * xval_[j];
    int sc = slack0 + r;
    if (pos[sc] < 0) v -= xval_[sc];
    rhs_eff[r] = v;
  }
  lu.solve(rhs_eff);
  // rhs_eff is ordered by basis position: column k of B is basis variable at
  // position k, i.e. the variable basic in the row whose pos maps to k
  for (int r = 0; r < m_; ++r) beta_[r] = rhs_eff[pos[basis_[r]]];
  for (int r = 0; r < m_; ++r) xval_[basis_[r]] = beta_[r];

  // duals: solve B^T y = c_B with c_B laid out by basis position
  std::vector<double> cpos(m_);
  for (int r = 0; r < m_; ++r) cpos[pos[basis_[r]]] = cost_[basis_[r]];
  lu.solve_transposed(cpos);
  y_ = std::move(cpos);

  for (int j = 0; j < total_; ++j) dj_[j] = cost_[j];
  for (int r = 0; r < m_; ++r) {
    if (y_[r] == 0.0) continue;
    for (const auto& [j, c] : rows_[r].coef) dj_[j] -= y_[r] * c;
    dj_[slack0 + r] -= y_[r];
    if (art_col_[r] >= 0) dj_[art_col_[r]] -= y_[r] * art_sign_[r];
  }
  for (int r = 0; r < m_; ++r) dj_[basis_[r]] = 0.0;

  // verify feasibility and optimality of the polished point
  for (int r = 0; r < m_; ++r)
    if (infeasibility(basis_[r], beta_[r]) > 1e-7) return false;
  for (int j = 0; j < total_; ++j) {
    switch (stat_[j]) {
      case ColStatus::at_lo:
        if (dj_[j] < -1e-6) return false;
        break;
      case ColStatus::at_up:
        if (dj_[j] > 1e-6) return false;
        break;
      case ColStatus::free_nb:
        if (std::fabs(dj_[j]) > 1e-6) return false;
        break;
      default:
        break;
    }
  }
  obj_ = 0.0;
  for (int j = 0; j < total_; ++j) obj_ += cost_[j] * xval_[j];
  return true;
}

}  // namespace stochroute

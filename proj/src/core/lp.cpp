#include "core/lp.hpp"

#include "core/errors.hpp"

namespace polymax {

namespace {

// Dense simplex tableau over exact rationals. Variables are the split
// x = u - v with u, v >= 0, plus one slack per row and an optional phase-1
// auxiliary. Dantzig pricing with a Bland fallback after a fixed number of
// iterations guarantees termination.
class Simplex {
 public:
  Simplex(int n, const Vec& objective, const std::vector<LpConstraint>& cs)
      : n_(n) {
    // Rows in "A y <= b" form. fn(x) >= 0 becomes -slope.x <= const;
    // equalities contribute both directions.
    for (const auto& c : cs) {
      add_row(scale(c.fn.slope, Rat(-1)), c.fn.constant);
      if (c.equality) add_row(c.fn.slope, -c.fn.constant);
    }
    m_ = static_cast<int>(rows_.size());
    ncols_ = 2 * n_ + m_ + 1;  // structural + slacks + aux
    aux_ = 2 * n_ + m_;
    obj_.assign(static_cast<size_t>(ncols_), Rat(0));
    for (int j = 0; j < n_; j++) {
      obj_[static_cast<size_t>(j)] = objective[static_cast<size_t>(j)];
      obj_[static_cast<size_t>(n_ + j)] = -objective[static_cast<size_t>(j)];
    }
    tab_.assign(static_cast<size_t>(m_ + 1), Vec(static_cast<size_t>(ncols_ + 1)));
    basis_.resize(static_cast<size_t>(m_));
    for (int i = 0; i < m_; i++) {
      for (int j = 0; j < 2 * n_; j++) tab_[i][static_cast<size_t>(j)] = rows_[i].first[static_cast<size_t>(j)];
      tab_[i][static_cast<size_t>(2 * n_ + i)] = Rat(1);
      tab_[i][static_cast<size_t>(ncols_)] = rows_[i].second;
      basis_[i] = 2 * n_ + i;
    }
  }

  LpResult solve() {
    if (needs_phase1()) {
      run_phase1();
      if (tab_[static_cast<size_t>(m_)][static_cast<size_t>(ncols_)] < Rat(0))
        return {LpStatus::kInfeasible, Rat(0), {}};
      drive_out_aux();
    }
    install_objective();
    LpStatus st = iterate(/*allow_aux=*/false);
    if (st == LpStatus::kUnbounded) return {LpStatus::kUnbounded, Rat(0), {}};
    LpResult r;
    r.status = LpStatus::kOptimal;
    r.value = tab_[static_cast<size_t>(m_)][static_cast<size_t>(ncols_)];
    r.point = extract_point();
    return r;
  }

 private:
  void add_row(Vec neg_slope_as_leq, const Rat& rhs) {
    Vec row(static_cast<size_t>(2 * n_));
    for (int j = 0; j < n_; j++) {
      row[static_cast<size_t>(j)] = neg_slope_as_leq[static_cast<size_t>(j)];
      row[static_cast<size_t>(n_ + j)] = -neg_slope_as_leq[static_cast<size_t>(j)];
    }
    rows_.emplace_back(std::move(row), rhs);
  }

  bool needs_phase1() const {
    for (int i = 0; i < m_; i++)
      if (tab_[i][static_cast<size_t>(ncols_)] < Rat(0)) return true;
    return false;
  }

  void pivot(int r, int e) {
    Vec& row = tab_[static_cast<size_t>(r)];
    Rat inv = Rat(1) / row[static_cast<size_t>(e)];
    for (auto& v : row) v *= inv;
    for (int i = 0; i <= m_; i++) {
      if (i == r) continue;
      Rat f = tab_[static_cast<size_t>(i)][static_cast<size_t>(e)];
      if (f.is_zero()) continue;
      Vec& ri = tab_[static_cast<size_t>(i)];
      for (int j = 0; j <= ncols_; j++) {
        if (!row[static_cast<size_t>(j)].is_zero())
          ri[static_cast<size_t>(j)] -= f * row[static_cast<size_t>(j)];
      }
    }
    basis_[static_cast<size_t>(r)] = e;
  }

  // Core loop on the current objective row. Columns >= limit are excluded.
  LpStatus iterate(bool allow_aux) {
    int limit = allow_aux ? ncols_ : aux_;
    Vec& z = tab_[static_cast<size_t>(m_)];
    long iters = 0;
    const long bland_after = 256;
    while (true) {
      require(++iters < 200000, ErrorCode::kInternal, "simplex iteration cap hit");
      bool bland = iters > bland_after;
      int enter = -1;
      for (int j = 0; j < limit; j++) {
        const Rat& rc = z[static_cast<size_t>(j)];
        if (rc.sign() >= 0) continue;
        if (enter < 0) { enter = j; if (bland) break; continue; }
        if (!bland && rc < z[static_cast<size_t>(enter)]) enter = j;
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m_; i++) {
        const Rat& a = tab_[static_cast<size_t>(i)][static_cast<size_t>(enter)];
        if (a.sign() <= 0) continue;
        Rat ratio = tab_[static_cast<size_t>(i)][static_cast<size_t>(ncols_)] / a;
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter);
    }
  }

  void run_phase1() {
    // Objective: maximize -x0. Reduced cost of the auxiliary is +1.
    Vec& z = tab_[static_cast<size_t>(m_)];
    for (auto& v : z) v = Rat(0);
    z[static_cast<size_t>(aux_)] = Rat(1);
    for (int i = 0; i < m_; i++) tab_[static_cast<size_t>(i)][static_cast<size_t>(aux_)] = Rat(-1);
    int worst = 0;
    for (int i = 1; i < m_; i++)
      if (tab_[static_cast<size_t>(i)][static_cast<size_t>(ncols_)] <
          tab_[static_cast<size_t>(worst)][static_cast<size_t>(ncols_)])
        worst = i;
    pivot(worst, aux_);
    iterate(/*allow_aux=*/true);
  }

  void drive_out_aux() {
    for (int i = 0; i < m_; i++) {
      if (basis_[static_cast<size_t>(i)] != aux_) continue;
      int col = -1;
      for (int j = 0; j < aux_; j++) {
        if (!tab_[static_cast<size_t>(i)][static_cast<size_t>(j)].is_zero()) { col = j; break; }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        // 0 = 0 row; drop it.
        tab_.erase(tab_.begin() + i);
        basis_.erase(basis_.begin() + i);
        m_--;
        i--;
      }
    }
    // The auxiliary never re-enters: phase 2 excludes its column.
  }

  void install_objective() {
    Vec& z = tab_[static_cast<size_t>(m_)];
    for (int j = 0; j <= ncols_; j++) z[static_cast<size_t>(j)] = Rat(0);
    for (int j = 0; j < ncols_; j++) z[static_cast<size_t>(j)] = -obj_[static_cast<size_t>(j)];
    for (int i = 0; i < m_; i++) {
      Rat f = z[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
      if (f.is_zero()) continue;
      for (int j = 0; j <= ncols_; j++)
        z[static_cast<size_t>(j)] -= f * tab_[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }

  Vec extract_point() const {
    Vec y(static_cast<size_t>(2 * n_));
    for (int i = 0; i < m_; i++) {
      int b = basis_[static_cast<size_t>(i)];
      if (b < 2 * n_) y[static_cast<size_t>(b)] = tab_[static_cast<size_t>(i)][static_cast<size_t>(ncols_)];
    }
    Vec x(static_cast<size_t>(n_));
    for (int j = 0; j < n_; j++) x[static_cast<size_t>(j)] = y[static_cast<size_t>(j)] - y[static_cast<size_t>(n_ + j)];
    return x;
  }

  int n_, m_ = 0, ncols_ = 0, aux_ = 0;
  std::vector<std::pair<Vec, Rat>> rows_;
  Vec obj_;
  std::vector<Vec> tab_;
  std::vector<int> basis_;
};

}  // namespace

LpResult lp_maximize(int n, const AffineFunctional& objective,
                     const std::vector<LpConstraint>& constraints) {
  require(objective.dim() == n, ErrorCode::kDimensionMismatch, "lp: objective dimension");
  for (const auto& c : constraints)
    require(c.fn.dim() == n, ErrorCode::kDimensionMismatch, "lp: constraint dimension");
  Simplex s(n, objective.slope, constraints);
  LpResult r = s.solve();
  if (r.status == LpStatus::kOptimal) r.value += objective.constant;
  return r;
}

LpResult lp_minimize(int n, const AffineFunctional& objective,
                     const std::vector<LpConstraint>& constraints) {
  AffineFunctional neg{scale(objective.slope, Rat(-1)), -objective.constant};
  LpResult r = lp_maximize(n, neg, constraints);
  if (r.status == LpStatus::kOptimal) r.value = -r.value;
  return r;
}

bool lp_feasible(int n, const std::vector<LpConstraint>& constraints) {
  AffineFunctional zero{zero_vec(n), Rat(0)};
  return lp_maximize(n, zero, constraints).status != LpStatus::kInfeasible;
}

}  // namespace polymax

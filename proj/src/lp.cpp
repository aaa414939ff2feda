#include "gsched/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsched {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-8;
const double kInf = std::numeric_limits<double>::infinity();

struct Tableau {
  int m = 0;
  int ncols = 0;
  std::vector<std::vector<double>> rows;  // m x (ncols + 1), canonical in basis
  std::vector<int> basis;

  void pivot(int r, int j) {
    const double piv = rows[r][j];
    for (double& v : rows[r]) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double factor = rows[i][j];
      if (factor == 0.0) continue;
      for (int k = 0; k <= ncols; ++k) rows[i][k] -= factor * rows[r][k];
    }
    basis[r] = j;
  }

  // Bland's rule: entering = lowest-index column with negative reduced cost,
  // leaving = lowest basic index among minimal ratios. Returns false when the
  // objective is unbounded below.
  bool optimize(const std::vector<double>& cost, int eligible_cols) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < eligible_cols && enter < 0; ++j) {
        double rj = cost[j];
        for (int r = 0; r < m; ++r)
          if (cost[basis[r]] != 0.0) rj -= cost[basis[r]] * rows[r][j];
        if (rj < -kCostTol) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < m; ++r) {
        if (rows[r][enter] <= kPivotTol) continue;
        const double ratio = rows[r][ncols] / rows[r][enter];
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int r = 0; r < m; ++r) v += cost[basis[r]] * rows[r][ncols];
    return v;
  }
};

}  // namespace

namespace detail {

LpSolution simplex_standard(const std::vector<std::vector<double>>& A,
                            const std::vector<double>& b,
                            const std::vector<double>& c) {
  const int m = static_cast<int>(b.size());
  const int n = static_cast<int>(c.size());
  Tableau t;
  t.m = m;
  t.ncols = n + m;  // artificial columns at n..n+m-1
  t.rows.assign(m, std::vector<double>(t.ncols + 1, 0.0));
  t.basis.resize(m);
  for (int r = 0; r < m; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.rows[r][j] = sign * A[r][j];
    t.rows[r][n + r] = 1.0;
    t.rows[r][t.ncols] = sign * b[r];
    t.basis[r] = n + r;
  }

  // phase 1: minimize the sum of artificials
  std::vector<double> phase1(t.ncols, 0.0);
  for (int j = n; j < t.ncols; ++j) phase1[j] = 1.0;
  t.optimize(phase1, t.ncols);
  if (t.objective(phase1) > kFeasTol) return {LpStatus::infeasible, {}, 0.0};

  // drive basic artificials out; rows with no real coefficients are redundant
  for (int r = 0; r < m; ++r) {
    if (t.basis[r] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t.rows[r][j]) > kPivotTol) {
        t.pivot(r, j);
        break;
      }
    }
  }

  std::vector<double> phase2(t.ncols, 0.0);
  std::copy(c.begin(), c.end(), phase2.begin());
  if (!t.optimize(phase2, n)) return {LpStatus::unbounded, {}, 0.0};

  std::vector<double> x(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (t.basis[r] < n) x[t.basis[r]] = t.rows[r][t.ncols];
  double value = 0.0;
  for (int j = 0; j < n; ++j) value += c[j] * x[j];
  return {LpStatus::optimal, std::move(x), value};
}

}  // namespace detail

void LinearProgram::validate() const {
  const std::size_t n = c.size();
  if (lo.size() != n || hi.size() != n)
    throw std::invalid_argument("lp: bound vectors must match objective length");
  if (A.size() != b.size()) throw std::invalid_argument("lp: row count mismatch");
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("lp: row length mismatch");
  for (std::size_t j = 0; j < n; ++j)
    if (lo[j] > hi[j]) throw std::invalid_argument("lp: lo > hi");
}

LpSolution lp_solve(const LinearProgram& lp) {
  lp.validate();
  const int n = static_cast<int>(lp.c.size());

  // substitution z_j = shift_j + sign_j * y_pos (+ optional second column for
  // free variables), making every solver variable nonnegative
  struct VarMap {
    double shift = 0.0;
    int pos = -1;   // coefficient +1
    int neg = -1;   // coefficient -1 (free variables only)
  };
  std::vector<VarMap> map(n);
  int ny = 0;
  for (int j = 0; j < n; ++j) {
    if (lp.lo[j] > -kInf) {
      map[j].shift = lp.lo[j];
      map[j].pos = ny++;
    } else if (lp.hi[j] < kInf) {
      map[j].shift = lp.hi[j];
      map[j].neg = ny++;
    } else {
      map[j].pos = ny++;
      map[j].neg = ny++;
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  auto add_row = [&](const std::vector<double>& coef, double limit) {
    // coef over original z; translate through the substitution
    std::vector<double> out(ny, 0.0);
    double c0 = 0.0;
    for (int j = 0; j < n; ++j) {
      if (coef[j] == 0.0) continue;
      c0 += coef[j] * map[j].shift;
      if (map[j].pos >= 0) out[map[j].pos] += coef[j];
      if (map[j].neg >= 0) out[map[j].neg] -= coef[j];
    }
    rows.push_back(std::move(out));
    rhs.push_back(limit - c0);
  };

  for (std::size_t r = 0; r < lp.A.size(); ++r) add_row(lp.A[r], lp.b[r]);
  for (int j = 0; j < n; ++j) {
    if (lp.lo[j] > -kInf && lp.hi[j] < kInf) {
      std::vector<double> coef(n, 0.0);
      coef[j] = 1.0;
      add_row(coef, lp.hi[j]);
    }
  }

  // slacks turn every row into an equality
  const int m = static_cast<int>(rows.size());
  std::vector<std::vector<double>> A_std(m, std::vector<double>(ny + m, 0.0));
  std::vector<double> c_std(ny + m, 0.0);
  double shift_cost = 0.0;
  for (int j = 0; j < n; ++j) {
    shift_cost += lp.c[j] * map[j].shift;
    if (map[j].pos >= 0) c_std[map[j].pos] += lp.c[j];
    if (map[j].neg >= 0) c_std[map[j].neg] -= lp.c[j];
  }
  for (int r = 0; r < m; ++r) {
    std::copy(rows[r].begin(), rows[r].end(), A_std[r].begin());
    A_std[r][ny + r] = 1.0;
  }

  LpSolution inner = detail::simplex_standard(A_std, rhs, c_std);
  if (inner.status != LpStatus::optimal) return {inner.status, {}, 0.0};

  LpSolution out;
  out.status = LpStatus::optimal;
  out.z.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double v = map[j].shift;
    if (map[j].pos >= 0) v += inner.z[map[j].pos];
    if (map[j].neg >= 0) v -= inner.z[map[j].neg];
    out.z[j] = v;
  }
  out.value = inner.value + shift_cost;
  return out;
}

}  // namespace gsched

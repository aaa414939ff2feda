#include "gsched/em_assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsched/lp.hpp"
#include "gsched/rng.hpp"

namespace gsched {

namespace {

std::vector<double> complement(std::span<const double> x, std::span<const double> a) {
  std::vector<double> rest(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rest[i] = std::max(0.0, a[i] - x[i]);
  return rest;
}

void check_split(std::span<const double> x, std::span<const double> a) {
  if (x.size() != a.size()) throw std::invalid_argument("split size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (x[i] < -1e-9 || x[i] > a[i] + 1e-9)
      throw std::invalid_argument("split leaves the box 0 <= x <= a");
}

}  // namespace

EStepResult e_step(const ConflictGraph& g, std::span<const double> x,
                   std::span<const double> rates) {
  check_split(x, rates);
  std::vector<double> first(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) first[i] = std::max(0.0, x[i]);
  const std::vector<double> second = complement(x, rates);
  auto [p1, v1] = min_norm_priority(g, first);
  auto [p2, v2] = min_norm_priority(g, second);
  return {std::move(p1), std::move(p2), std::max(v1, v2)};
}

std::pair<std::vector<double>, double> m_step(const ConflictGraph& g,
                                              const PriorityVector& p1,
                                              const PriorityVector& p2,
                                              std::span<const double> rates) {
  const int n = g.num_links();
  if (p1.size() != n || p2.size() != n)
    throw std::invalid_argument("priority size does not match graph");
  for (double r : rates)
    if (r < 0.0) throw std::invalid_argument("rate components must be nonnegative");
  const IncidenceMatrix P1(g, p1);
  const IncidenceMatrix P2(g, p2);
  const double inf = std::numeric_limits<double>::infinity();

  // variables z = (x_1..x_n, t)
  LinearProgram lp;
  lp.c.assign(n + 1, 0.0);
  lp.c[n] = 1.0;
  lp.lo.assign(n + 1, 0.0);
  lp.hi.assign(rates.begin(), rates.end());
  lp.hi.push_back(inf);
  for (int i = 1; i <= n; ++i) {
    std::vector<double> row(n + 1, 0.0);
    row[i - 1] = 1.0;
    for (int j : P1.higher_priority_neighbors(i)) row[j - 1] = 1.0;
    row[n] = -0.5;
    lp.A.push_back(std::move(row));
    lp.b.push_back(0.0);
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<double> row(n + 1, 0.0);
    row[i - 1] = -1.0;
    double load = rates[i - 1];
    for (int j : P2.higher_priority_neighbors(i)) {
      row[j - 1] = -1.0;
      load += rates[j - 1];
    }
    row[n] = -0.5;
    lp.A.push_back(std::move(row));
    lp.b.push_back(-load);
  }

  const LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::optimal)
    throw std::logic_error("m_step LP should always be feasible and bounded");
  std::vector<double> x(sol.z.begin(), sol.z.begin() + n);
  for (int i = 0; i < n; ++i) x[i] = std::clamp(x[i], 0.0, rates[i]);
  return {std::move(x), std::max(0.0, sol.z[n])};
}

namespace {

EMState em_run(const ConflictGraph& g, std::span<const double> rates,
               std::vector<double> x0, double tol, int max_iter) {
  EMState state;
  state.x = std::move(x0);
  double prev_t = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= max_iter; ++m) {
    state.iterations = m;
    EStepResult es = e_step(g, state.x, rates);
    state.p1 = es.p1;
    state.p2 = es.p2;
    state.trace.push_back(2.0 * es.objective);
    auto [x, t] = m_step(g, es.p1, es.p2, rates);
    state.x = std::move(x);
    state.t = t;
    state.trace.push_back(t);
    if (t <= tol || std::abs(t - prev_t) < tol) {
      state.converged = true;
      break;
    }
    prev_t = t;
  }
  return state;
}

}  // namespace

EMState em_assign(const ConflictGraph& g, std::span<const double> rates, double tol,
                  int max_iter, int restarts, std::uint64_t seed) {
  const int n = g.num_links();
  if (static_cast<int>(rates.size()) != n)
    throw std::invalid_argument("rate vector size does not match graph");
  for (double r : rates)
    if (r < 0.0) throw std::invalid_argument("rate components must be nonnegative");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  std::vector<double> half(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) half[i] = rates[i] / 2.0;
  EMState best = em_run(g, rates, std::move(half), tol, max_iter);
  for (int r = 1; r <= restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> x0(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) x0[i] = rng.next_double() * rates[i];
    EMState cand = em_run(g, rates, std::move(x0), tol, max_iter);
    if (cand.t < best.t - 1e-12) best = std::move(cand);
  }
  return best;
}

}  // namespace gsched

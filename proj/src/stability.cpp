#include "gsched/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsched/lp.hpp"

namespace gsched {

namespace {

void check_rates(const ConflictGraph& g, std::span<const double> rates) {
  if (static_cast<int>(rates.size()) != g.num_links())
    throw std::invalid_argument("rate vector size does not match graph");
  for (double r : rates)
    if (r < 0.0) throw std::invalid_argument("rate components must be nonnegative");
}

struct GreedyPass {
  bool exceeded = false;
  double fail_value = 0.0;
  double max_examined = 0.0;
  std::vector<int> ranks;  // complete when !exceeded
};

// One pass of the lowest-priority-to-lightest-link greedy. Among tied minima
// the lowest-index link keeps the better priority, i.e. the highest-index
// tied link is removed first.
GreedyPass greedy_priority_pass(const ConflictGraph& g, std::span<const double> rates,
                                bool early_exit, double tol) {
  const int n = g.num_links();
  GreedyPass out;
  out.ranks.assign(n, 0);
  std::vector<bool> remaining(n + 1, true);
  for (int k = n; k >= 1; --k) {
    int pick = -1;
    double pick_sum = 0.0;
    for (int i = 1; i <= n; ++i) {
      if (!remaining[i]) continue;
      double sum = rates[i - 1];
      for (int j : g.neighbors(i))
        if (remaining[j]) sum += rates[j - 1];
      if (pick < 0 || sum <= pick_sum) {  // <=: later (higher) index wins ties
        pick = i;
        pick_sum = sum;
      }
    }
    if (early_exit && pick_sum > 1.0 + tol) {
      out.exceeded = true;
      out.fail_value = pick_sum;
      return out;
    }
    out.max_examined = std::max(out.max_examined, pick_sum);
    out.ranks[pick - 1] = k;
    remaining[pick] = false;
  }
  return out;
}

}  // namespace

RegionVerdict in_maximal_region(const ConflictGraph& g, std::span<const double> rates,
                                double tol) {
  check_rates(g, rates);
  RegionVerdict v;
  for (int i = 1; i <= g.num_links(); ++i) {
    double sum = rates[i - 1];
    for (int j : g.neighbors(i)) sum += rates[j - 1];
    v.value = std::max(v.value, sum);
  }
  v.member = v.value <= 1.0 + tol;
  v.boundary = std::abs(v.value - 1.0) <= tol;
  return v;
}

RegionVerdict in_priority_region(const ConflictGraph& g, const PriorityVector& p,
                                 std::span<const double> rates, double tol) {
  check_rates(g, rates);
  RegionVerdict v;
  v.value = weighted_norm(IncidenceMatrix(g, p), rates);
  v.member = v.value <= 1.0 + tol;
  v.boundary = std::abs(v.value - 1.0) <= tol;
  v.certificate = p;
  return v;
}

RegionVerdict test_feasibility(const ConflictGraph& g, std::span<const double> rates,
                               double tol) {
  check_rates(g, rates);
  const GreedyPass pass = greedy_priority_pass(g, rates, /*early_exit=*/true, tol);
  RegionVerdict v;
  if (pass.exceeded) {
    v.member = false;
    v.value = pass.fail_value;
    return v;
  }
  v.member = true;
  v.value = pass.max_examined;
  v.boundary = std::abs(v.value - 1.0) <= tol;
  v.certificate = PriorityVector(pass.ranks);
  return v;
}

std::pair<PriorityVector, double> min_norm_priority(const ConflictGraph& g,
                                                    std::span<const double> rates) {
  check_rates(g, rates);
  const GreedyPass pass = greedy_priority_pass(g, rates, /*early_exit=*/false, 0.0);
  return {PriorityVector(pass.ranks), pass.max_examined};
}

RegionVerdict sp_condition(const ConflictGraph& g, const SPParams& params, double tol) {
  params.validate();
  if (params.num_links() != g.num_links())
    throw std::invalid_argument("SP params do not match graph size");
  RegionVerdict v;
  v.member = true;
  for (int k = 0; k < params.num_blocks(); ++k) {
    const IncidenceMatrix P(g, params.priorities[k]);
    const std::span<const double> block_rates(params.rates[k]);
    for (int i = 1; i <= g.num_links(); ++i) {
      if (!(block_rates[i - 1] > 0.0)) continue;  // vacuously stable sub-queue
      const double load = P.row_load(i, block_rates);
      v.value = std::max(v.value, load / params.theta[k]);
      if (!(load < params.theta[k] - tol)) v.member = false;
      if (std::abs(load - params.theta[k]) <= tol) v.boundary = true;
    }
  }
  return v;
}

std::vector<LinkSet> enumerate_independent_sets(const ConflictGraph& g, int n_max,
                                                std::size_t max_sets) {
  if (g.num_links() > n_max)
    throw std::invalid_argument("graph too large to enumerate independent sets (n_max=" +
                                std::to_string(n_max) + ")");
  std::vector<LinkSet> sets;
  // grow sets in ascending link order; blocked marks conflicted links
  struct Frame {
    int next;
    std::uint64_t members;
    std::uint64_t blocked;
  };
  std::vector<Frame> stack{{1, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    bool emitted = f.members != 0;
    for (int link = f.next; link <= g.num_links(); ++link) {
      const std::uint64_t bit = std::uint64_t{1} << (link - 1);
      if (f.blocked & bit) continue;
      stack.push_back(
          {link + 1, f.members | bit, f.blocked | bit | g.neighbor_mask(link)});
    }
    if (emitted) {
      if (sets.size() >= max_sets)
        throw std::invalid_argument("too many independent sets to enumerate");
      sets.emplace_back(f.members);
    }
  }
  std::sort(sets.begin(), sets.end(),
            [](const LinkSet& a, const LinkSet& b) { return a.mask() < b.mask(); });
  return sets;
}

IndependentSetDecomposition decompose_rate(const ConflictGraph& g,
                                           std::span<const double> rates, int n_max) {
  check_rates(g, rates);
  const int n = g.num_links();
  const std::vector<LinkSet> sets = enumerate_independent_sets(g, n_max);
  const int cols = static_cast<int>(sets.size()) + 1;  // + slack for sum(theta) <= 1

  // rows 1..n: sum_S theta_S [i in S] = a_i;  row n+1: sum_S theta_S + s = 1
  std::vector<std::vector<double>> A(n + 1, std::vector<double>(cols, 0.0));
  std::vector<double> b(n + 1, 0.0);
  for (int s = 0; s < static_cast<int>(sets.size()); ++s) {
    for (int link : sets[s].links()) A[link - 1][s] = 1.0;
    A[n][s] = 1.0;
  }
  A[n][cols - 1] = 1.0;
  b[n] = 1.0;
  for (int i = 0; i < n; ++i) b[i] = rates[i];

  // minimizing the total weight picks the most efficient combination, which
  // leaves the largest idle share for downstream grid rounding
  std::vector<double> cost(cols, 1.0);
  cost[cols - 1] = 0.0;
  const LpSolution sol = detail::simplex_standard(A, b, cost);
  if (sol.status != LpStatus::optimal)
    throw std::invalid_argument("rate vector lies outside the optimal region");

  IndependentSetDecomposition out;
  for (int s = 0; s < static_cast<int>(sets.size()); ++s) {
    if (sol.z[s] > 1e-12) {
      out.sets.push_back(sets[s]);
      out.weights.push_back(sol.z[s]);
    }
  }
  return out;
}

SPParams caratheodory_sp_params(const ConflictGraph& g, std::span<const double> rates,
                                int block_length, int n_max) {
  check_rates(g, rates);
  if (block_length < 1) throw std::invalid_argument("block length must be >= 1");
  const int n = g.num_links();

  const bool zero = std::all_of(rates.begin(), rates.end(),
                                [](double r) { return r == 0.0; });
  IndependentSetDecomposition decomp;
  if (!zero) decomp = decompose_rate(g, rates, n_max);
  const int active = static_cast<int>(decomp.sets.size());

  // Rational rounding onto the block grid. Rounding up first keeps every
  // sub-block at least as long as its exact share; when the budget overflows,
  // the most over-provisioned sub-blocks give slots back.
  std::vector<int> slots(active, 0);
  long long used = 0;
  for (int k = 0; k < active; ++k) {
    slots[k] = static_cast<int>(std::ceil(decomp.weights[k] * block_length - 1e-9));
    slots[k] = std::max(slots[k], 1);
    used += slots[k];
  }
  while (used > block_length) {
    int pick = -1;
    double excess = -1.0;
    for (int k = 0; k < active; ++k) {
      if (slots[k] <= 1) continue;
      const double e = slots[k] - decomp.weights[k] * block_length;
      if (e > excess) {
        excess = e;
        pick = k;
      }
    }
    if (pick < 0)
      throw std::invalid_argument("block length too short for the decomposition");
    --slots[pick];
    --used;
  }

  SPParams params;
  params.block_length = block_length;
  for (int k = 0; k < active; ++k) {
    params.theta.push_back(static_cast<double>(slots[k]) / block_length);
    // active links last in the consideration order = lowest priorities
    std::vector<int> order;
    for (int i = 1; i <= n; ++i)
      if (!decomp.sets[k].contains(i)) order.push_back(i);
    for (int link : decomp.sets[k].links()) order.push_back(link);
    params.priorities.push_back(PriorityVector::from_order(order));
    std::vector<double> block_rate(n, 0.0);
    for (int link : decomp.sets[k].links()) block_rate[link - 1] = decomp.weights[k];
    params.rates.push_back(std::move(block_rate));
  }
  if (used < block_length) {  // leftover slots form an idle block
    params.theta.push_back(static_cast<double>(block_length - used) / block_length);
    params.priorities.push_back(PriorityVector::identity(n));
    params.rates.emplace_back(n, 0.0);
  }
  params.validate();
  return params;
}

}  // namespace gsched

#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gsched/conflict_graph.hpp"
#include "gsched/scheduling.hpp"

namespace gsched {

// Outcome of a stability-region membership test. `value` is the binding norm
// or load; `boundary` marks the test holding with equality (within tol).
struct RegionVerdict {
  bool member = false;
  double value = 0.0;
  bool boundary = false;
  std::optional<PriorityVector> certificate;
};

// Membership in A_maximal: every closed-neighborhood rate sum <= 1.
RegionVerdict in_maximal_region(const ConflictGraph& g, std::span<const double> rates,
                                double tol = 1e-9);

// Membership in A_p for a fixed priority: ||P a||_inf <= 1.
RegionVerdict in_priority_region(const ConflictGraph& g, const PriorityVector& p,
                                 std::span<const double> rates, double tol = 1e-9);

// The linear-pass feasibility test for the LQF lower-bound region: repeatedly
// gives the lowest remaining priority to the link with the smallest remaining
// closed-neighborhood sum, rejecting as soon as that smallest sum exceeds 1.
// On success the certificate is the constructed priority vector.
RegionVerdict test_feasibility(const ConflictGraph& g, std::span<const double> rates,
                               double tol = 1e-9);

// The priority minimizing ||P a||_inf over all n! permutations, built by the
// same greedy pass (no early exit), with its achieved norm.
std::pair<PriorityVector, double> min_norm_priority(const ConflictGraph& g,
                                                    std::span<const double> rates);

// Sufficient condition for SP-K rate stability: (P^(k) a^(k))_i < theta^(k)
// at every link with positive block-k rate. `value` is the worst load/theta
// ratio over those links.
RegionVerdict sp_condition(const ConflictGraph& g, const SPParams& params,
                           double tol = 1e-9);

// Convex combination of independent sets reproducing a rate vector;
// weights are positive and sum to at most 1.
struct IndependentSetDecomposition {
  std::vector<LinkSet> sets;
  std::vector<double> weights;
};

// All independent sets of g (the empty set excluded), DFS enumeration.
// Throws when g exceeds n_max or the set count exceeds max_sets.
std::vector<LinkSet> enumerate_independent_sets(const ConflictGraph& g, int n_max = 24,
                                                std::size_t max_sets = 1u << 22);

// Exact decomposition a = sum_k theta_k m^(k) with sum theta_k <= 1, via an
// LP over the enumerated independent sets; the basic solution uses at most
// n+1 sets. Throws when a lies outside the convex hull.
IndependentSetDecomposition decompose_rate(const ConflictGraph& g,
                                           std::span<const double> rates,
                                           int n_max = 24);

// SP parameters realizing a rate vector inside the optimal region: at most
// n+1 priority vectors, one per independent set of the decomposition (links
// of the active set get the lowest priorities), with theta rounded onto the
// block grid (rounded up where the block budget allows).
SPParams caratheodory_sp_params(const ConflictGraph& g, std::span<const double> rates,
                                int block_length, int n_max = 24);

}  // namespace gsched

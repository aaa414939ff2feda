#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsched/conflict_graph.hpp"
#include "gsched/rng.hpp"

namespace gsched {

// Tie rule for equal queue lengths in LQF.
enum class TieBreak { lowest_index, random };

// Greedy maximal schedule: links are examined in increasing rank order and a
// link enters the schedule iff it is occupied and none of its neighbors has
// been scheduled yet. Single pass; the result is maximal within `occupied`.
LinkSet greedy_schedule(const ConflictGraph& g, const PriorityVector& p,
                        const LinkSet& occupied);

// Priorities by descending queue length; ties by lowest link index, or by a
// seeded shuffle when tie == random (rng required then).
PriorityVector lqf_priorities(std::span<const long long> queues,
                              TieBreak tie = TieBreak::lowest_index,
                              Rng* rng = nullptr);

LinkSet lqf_step(const ConflictGraph& g, std::span<const long long> queues,
                 TieBreak tie = TieBreak::lowest_index, Rng* rng = nullptr);

LinkSet sp_single_step(const ConflictGraph& g, const PriorityVector& p,
                       std::span<const long long> queues);

// Parameters of SP scheduling with K priority vectors: time is partitioned
// into blocks of block_length slots, sub-block k (theta[k] * block_length
// slots, in order k = 1..K) serves only sub-queue k under priorities[k].
struct SPParams {
  std::vector<double> theta;
  std::vector<PriorityVector> priorities;
  std::vector<std::vector<double>> rates;  // per-block arrival rates a^(k)
  int block_length = 0;

  int num_blocks() const { return static_cast<int>(theta.size()); }
  int num_links() const;
  // Slots allotted to sub-block k (theta[k] * block_length, integral).
  int sub_block_slots(int k) const;
  // Index of the sub-block active at slot t (t >= 1).
  int active_block(long long t) const;
  void validate() const;

  static SPParams from_json_text(const std::string& text);
  static SPParams load(const std::string& path);
  std::string to_json_text() const;
};

// One slot of SP-K scheduling: picks the active sub-block k for slot t and
// greedily schedules the links whose k-th sub-queue is nonempty. Departures
// drain only sub-queue k. Returns the schedule and k (0-based).
std::pair<LinkSet, int> sp_multi_step(const ConflictGraph& g, const SPParams& params,
                                      const std::vector<std::vector<long long>>& sub_queues,
                                      long long t);

// Exact maximum-weight independent set with queue lengths as weights.
// Zero-weight links are excluded; ties resolved to the lexicographically
// smallest link set. Exhaustive search, guarded by n_max.
LinkSet max_weight_schedule(const ConflictGraph& g, std::span<const long long> queues,
                            int n_max = 24);

}  // namespace gsched

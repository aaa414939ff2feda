#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gsched/rng.hpp"

namespace gsched {

// A slotted packet source: every call emits the integer arrival vector of the
// next slot. Emitted counts are bounded by max_per_slot() and the long-run
// average converges to declared_rate(). Single-consumer (stateful iterator).
class ArrivalProcess {
 public:
  virtual ~ArrivalProcess() = default;
  virtual int num_links() const = 0;
  virtual int max_per_slot() const = 0;
  virtual const std::vector<double>& declared_rate() const = 0;
  virtual std::vector<int> next_slot() = 0;
};

// Independent per-link Bernoulli arrivals: one packet with probability
// rates[i] each slot.
std::unique_ptr<ArrivalProcess> bernoulli_process(std::vector<double> rates,
                                                  std::uint64_t seed);

// The 6-ring periodic process: one packet at links {1,4}, then {2,5}, then
// {3,6}, cycling every three slots, plus (with probability epsilon, one draw
// per slot) one extra packet at every link. Rate (1/3 + epsilon) per link.
std::unique_ptr<ArrivalProcess> ring6_adversarial(double epsilon, std::uint64_t seed);

// Scaled variant: each phase fires only with probability 3*rho (rho <= 1/3),
// giving rate (rho + epsilon) per link; rho = 1/3 recovers the periodic form.
std::unique_ptr<ArrivalProcess> ring6_adversarial(double rho, double epsilon,
                                                  std::uint64_t seed);

// Period-4 process on the 8-link bipartite graph: one packet at the pair
// {1,5}, then {2,6}, {3,7}, {4,8}, cycling. Each pair is a maximal
// independent set of half the achievable size, so a longest-queue scheduler
// chasing the fresh packets serves two links per slot where four are
// possible. Each phase fires with probability 4*rho (rho <= 1/4), plus the
// epsilon all-links packet; rate (rho + epsilon) per link.
std::unique_ptr<ArrivalProcess> bipartite_adversarial(double rho, double epsilon,
                                                      std::uint64_t seed);

// How packets are routed into sub-queues.
enum class SplitMode { probabilistic, round_robin };

// Fractions x^(k) >= 0 with sum_k x^(k) = parent rate, componentwise.
struct SplitSpec {
  std::vector<std::vector<double>> fractions;
  SplitMode mode = SplitMode::probabilistic;

  int num_blocks() const { return static_cast<int>(fractions.size()); }
  void validate(const std::vector<double>& parent_rate, double tol = 1e-9) const;
};

// Routes each arriving packet of the shared parent into one of K sub-streams;
// the K rows of a slot sum to the parent's arrivals exactly.
class SplitStream {
 public:
  SplitStream(std::unique_ptr<ArrivalProcess> parent, SplitSpec spec,
              std::uint64_t seed);

  int num_links() const { return parent_->num_links(); }
  int num_blocks() const { return spec_.num_blocks(); }
  int max_per_slot() const { return parent_->max_per_slot(); }
  const std::vector<double>& parent_rate() const { return parent_->declared_rate(); }
  const SplitSpec& spec() const { return spec_; }

  // K x n arrival counts for the next slot.
  std::vector<std::vector<int>> next_slot();

 private:
  std::unique_ptr<ArrivalProcess> parent_;
  SplitSpec spec_;
  Rng rng_;
  std::vector<std::vector<long long>> routed_;  // per link x block, round_robin mode
  std::vector<long long> total_;                // per link
};

// The K sub-processes as plain ArrivalProcess objects, advancing the shared
// parent in lockstep; sub-process k has declared rate x^(k).
std::vector<std::unique_ptr<ArrivalProcess>> split_process(
    std::unique_ptr<ArrivalProcess> parent, const SplitSpec& spec, std::uint64_t seed);

// Trace files: CSV "slot,link,count", one row per nonzero arrival.
void dump_trace(ArrivalProcess& process, long long slots, std::ostream& out);
std::unique_ptr<ArrivalProcess> replay_trace(std::istream& in, int num_links);
std::unique_ptr<ArrivalProcess> load_trace(const std::string& path, int num_links);

}  // namespace gsched

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsched/arrivals.hpp"
#include "gsched/conflict_graph.hpp"
#include "gsched/scheduling.hpp"

namespace gsched {

// Raised when a run breaks one of the structural guarantees (conservation,
// independence, maximality, per-slot bounds). Always a bug, never bad input.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct SimConfig {
  std::string graph;      // ring:<n> | bipartite8 | edge-list path
  std::string scheduler;  // lqf | lqf:random | sp:<file> | spk:<file> | maxweight
  std::string arrivals;   // bernoulli:<r|csv> | ring6adv:[rho:]eps | bipadv:rho:eps | trace:<path>
  long long horizon = 100000;
  int runs = 1;
  long long sample_every = 100;
  std::uint64_t seed = 1;

  void validate() const;
  static SimConfig from_json_text(const std::string& text);
  static SimConfig load(const std::string& path);
};

struct SchedulerSpec {
  enum class Kind { lqf, sp, spk, maxweight };
  Kind kind = Kind::lqf;
  TieBreak tie = TieBreak::lowest_index;
  std::optional<PriorityVector> priority;  // sp
  std::optional<SPParams> params;          // spk
  std::string name;

  static SchedulerSpec parse(const std::string& spec);
};

struct ArrivalSpec {
  enum class Kind { bernoulli, ring6adv, bipadv, trace };
  Kind kind = Kind::bernoulli;
  std::vector<double> rates;  // bernoulli with explicit rates
  double uniform_rate = -1.0; // bernoulli with a uniform rate
  double rho = -1.0;          // adversarial pattern strength (default: maximal)
  double epsilon = 0.0;
  std::string path;           // trace replay

  static ArrivalSpec parse(const std::string& spec);
  // Same process family re-targeted at a uniform per-link rate (sweeps): the
  // adversarial sources keep their pattern at full strength up to the rate
  // cap and put the remainder into epsilon.
  ArrivalSpec with_uniform_rate(double rate) const;
  std::unique_ptr<ArrivalProcess> make(int num_links, std::uint64_t seed) const;
};

struct SamplePoint {
  long long slot;
  long long max_queue;
  long long total_queue;
};

struct SimResult {
  std::vector<SamplePoint> samples;
  std::vector<long long> final_queues;
  std::vector<long long> final_arrivals;
  std::vector<long long> final_departures;
  std::vector<double> departure_rate;
  double departure_rate_error = 0.0;  // max_i |D_i(T)/T - a_i|
  long long final_max_queue = 0;
  double growth_slope = 0.0;  // packets/slot, fit over the last half
  long long invariant_checks = 0;
};

struct ReplicateResult {
  std::vector<SimResult> runs;
  double mean_final_max_queue = 0.0;
  double max_final_max_queue = 0.0;
  double mean_slope = 0.0;
  double max_slope = 0.0;
  double mean_departure_rate_error = 0.0;
};

// One run of the slotted dynamics: schedule from Q(t-1), depart, then add the
// slot's arrivals. Deterministic given the seed. Structural invariants are
// checked every slot.
SimResult simulate_run(const ConflictGraph& g, const SchedulerSpec& scheduler,
                       const ArrivalSpec& arrivals, long long horizon,
                       long long sample_every, std::uint64_t seed);

// `runs` independent runs with seeds seed, seed+1, ... plus aggregates.
ReplicateResult replicate(const SimConfig& config);

struct SweepRow {
  std::string scheduler;
  double rate;
  int run;
  long long final_max_queue;
  double slope;
  double departure_rate_error;
};

// replicate() at each uniform rate; one row per (rate, run).
std::vector<SweepRow> rate_sweep(const SimConfig& config,
                                 const std::vector<double>& rates);

// Empirical stability thresholds used when classifying a finished run.
bool empirically_stable(const SimResult& run, long long horizon);

void write_trace_csv(std::ostream& out, const ReplicateResult& result);
void write_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// CSV "link,rate" with one row per link; missing links default to 0.
std::vector<double> load_rates_csv(const std::string& path, int num_links);

}  // namespace gsched

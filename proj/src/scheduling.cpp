#include "gsched/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gsched {

LinkSet greedy_schedule(const ConflictGraph& g, const PriorityVector& p,
                        const LinkSet& occupied) {
  if (p.size() != g.num_links())
    throw std::invalid_argument("priority vector size does not match graph");
  LinkSet scheduled;
  for (int link : p.consideration_order()) {
    if (!occupied.contains(link)) continue;
    if (g.neighbor_mask(link) & scheduled.mask()) continue;
    scheduled.insert(link);
  }
  return scheduled;
}

PriorityVector lqf_priorities(std::span<const long long> queues, TieBreak tie,
                              Rng* rng) {
  const int n = static_cast<int>(queues.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  if (tie == TieBreak::random) {
    if (rng == nullptr)
      throw std::invalid_argument("random tie-break needs an rng");
    // Fisher-Yates before the stable sort: equal queues end up in random order
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng->next_below(static_cast<std::uint64_t>(i) + 1)]);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return queues[a - 1] > queues[b - 1];
  });
  return PriorityVector::from_order(order);
}

LinkSet lqf_step(const ConflictGraph& g, std::span<const long long> queues,
                 TieBreak tie, Rng* rng) {
  LinkSet occupied;
  for (int i = 1; i <= g.num_links(); ++i)
    if (queues[i - 1] > 0) occupied.insert(i);
  return greedy_schedule(g, lqf_priorities(queues, tie, rng), occupied);
}

LinkSet sp_single_step(const ConflictGraph& g, const PriorityVector& p,
                       std::span<const long long> queues) {
  LinkSet occupied;
  for (int i = 1; i <= g.num_links(); ++i)
    if (queues[i - 1] > 0) occupied.insert(i);
  return greedy_schedule(g, p, occupied);
}

int SPParams::num_links() const {
  return priorities.empty() ? 0 : priorities.front().size();
}

int SPParams::sub_block_slots(int k) const {
  return static_cast<int>(std::llround(theta[k] * block_length));
}

int SPParams::active_block(long long t) const {
  const long long pos = (t - 1) % block_length;
  long long cum = 0;
  for (int k = 0; k < num_blocks(); ++k) {
    cum += sub_block_slots(k);
    if (pos < cum) return k;
  }
  return num_blocks() - 1;
}

void SPParams::validate() const {
  const int K = num_blocks();
  if (K < 1) throw std::invalid_argument("SP params need at least one block");
  if (static_cast<int>(priorities.size()) != K || static_cast<int>(rates.size()) != K)
    throw std::invalid_argument("SP params: theta/priorities/rates size mismatch");
  if (block_length < 1) throw std::invalid_argument("SP params: block length must be >= 1");
  const int n = num_links();
  double theta_sum = 0.0;
  long long slot_sum = 0;
  for (int k = 0; k < K; ++k) {
    if (!(theta[k] > 0.0)) throw std::invalid_argument("SP params: theta must be positive");
    theta_sum += theta[k];
    const double slots = theta[k] * block_length;
    if (std::abs(slots - std::llround(slots)) > 1e-6)
      throw std::invalid_argument("SP params: theta * block_length must be integral");
    slot_sum += std::llround(slots);
    if (priorities[k].size() != n || static_cast<int>(rates[k].size()) != n)
      throw std::invalid_argument("SP params: per-block dimensions disagree");
    for (double r : rates[k])
      if (r < 0.0) throw std::invalid_argument("SP params: negative block rate");
  }
  if (std::abs(theta_sum - 1.0) > 1e-9)
    throw std::invalid_argument("SP params: theta must sum to 1");
  if (slot_sum != block_length)
    throw std::invalid_argument("SP params: sub-block slots must cover the block");
}

SPParams SPParams::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SPParams params;
  params.theta = j.at("theta").get<std::vector<double>>();
  for (const auto& ranks : j.at("priorities"))
    params.priorities.emplace_back(ranks.get<std::vector<int>>());
  params.rates = j.at("rates").get<std::vector<std::vector<double>>>();
  params.block_length = j.at("block").get<int>();
  if (j.contains("K") && j.at("K").get<int>() != params.num_blocks())
    throw std::invalid_argument("SP params: K disagrees with array lengths");
  params.validate();
  return params;
}

SPParams SPParams::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open SP params file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json_text(text.str());
}

std::string SPParams::to_json_text() const {
  nlohmann::json j;
  j["K"] = num_blocks();
  j["theta"] = theta;
  nlohmann::json prios = nlohmann::json::array();
  for (const auto& p : priorities) prios.push_back(p.ranks());
  j["priorities"] = prios;
  j["rates"] = rates;
  j["block"] = block_length;
  return j.dump(2);
}

std::pair<LinkSet, int> sp_multi_step(const ConflictGraph& g, const SPParams& params,
                                      const std::vector<std::vector<long long>>& sub_queues,
                                      long long t) {
  params.validate();
  if (t < 1) throw std::invalid_argument("slot index starts at 1");
  if (static_cast<int>(sub_queues.size()) != params.num_blocks())
    throw std::invalid_argument("sub-queue matrix has wrong block count");
  const int k = params.active_block(t);
  const auto& q = sub_queues[k];
  if (static_cast<int>(q.size()) != g.num_links())
    throw std::invalid_argument("sub-queue row has wrong length");
  LinkSet occupied;
  for (int i = 1; i <= g.num_links(); ++i)
    if (q[i - 1] > 0) occupied.insert(i);
  return {greedy_schedule(g, params.priorities[k], occupied), k};
}

namespace {

struct MwisSearch {
  const ConflictGraph& g;
  std::span<const long long> weights;
  std::vector<int> candidates;  // positive-weight links, ascending
  std::vector<long long> suffix_weight;
  LinkSet best;
  long long best_weight = 0;

  void run(std::size_t idx, LinkSet cur, long long cur_weight) {
    if (idx == candidates.size()) {
      if (cur_weight > best_weight ||
          (cur_weight == best_weight && lex_less(cur, best))) {
        best = cur;
        best_weight = cur_weight;
      }
      return;
    }
    if (cur_weight + suffix_weight[idx] < best_weight) return;
    const int link = candidates[idx];
    if ((g.neighbor_mask(link) & cur.mask()) == 0) {
      LinkSet with = cur;
      with.insert(link);
      run(idx + 1, with, cur_weight + weights[link - 1]);
    }
    run(idx + 1, cur, cur_weight);
  }
};

}  // namespace

LinkSet max_weight_schedule(const ConflictGraph& g, std::span<const long long> queues,
                            int n_max) {
  if (g.num_links() > n_max)
    throw std::invalid_argument("graph too large for exact max-weight search (n_max=" +
                                std::to_string(n_max) + ")");
  if (static_cast<int>(queues.size()) != g.num_links())
    throw std::invalid_argument("queue vector size does not match graph");
  MwisSearch search{g, queues, {}, {}, LinkSet{}, 0};
  for (int i = 1; i <= g.num_links(); ++i)
    if (queues[i - 1] > 0) search.candidates.push_back(i);
  search.suffix_weight.assign(search.candidates.size() + 1, 0);
  for (std::size_t i = search.candidates.size(); i-- > 0;)
    search.suffix_weight[i] =
        search.suffix_weight[i + 1] + queues[search.candidates[i] - 1];
  search.run(0, LinkSet{}, 0);
  return search.best;
}

}  // namespace gsched

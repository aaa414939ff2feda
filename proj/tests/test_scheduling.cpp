#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsched/scheduling.hpp"

using namespace gsched;

namespace {

ConflictGraph random_graph(Rng& rng, int n, double edge_prob) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (rng.bernoulli(edge_prob)) edges.emplace_back(i, j);
  return ConflictGraph(n, edges);
}

LinkSet occupied_of(std::span<const long long> q) {
  LinkSet s;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0) s.insert(static_cast<int>(i) + 1);
  return s;
}

bool maximal_within(const ConflictGraph& g, const LinkSet& sched,
                    const LinkSet& occupied) {
  for (int link : occupied.links())
    if (!sched.contains(link) && (g.neighbor_mask(link) & sched.mask()) == 0)
      return false;
  return true;
}

SPParams two_block_params(int n, int block) {
  SPParams params;
  params.theta = {0.5, 0.5};
  params.priorities = {PriorityVector::identity(n), PriorityVector::identity(n)};
  params.rates = {std::vector<double>(n, 0.1), std::vector<double>(n, 0.1)};
  params.block_length = block;
  return params;
}

}  // namespace

TEST_CASE("greedy schedule on the 6-ring") {
  const ConflictGraph g = ConflictGraph::ring(6);
  const PriorityVector p = PriorityVector::identity(6);
  CHECK(greedy_schedule(g, p, LinkSet::of({1, 2, 3, 4, 5, 6})) ==
        LinkSet::of({1, 3, 5}));
  CHECK(greedy_schedule(g, p, LinkSet{}) == LinkSet{});
  CHECK(greedy_schedule(g, p, LinkSet::of({2, 3})) == LinkSet::of({2}));
}

TEST_CASE("greedy schedule is independent, maximal, and priority-monotone") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const ConflictGraph g = random_graph(rng, n, 0.4);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
    const PriorityVector p = PriorityVector::from_order(order);
    LinkSet occupied;
    for (int i = 1; i <= n; ++i)
      if (rng.bernoulli(0.6)) occupied.insert(i);
    const LinkSet sched = greedy_schedule(g, p, occupied);
    CHECK(g.is_independent(sched));
    CHECK((sched.mask() & ~occupied.mask()) == 0);
    CHECK(maximal_within(g, sched, occupied));
    if (!occupied.empty()) {
      // the highest-priority occupied link is always in
      int best = 0;
      for (int link : occupied.links())
        if (best == 0 || p.rank_of(link) < p.rank_of(best)) best = link;
      CHECK(sched.contains(best));
    }
  }
}

TEST_CASE("lqf priorities sort by queue length") {
  CHECK(lqf_priorities(std::vector<long long>{5, 3, 9}).ranks() ==
        std::vector<int>{2, 3, 1});
  CHECK(lqf_priorities(std::vector<long long>{0, 0, 0}).ranks() ==
        std::vector<int>{1, 2, 3});
  CHECK(lqf_priorities(std::vector<long long>{7, 7, 2}).ranks() ==
        std::vector<int>{1, 2, 3});
}

TEST_CASE("lqf random tie-break stays sorted and needs an rng") {
  Rng rng(5);
  const std::vector<long long> q{4, 4, 9, 1, 4};
  const PriorityVector p = lqf_priorities(q, TieBreak::random, &rng);
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j)
      if (q[i - 1] > q[j - 1]) CHECK(p.rank_of(i) < p.rank_of(j));
  CHECK_THROWS_AS(lqf_priorities(q, TieBreak::random, nullptr), std::invalid_argument);
}

TEST_CASE("lqf step on the 6-ring") {
  const ConflictGraph g = ConflictGraph::ring(6);
  CHECK(lqf_step(g, std::vector<long long>{1, 0, 0, 1, 0, 0}) == LinkSet::of({1, 4}));
  CHECK(lqf_step(g, std::vector<long long>(6, 0)) == LinkSet{});
  CHECK(lqf_step(g, std::vector<long long>{2, 1, 1, 2, 1, 1}) == LinkSet::of({1, 4}));
}

TEST_CASE("sp single step on the 6-ring") {
  const ConflictGraph g = ConflictGraph::ring(6);
  const std::vector<long long> busy(6, 3);
  CHECK(sp_single_step(g, PriorityVector::identity(6), busy) == LinkSet::of({1, 3, 5}));
  CHECK(sp_single_step(g, PriorityVector::identity(6), std::vector<long long>(6, 0)) ==
        LinkSet{});
  CHECK(sp_single_step(g, PriorityVector({6, 5, 4, 3, 2, 1}), busy) ==
        LinkSet::of({2, 4, 6}));
}

TEST_CASE("sp multi step block arithmetic") {
  const ConflictGraph g = ConflictGraph::ring(4);
  SPParams params = two_block_params(4, 100);
  const std::vector<std::vector<long long>> sub_queues{{1, 1, 1, 1}, {1, 1, 1, 1}};
  CHECK(sp_multi_step(g, params, sub_queues, 1).second == 0);
  CHECK(sp_multi_step(g, params, sub_queues, 50).second == 0);
  CHECK(sp_multi_step(g, params, sub_queues, 51).second == 1);
  CHECK(sp_multi_step(g, params, sub_queues, 100).second == 1);
  CHECK(sp_multi_step(g, params, sub_queues, 101).second == 0);
  const std::vector<std::vector<long long>> empty{{0, 0, 0, 0}, {0, 0, 0, 0}};
  CHECK(sp_multi_step(g, params, empty, 7).first == LinkSet{});
}

TEST_CASE("sp multi step with K=1 matches sp_single_step") {
  Rng rng(17);
  const ConflictGraph g = random_graph(rng, 6, 0.5);
  SPParams params;
  params.theta = {1.0};
  params.priorities = {PriorityVector({3, 1, 4, 2, 6, 5})};
  params.rates = {std::vector<double>(6, 0.2)};
  params.block_length = 10;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<long long> q(6);
    for (auto& v : q) v = static_cast<long long>(rng.next_below(4));
    const auto [sched, k] =
        sp_multi_step(g, params, std::vector<std::vector<long long>>{q},
                      1 + static_cast<long long>(rng.next_below(1000)));
    CHECK(k == 0);
    CHECK(sched == sp_single_step(g, params.priorities[0], q));
  }
}

TEST_CASE("sp params validation") {
  SPParams params = two_block_params(4, 100);
  CHECK_NOTHROW(params.validate());
  SPParams bad_theta = params;
  bad_theta.theta = {0.6, 0.6};
  CHECK_THROWS_AS(bad_theta.validate(), std::invalid_argument);
  SPParams bad_grid = params;
  bad_grid.block_length = 3;  // 0.5 * 3 is not integral
  CHECK_THROWS_AS(bad_grid.validate(), std::invalid_argument);
  SPParams bad_rate = params;
  bad_rate.rates[0][0] = -0.1;
  CHECK_THROWS_AS(bad_rate.validate(), std::invalid_argument);
}

TEST_CASE("sp params json round-trip") {
  const SPParams params = two_block_params(4, 100);
  const SPParams back = SPParams::from_json_text(params.to_json_text());
  CHECK(back.theta == params.theta);
  CHECK(back.block_length == params.block_length);
  CHECK(back.rates == params.rates);
  CHECK(back.priorities[0] == params.priorities[0]);
  CHECK_THROWS(SPParams::from_json_text("{\"theta\": [1.0]}"));
}

TEST_CASE("max weight schedule on the 6-ring") {
  const ConflictGraph g = ConflictGraph::ring(6);
  CHECK(max_weight_schedule(g, std::vector<long long>(6, 1)) == LinkSet::of({1, 3, 5}));
  CHECK(max_weight_schedule(g, std::vector<long long>(6, 0)) == LinkSet{});
  CHECK(max_weight_schedule(g, std::vector<long long>{10, 1, 1, 1, 1, 1}) ==
        LinkSet::of({1, 3, 5}));
}

TEST_CASE("max weight rejects oversized graphs") {
  const ConflictGraph g = ConflictGraph::ring(30);
  CHECK_THROWS_AS(max_weight_schedule(g, std::vector<long long>(30, 1)),
                  std::invalid_argument);
}

TEST_CASE("max weight dominates the greedy schedulers") {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const ConflictGraph g = random_graph(rng, n, 0.4);
    std::vector<long long> q(n);
    for (auto& v : q) v = static_cast<long long>(rng.next_below(10));
    const LinkSet mw = max_weight_schedule(g, q);
    CHECK(g.is_independent(mw));
    CHECK(maximal_within(g, mw, occupied_of(q)));
    auto weight = [&](const LinkSet& s) {
      long long w = 0;
      for (int link : s.links()) w += q[link - 1];
      return w;
    };
    CHECK(weight(mw) >= weight(lqf_step(g, q)));
    CHECK(weight(mw) >= weight(sp_single_step(g, PriorityVector::identity(n), q)));
  }
}

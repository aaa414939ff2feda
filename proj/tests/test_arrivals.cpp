#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gsched/arrivals.hpp"

using namespace gsched;

namespace {

std::vector<double> empirical_rate(ArrivalProcess& p, long long slots) {
  std::vector<long long> totals(p.num_links(), 0);
  for (long long t = 0; t < slots; ++t) {
    const std::vector<int> arr = p.next_slot();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      REQUIRE(arr[i] >= 0);
      REQUIRE(arr[i] <= p.max_per_slot());
      totals[i] += arr[i];
    }
  }
  std::vector<double> rate(p.num_links());
  for (int i = 0; i < p.num_links(); ++i)
    rate[i] = static_cast<double>(totals[i]) / static_cast<double>(slots);
  return rate;
}

}  // namespace

TEST_CASE("bernoulli extremes") {
  auto zero = bernoulli_process(std::vector<double>(4, 0.0), 1);
  auto one = bernoulli_process(std::vector<double>(4, 1.0), 1);
  for (int t = 0; t < 50; ++t) {
    CHECK(zero->next_slot() == std::vector<int>(4, 0));
    CHECK(one->next_slot() == std::vector<int>(4, 1));
  }
  CHECK_THROWS_AS(bernoulli_process({1.2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli_process({-0.1}, 1), std::invalid_argument);
}

TEST_CASE("bernoulli empirical rate at desk scale") {
  auto p = bernoulli_process(std::vector<double>(6, 0.48), 42);
  const std::vector<double> rate = empirical_rate(*p, 100000);
  for (double r : rate) CHECK(std::abs(r - 0.48) < 0.01);
}

TEST_CASE("identical seeds give identical traces") {
  auto a = bernoulli_process(std::vector<double>(5, 0.3), 9);
  auto b = bernoulli_process(std::vector<double>(5, 0.3), 9);
  for (int t = 0; t < 200; ++t) CHECK(a->next_slot() == b->next_slot());
  auto c = ring6_adversarial(0.2, 4);
  auto d = ring6_adversarial(0.2, 4);
  for (int t = 0; t < 200; ++t) CHECK(c->next_slot() == d->next_slot());
}

TEST_CASE("ring6 adversarial periodic pattern at epsilon 0") {
  auto p = ring6_adversarial(0.0, 1);
  CHECK(p->declared_rate() == std::vector<double>(6, 1.0 / 3.0));
  CHECK(p->max_per_slot() == 2);
  CHECK(p->next_slot() == std::vector<int>{1, 0, 0, 1, 0, 0});
  CHECK(p->next_slot() == std::vector<int>{0, 1, 0, 0, 1, 0});
  CHECK(p->next_slot() == std::vector<int>{0, 0, 1, 0, 0, 1});
  CHECK(p->next_slot() == std::vector<int>{1, 0, 0, 1, 0, 0});
  CHECK_THROWS_AS(ring6_adversarial(1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(ring6_adversarial(0.5, 0.0, 1), std::invalid_argument);
}

TEST_CASE("ring6 adversarial empirical rate") {
  auto p = ring6_adversarial(0.1, 7);
  const std::vector<double> rate = empirical_rate(*p, 100000);
  for (double r : rate) CHECK(std::abs(r - (1.0 / 3.0 + 0.1)) < 0.01);
}

TEST_CASE("bipartite adversarial pattern and rates") {
  auto p = bipartite_adversarial(0.25, 0.0, 1);
  CHECK(p->declared_rate() == std::vector<double>(8, 0.25));
  CHECK(p->next_slot() == std::vector<int>{1, 0, 0, 0, 1, 0, 0, 0});
  CHECK(p->next_slot() == std::vector<int>{0, 1, 0, 0, 0, 1, 0, 0});
  CHECK(p->next_slot() == std::vector<int>{0, 0, 1, 0, 0, 0, 1, 0});
  CHECK(p->next_slot() == std::vector<int>{0, 0, 0, 1, 0, 0, 0, 1});
  CHECK(p->next_slot() == std::vector<int>{1, 0, 0, 0, 1, 0, 0, 0});
  auto none = bipartite_adversarial(0.0, 0.0, 1);
  for (int t = 0; t < 20; ++t) CHECK(none->next_slot() == std::vector<int>(8, 0));
  auto scaled = bipartite_adversarial(0.2, 0.0, 3);
  const std::vector<double> rate = empirical_rate(*scaled, 100000);
  for (double r : rate) CHECK(std::abs(r - 0.2) < 0.01);
  CHECK_THROWS_AS(bipartite_adversarial(0.3, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(bipartite_adversarial(0.2, -0.1, 1), std::invalid_argument);
}

TEST_CASE("split: degenerate all-to-first") {
  SplitSpec spec;
  spec.fractions = {{0.3, 0.3}, {0.0, 0.0}};
  auto subs = split_process(bernoulli_process({0.3, 0.3}, 5), spec, 11);
  REQUIRE(subs.size() == 2);
  for (int t = 0; t < 500; ++t) {
    CHECK(subs[1]->next_slot() == std::vector<int>(2, 0));
    const std::vector<int> row = subs[0]->next_slot();
    for (int v : row) CHECK(v >= 0);
  }
}

TEST_CASE("split conserves arrivals slot by slot") {
  for (const SplitMode mode : {SplitMode::probabilistic, SplitMode::round_robin}) {
    SplitSpec spec;
    spec.fractions = {{0.2, 0.1, 0.0}, {0.3, 0.2, 0.0}, {0.1, 0.4, 0.0}};
    spec.mode = mode;
    auto reference = bernoulli_process({0.6, 0.7, 0.0}, 77);
    auto subs = split_process(bernoulli_process({0.6, 0.7, 0.0}, 77), spec, 13);
    for (int t = 0; t < 2000; ++t) {
      const std::vector<int> expected = reference->next_slot();
      std::vector<int> sum(3, 0);
      for (auto& sub : subs) {
        const std::vector<int> row = sub->next_slot();
        for (int i = 0; i < 3; ++i) sum[i] += row[i];
      }
      CHECK(sum == expected);
      CHECK(sum[2] == 0);  // zero-rate link stays silent in every sub-process
    }
  }
}

TEST_CASE("split empirical rates match the declared fractions") {
  SplitSpec spec;
  spec.fractions = {{0.3, 0.2}, {0.3, 0.2}};
  auto subs = split_process(bernoulli_process({0.6, 0.4}, 21), spec, 22);
  CHECK(subs[0]->declared_rate() == std::vector<double>{0.3, 0.2});
  std::vector<double> r0 = empirical_rate(*subs[0], 100000);
  std::vector<double> r1 = empirical_rate(*subs[1], 100000);
  CHECK(std::abs(r0[0] - 0.3) < 0.01);
  CHECK(std::abs(r0[1] - 0.2) < 0.01);
  CHECK(std::abs(r1[0] - 0.3) < 0.01);
  CHECK(std::abs(r1[1] - 0.2) < 0.01);
}

TEST_CASE("round-robin split is deterministic and proportional") {
  SplitSpec spec;
  spec.fractions = {{0.25}, {0.75}};
  spec.mode = SplitMode::round_robin;
  auto subs = split_process(bernoulli_process({1.0}, 1), spec, 2);
  long long first = 0, second = 0;
  for (int t = 0; t < 1000; ++t) {
    first += subs[0]->next_slot()[0];
    second += subs[1]->next_slot()[0];
  }
  CHECK(first == 250);
  CHECK(second == 750);
}

TEST_CASE("split rejects fractions that do not sum to the parent rate") {
  SplitSpec spec;
  spec.fractions = {{0.3}, {0.2}};
  CHECK_THROWS_AS(split_process(bernoulli_process({0.6}, 1), spec, 1),
                  std::invalid_argument);
}

TEST_CASE("trace dump and replay round-trip") {
  auto original = ring6_adversarial(0.15, 33);
  std::ostringstream text;
  dump_trace(*original, 300, text);
  std::istringstream in(text.str());
  auto replayed = replay_trace(in, 6);
  auto reference = ring6_adversarial(0.15, 33);
  for (int t = 0; t < 300; ++t) CHECK(replayed->next_slot() == reference->next_slot());
  CHECK(replayed->next_slot() == std::vector<int>(6, 0));
}

TEST_CASE("empirical rate stays within the statistical envelope") {
  // |A(T)/T - a| <= 3 sqrt(a_max / T) should hold for nearly every seed
  const long long T = 5000;
  int ok = 0;
  const int trials = 100;
  for (int s = 0; s < trials; ++s) {
    auto p = ring6_adversarial(0.2, 1000 + s);
    const std::vector<double> rate = empirical_rate(*p, T);
    const double bound = 3.0 * std::sqrt(2.0 / static_cast<double>(T));
    bool inside = true;
    for (double r : rate)
      if (std::abs(r - (1.0 / 3.0 + 0.2)) > bound) inside = false;
    if (inside) ++ok;
  }
  CHECK(ok >= 99);
}

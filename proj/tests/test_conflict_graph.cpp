#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "gsched/conflict_graph.hpp"
#include "gsched/rng.hpp"

using namespace gsched;

namespace {

ConflictGraph random_graph(Rng& rng, int n, double edge_prob) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (rng.bernoulli(edge_prob)) edges.emplace_back(i, j);
  return ConflictGraph(n, edges);
}

PriorityVector random_priority(Rng& rng, int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
  return PriorityVector::from_order(order);
}

}  // namespace

TEST_CASE("build_graph: the 6-ring edge list") {
  const ConflictGraph g(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}});
  CHECK(g.num_links() == 6);
  CHECK(g.num_edges() == 6);
  CHECK(g.neighbors(1) == std::vector<int>{2, 6});
  CHECK(g.neighbors(2) == std::vector<int>{1, 3});
}

TEST_CASE("build_graph: single isolated link") {
  const ConflictGraph g(1, {});
  CHECK(g.num_links() == 1);
  CHECK(g.neighbors(1).empty());
}

TEST_CASE("build_graph: rejects bad input") {
  CHECK_THROWS_AS(ConflictGraph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(ConflictGraph(3, {{1, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(ConflictGraph(3, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(ConflictGraph(65, {}), std::invalid_argument);
}

TEST_CASE("build_graph: duplicate edges collapse") {
  const ConflictGraph g(3, {{1, 2}, {2, 1}, {1, 2}});
  CHECK(g.num_edges() == 1);
  CHECK(g.neighbors(1) == std::vector<int>{2});
}

TEST_CASE("ring builder") {
  const ConflictGraph r6 = ConflictGraph::ring(6);
  CHECK(r6.neighbors(1) == std::vector<int>{2, 6});
  CHECK(r6.neighbors(2) == std::vector<int>{1, 3});
  const ConflictGraph r3 = ConflictGraph::ring(3);
  for (int i = 1; i <= 3; ++i) CHECK(r3.neighbors(i).size() == 2);
  CHECK(ConflictGraph::ring(4).neighbors(1) == std::vector<int>{2, 4});
  CHECK_THROWS_AS(ConflictGraph::ring(2), std::invalid_argument);
}

TEST_CASE("bipartite_fig1b edges") {
  const ConflictGraph g = ConflictGraph::bipartite_fig1b();
  CHECK(g.num_links() == 8);
  CHECK(g.num_edges() == 12);
  CHECK(g.conflicts(1, 6));
  CHECK_FALSE(g.conflicts(1, 5));
  CHECK(g.neighbors(1) == std::vector<int>{6, 7, 8});
  for (int i = 1; i <= 4; ++i) CHECK(g.is_independent(LinkSet::of({i, i + 4})));
}

TEST_CASE("incidence matrix of the 6-ring with identity priorities") {
  const ConflictGraph g = ConflictGraph::ring(6);
  const IncidenceMatrix P(g, PriorityVector::identity(6));
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j) {
      const bool expected = (i == j) || (i >= 2 && j == i - 1) || (i == 6 && j == 1);
      CHECK(P.entry(i, j) == expected);
    }
}

TEST_CASE("incidence matrix with reversed priorities") {
  const ConflictGraph g = ConflictGraph::ring(6);
  const IncidenceMatrix P(g, PriorityVector({6, 5, 4, 3, 2, 1}));
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j) {
      const bool expected = (i == j) || (i <= 5 && j == i + 1) || (i == 1 && j == 6);
      CHECK(P.entry(i, j) == expected);
    }
}

TEST_CASE("incidence matrix properties on random instances") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(6));
    const ConflictGraph g = random_graph(rng, n, 0.5);
    const PriorityVector p = random_priority(rng, n);
    const IncidenceMatrix P(g, p);
    for (int i = 1; i <= n; ++i) {
      CHECK(P.entry(i, i));
      for (int j : g.neighbors(i))
        CHECK(static_cast<int>(P.entry(i, j)) + static_cast<int>(P.entry(j, i)) == 1);
    }
  }
}

TEST_CASE("incidence matrix rejects a size mismatch") {
  const ConflictGraph g = ConflictGraph::ring(6);
  CHECK_THROWS_AS(IncidenceMatrix(g, PriorityVector::identity(5)),
                  std::invalid_argument);
}

TEST_CASE("weighted norm reproduces the worked 6-ring example") {
  const ConflictGraph g = ConflictGraph::ring(6);
  const IncidenceMatrix P(g, PriorityVector::identity(6));
  const std::vector<double> a{0.3, 0.4, 0.3, 0.4, 0.3, 0.4};
  const std::vector<double> expected_rows{0.3, 0.7, 0.7, 0.7, 0.7, 1.0};
  for (int i = 1; i <= 6; ++i)
    CHECK(P.row_load(i, a) == doctest::Approx(expected_rows[i - 1]).epsilon(1e-12));
  CHECK(weighted_norm(P, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted norm edge cases") {
  const ConflictGraph g = ConflictGraph::ring(6);
  const IncidenceMatrix P(g, PriorityVector::identity(6));
  CHECK(weighted_norm(P, std::vector<double>(6, 0.0)) == 0.0);
  const ConflictGraph single(1, {});
  const IncidenceMatrix P1(single, PriorityVector::identity(1));
  CHECK(weighted_norm(P1, std::vector<double>{0.37}) == 0.37);
  CHECK_THROWS_AS(weighted_norm(P, std::vector<double>{1, 1, 1, 1, 1, -0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_norm(P, std::vector<double>(5, 0.1)), std::invalid_argument);
}

TEST_CASE("weighted norm dominates the max rate and is monotone") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(6));
    const ConflictGraph g = random_graph(rng, n, 0.5);
    const PriorityVector p = random_priority(rng, n);
    const IncidenceMatrix P(g, p);
    std::vector<double> a(n), larger(n);
    double max_rate = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] = rng.next_double();
      larger[i] = a[i] + rng.next_double();
      max_rate = std::max(max_rate, a[i]);
    }
    const double norm = weighted_norm(P, a);
    CHECK(norm >= max_rate);
    CHECK(weighted_norm(P, larger) >= norm);
    // the lowest-priority link sees its whole closed neighborhood
    int lowest = 1;
    for (int i = 1; i <= n; ++i)
      if (p.rank_of(i) == n) lowest = i;
    double closed = a[lowest - 1];
    for (int j : g.neighbors(lowest)) closed += a[j - 1];
    CHECK(P.row_load(lowest, a) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("is_independent") {
  const ConflictGraph g = ConflictGraph::ring(6);
  CHECK(g.is_independent(LinkSet::of({1, 3, 5})));
  CHECK_FALSE(g.is_independent(LinkSet::of({1, 2})));
  CHECK(g.is_independent(LinkSet{}));
}

TEST_CASE("priority vector validation and order") {
  CHECK_THROWS_AS(PriorityVector({1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(PriorityVector({0, 1, 2}), std::invalid_argument);
  const PriorityVector p({2, 3, 1});
  CHECK(p.consideration_order() == std::vector<int>{3, 1, 2});
  CHECK(PriorityVector::from_order({3, 1, 2}) == p);
}

TEST_CASE("edge-list parsing with comments and builder specifiers") {
  std::istringstream in("# the 6-ring\n6\n1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n");
  const ConflictGraph g = ConflictGraph::from_edge_list(in);
  CHECK(g.num_links() == 6);
  CHECK(g.neighbors(1) == std::vector<int>{2, 6});
  CHECK(ConflictGraph::from_spec("ring:6").num_edges() == 6);
  CHECK(ConflictGraph::from_spec("bipartite8").num_edges() == 12);
  CHECK_THROWS(ConflictGraph::from_spec("ring:banana"));
}

TEST_CASE("link set lexicographic order") {
  CHECK(lex_less(LinkSet::of({1, 3, 5}), LinkSet::of({2, 4, 6})));
  CHECK(lex_less(LinkSet::of({1}), LinkSet::of({1, 2})));
  CHECK(lex_less(LinkSet::of({1, 2, 3}), LinkSet::of({1, 4})));
  CHECK_FALSE(lex_less(LinkSet::of({2}), LinkSet::of({1, 3})));
}

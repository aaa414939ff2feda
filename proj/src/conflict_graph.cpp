#include "gsched/conflict_graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace gsched {

LinkSet LinkSet::of(std::initializer_list<int> links) {
  LinkSet s;
  for (int l : links) s.insert(l);
  return s;
}

int LinkSet::size() const { return std::popcount(mask_); }

std::vector<int> LinkSet::links() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1)
    out.push_back(std::countr_zero(m) + 1);
  return out;
}

bool lex_less(const LinkSet& a, const LinkSet& b) {
  const std::vector<int> la = a.links();
  const std::vector<int> lb = b.links();
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

ConflictGraph::ConflictGraph(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw std::invalid_argument("graph needs at least one link");
  if (n > kMaxLinks)
    throw std::invalid_argument("graph has " + std::to_string(n) + " links, cap is " +
                                std::to_string(kMaxLinks));
  n_ = n;
  adj_.assign(n, {});
  adj_mask_.assign(n, 0);
  for (const auto& [i, j] : edges) {
    if (i < 1 || i > n || j < 1 || j > n)
      throw std::invalid_argument("edge (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") out of range 1.." + std::to_string(n));
    if (i == j)
      throw std::invalid_argument("self-loop at link " + std::to_string(i));
    if (conflicts(i, j)) continue;  // duplicate edge, keep first
    adj_mask_[i - 1] |= std::uint64_t{1} << (j - 1);
    adj_mask_[j - 1] |= std::uint64_t{1} << (i - 1);
    adj_[i - 1].push_back(j);
    adj_[j - 1].push_back(i);
    ++num_edges_;
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

ConflictGraph ConflictGraph::ring(int n) {
  if (n < 3) throw std::invalid_argument("ring needs n >= 3");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n);
  for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(n, 1);
  return ConflictGraph(n, edges);
}

ConflictGraph ConflictGraph::bipartite_fig1b() {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= 4; ++i)
    for (int j = 5; j <= 8; ++j)
      if (j != i + 4) edges.emplace_back(i, j);
  return ConflictGraph(8, edges);
}

ConflictGraph ConflictGraph::from_edge_list(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream row(line);
    if (n < 0) {
      if (!(row >> n)) throw std::runtime_error("edge list: bad link count line: " + line);
      continue;
    }
    int i, j;
    if (!(row >> i >> j)) throw std::runtime_error("edge list: bad edge line: " + line);
    edges.emplace_back(i, j);
  }
  if (n < 0) throw std::runtime_error("edge list: empty input");
  return ConflictGraph(n, edges);
}

ConflictGraph ConflictGraph::load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return from_edge_list(in);
}

ConflictGraph ConflictGraph::from_spec(const std::string& spec) {
  if (spec.rfind("ring:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(spec.substr(5));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad ring specifier: " + spec);
    }
    return ring(n);
  }
  if (spec == "bipartite8") return bipartite_fig1b();
  return load_edge_list(spec);
}

const std::vector<int>& ConflictGraph::neighbors(int link) const {
  if (link < 1 || link > n_) throw std::invalid_argument("link id out of range");
  return adj_[link - 1];
}

std::uint64_t ConflictGraph::neighbor_mask(int link) const {
  if (link < 1 || link > n_) throw std::invalid_argument("link id out of range");
  return adj_mask_[link - 1];
}

bool ConflictGraph::conflicts(int i, int j) const {
  return (adj_mask_[i - 1] >> (j - 1)) & 1u;
}

bool ConflictGraph::is_independent(const LinkSet& s) const {
  for (std::uint64_t m = s.mask(); m != 0; m &= m - 1) {
    const int i = std::countr_zero(m);
    if (adj_mask_[i] & s.mask()) return false;
  }
  return true;
}

PriorityVector::PriorityVector(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  const int n = static_cast<int>(ranks_.size());
  if (n == 0) throw std::invalid_argument("empty priority vector");
  std::vector<bool> seen(n + 1, false);
  for (int r : ranks_) {
    if (r < 1 || r > n || seen[r])
      throw std::invalid_argument("priority vector is not a permutation of 1..n");
    seen[r] = true;
  }
}

PriorityVector PriorityVector::identity(int n) {
  std::vector<int> ranks(n);
  for (int i = 0; i < n; ++i) ranks[i] = i + 1;
  return PriorityVector(std::move(ranks));
}

PriorityVector PriorityVector::from_order(const std::vector<int>& links_best_first) {
  const int n = static_cast<int>(links_best_first.size());
  std::vector<int> ranks(n, 0);
  for (int pos = 0; pos < n; ++pos) {
    const int link = links_best_first[pos];
    if (link < 1 || link > n) throw std::invalid_argument("order contains bad link id");
    ranks[link - 1] = pos + 1;
  }
  return PriorityVector(std::move(ranks));
}

std::vector<int> PriorityVector::consideration_order() const {
  std::vector<int> order(ranks_.size());
  for (int link = 1; link <= size(); ++link) order[ranks_[link - 1] - 1] = link;
  return order;
}

IncidenceMatrix::IncidenceMatrix(const ConflictGraph& g, const PriorityVector& p) {
  if (g.num_links() != p.size())
    throw std::invalid_argument("priority vector size does not match graph");
  n_ = g.num_links();
  higher_.assign(n_, {});
  for (int i = 1; i <= n_; ++i)
    for (int j : g.neighbors(i))
      if (p.rank_of(i) > p.rank_of(j)) higher_[i - 1].push_back(j);
}

bool IncidenceMatrix::entry(int i, int j) const {
  if (i == j) return true;
  const auto& row = higher_[i - 1];
  return std::binary_search(row.begin(), row.end(), j);
}

double IncidenceMatrix::row_load(int i, std::span<const double> rates) const {
  double sum = rates[i - 1];
  for (int j : higher_[i - 1]) sum += rates[j - 1];
  return sum;
}

double weighted_norm(const IncidenceMatrix& P, std::span<const double> rates) {
  if (static_cast<int>(rates.size()) != P.size())
    throw std::invalid_argument("rate vector size does not match incidence matrix");
  for (double r : rates)
    if (r < 0) throw std::invalid_argument("rate components must be nonnegative");
  double norm = 0.0;
  for (int i = 1; i <= P.size(); ++i) norm = std::max(norm, P.row_load(i, rates));
  return norm;
}

}  // namespace gsched

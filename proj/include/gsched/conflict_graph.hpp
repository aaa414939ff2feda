#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsched {

// Link ids are 1-based throughout the public API; vectors indexed by link use
// position link-1.

// A set of links held as a bitmask (valid for graphs up to 64 links).
class LinkSet {
 public:
  LinkSet() = default;
  explicit LinkSet(std::uint64_t mask) : mask_(mask) {}
  static LinkSet of(std::initializer_list<int> links);

  bool contains(int link) const { return (mask_ >> (link - 1)) & 1u; }
  void insert(int link) { mask_ |= std::uint64_t{1} << (link - 1); }
  void erase(int link) { mask_ &= ~(std::uint64_t{1} << (link - 1)); }
  int size() const;
  bool empty() const { return mask_ == 0; }
  std::uint64_t mask() const { return mask_; }
  std::vector<int> links() const;  // ascending ids

  bool operator==(const LinkSet&) const = default;

 private:
  std::uint64_t mask_ = 0;
};

// Ascending-element lexicographic order, used for deterministic tie-breaking.
bool lex_less(const LinkSet& a, const LinkSet& b);

// Undirected conflict graph over links 1..n. Immutable after construction.
class ConflictGraph {
 public:
  static constexpr int kMaxLinks = 64;

  ConflictGraph(int n, const std::vector<std::pair<int, int>>& edges);

  // Cycle graph 1-2-...-n-1, n >= 3.
  static ConflictGraph ring(int n);

  // The 8-link incomplete bipartite graph: left links 1..4, right links 5..8,
  // left link i conflicts with every right link except i+4.
  static ConflictGraph bipartite_fig1b();

  // Edge-list text: first non-comment line is n, then one "i j" pair per line.
  // Lines starting with '#' are comments.
  static ConflictGraph from_edge_list(std::istream& in);
  static ConflictGraph load_edge_list(const std::string& path);

  // Accepts "ring:<n>", "bipartite8", or a path to an edge-list file.
  static ConflictGraph from_spec(const std::string& spec);

  int num_links() const { return n_; }
  std::size_t num_edges() const { return num_edges_; }
  const std::vector<int>& neighbors(int link) const;
  std::uint64_t neighbor_mask(int link) const;
  bool conflicts(int i, int j) const;
  bool is_independent(const LinkSet& s) const;

 private:
  int n_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<std::vector<int>> adj_;       // sorted neighbor lists
  std::vector<std::uint64_t> adj_mask_;
};

// Permutation of 1..n; rank 1 is the highest priority, n the lowest.
class PriorityVector {
 public:
  explicit PriorityVector(std::vector<int> ranks);
  static PriorityVector identity(int n);
  // Builds from a consideration order (first element = highest priority).
  static PriorityVector from_order(const std::vector<int>& links_best_first);

  int size() const { return static_cast<int>(ranks_.size()); }
  int rank_of(int link) const { return ranks_[link - 1]; }
  const std::vector<int>& ranks() const { return ranks_; }
  // Link ids sorted by increasing rank (highest priority first).
  std::vector<int> consideration_order() const;

  bool operator==(const PriorityVector&) const = default;

 private:
  std::vector<int> ranks_;
};

// Priority-weighted incidence matrix: unit diagonal, P_ij = 1 iff j is a
// higher-priority neighbor of i. Stored sparsely per row.
class IncidenceMatrix {
 public:
  IncidenceMatrix(const ConflictGraph& g, const PriorityVector& p);

  int size() const { return n_; }
  bool entry(int i, int j) const;
  // (P a)_i = a_i + sum of a_j over higher-priority neighbors j of i
  double row_load(int i, std::span<const double> rates) const;
  const std::vector<int>& higher_priority_neighbors(int link) const {
    return higher_[link - 1];
  }

 private:
  int n_;
  std::vector<std::vector<int>> higher_;
};

// ||P a||_inf for a >= 0; throws on negative components or size mismatch.
double weighted_norm(const IncidenceMatrix& P, std::span<const double> rates);

}  // namespace gsched

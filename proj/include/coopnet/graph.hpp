#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace coopnet {

// Immutable undirected graph on vertices 0..n-1. No self-loops, no parallel
// edges; adjacency is symmetric by construction. Instances can be shared
// freely across concurrent simulation replicates.
class Graph {
 public:
  Graph(int num_vertices, const std::vector<std::pair<int, int>>& edge_list);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  bool adjacent(int u, int v) const;

  // Open neighborhood, sorted ascending.
  const std::vector<int>& neighbors(int v) const;

  // Closed neighborhood N_v: v together with its neighbors, sorted.
  std::vector<int> closed_neighborhood(int v) const;

  // |N_v| = degree(v) + 1.
  int closed_degree(int v) const;

  // Normalized edge list: pairs (u, v) with u < v, sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  void check_vertex(int v) const;

  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

// Partition of the vertex set into cliques.
struct CliqueCover {
  std::vector<std::vector<int>> blocks;

  std::size_t size() const { return blocks.size(); }
};

// Throws std::invalid_argument if `cover` is not a partition of the vertex
// set of `g` into cliques.
void validate_clique_cover(const Graph& g, const CliqueCover& cover);

// Maps each vertex to the index of its block in `cover`.
std::vector<int> block_assignment(const Graph& g, const CliqueCover& cover);

// Exact independence number by branch and bound (max clique on the
// complement with a greedy-coloring bound). Refuses graphs larger than
// `exact_limit` instead of silently falling back to a heuristic.
int independence_number_exact(const Graph& g, int exact_limit = 40);

// Exhaustive subset search. Independent of the branch-and-bound path; used
// as its oracle and by the verification corpus. n <= 20.
int independence_number_bruteforce(const Graph& g);

// Greedy maximal independent set, lowest index first.
std::vector<int> maximal_independent_set(const Graph& g);

// Greedy clique cover: scan vertices ascending, grow each clique greedily.
// Block count is always >= the independence number.
CliqueCover greedy_clique_cover(const Graph& g);

// Exact minimum clique cover size by exhaustive coloring of the complement.
// n <= `limit` (default 12); intended for oracles and small graphs only.
int minimum_clique_cover_size_exact(const Graph& g, int limit = 12);

// Greedy dominating set (max coverage, lowest index tie-break). Size is an
// upper bound on the dominating number.
std::vector<int> greedy_dominating_set(const Graph& g);

// Sum over vertices of 1/|N_v|.
double inverse_neighborhood_sum(const Graph& g);

// Subgraph induced by `vertices` (need not be sorted); vertices are
// relabeled 0..k-1 in ascending order of their original labels.
Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

// Generators. All are deterministic given their arguments.
Graph make_star(int n);      // center is vertex 0
Graph make_cycle(int n);     // n >= 3
Graph make_complete(int n);
Graph make_edgeless(int n);
Graph make_path(int n);
Graph make_gnp(int n, double p, std::uint64_t seed);
Graph make_disjoint_cliques(int count, int size);

// Result of the ratio-sum check: sum = sum_v q_v / Q_v with
// Q_v = sum_{w in N_v} q_w, alpha the exact independence number, and
// holds = (sum <= alpha + 1e-9).
struct RatioBoundResult {
  double sum = 0.0;
  int alpha = 0;
  bool holds = false;
};

// Preconditions: q sums to 1 within 1e-12 and every closed neighborhood has
// positive mass; violations throw std::invalid_argument.
RatioBoundResult verify_ratio_bound(const Graph& g, const std::vector<double>& q);

// Edge-list text format: first non-comment line "n m", then m lines "u v".
// Lines starting with '#' are comments. Errors carry line numbers.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace coopnet

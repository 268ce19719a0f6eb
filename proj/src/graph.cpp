#include "coopnet/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "coopnet/rng.hpp"

namespace coopnet {

Graph::Graph(int num_vertices, const std::vector<std::pair<int, int>>& edge_list)
    : n_(num_vertices) {
  if (n_ < 0) throw std::invalid_argument("graph: vertex count must be >= 0");
  std::set<std::pair<int, int>> normalized;
  for (const auto& [u, v] : edge_list) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) {
      throw std::invalid_argument("graph: edge (" + std::to_string(u) + "," +
                                  std::to_string(v) + ") out of range for n=" +
                                  std::to_string(n_));
    }
    if (u == v) {
      throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
    }
    normalized.emplace(std::min(u, v), std::max(u, v));
  }
  edges_.assign(normalized.begin(), normalized.end());
  adj_.resize(n_);
  for (const auto& [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_) {
    throw std::out_of_range("graph: vertex " + std::to_string(v) +
                            " out of range for n=" + std::to_string(n_));
  }
}

bool Graph::adjacent(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

const std::vector<int>& Graph::neighbors(int v) const {
  check_vertex(v);
  return adj_[v];
}

std::vector<int> Graph::closed_neighborhood(int v) const {
  check_vertex(v);
  std::vector<int> result = adj_[v];
  result.insert(std::lower_bound(result.begin(), result.end(), v), v);
  return result;
}

int Graph::closed_degree(int v) const {
  check_vertex(v);
  return static_cast<int>(adj_[v].size()) + 1;
}

void validate_clique_cover(const Graph& g, const CliqueCover& cover) {
  const int n = g.num_vertices();
  std::vector<int> seen(n, 0);
  for (const auto& block : cover.blocks) {
    if (block.empty()) throw std::invalid_argument("clique cover: empty block");
    for (int v : block) {
      if (v < 0 || v >= n) throw std::invalid_argument("clique cover: vertex out of range");
      if (seen[v]++) {
        throw std::invalid_argument("clique cover: vertex " + std::to_string(v) +
                                    " appears in more than one block");
      }
    }
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (std::size_t j = i + 1; j < block.size(); ++j) {
        if (!g.adjacent(block[i], block[j])) {
          throw std::invalid_argument("clique cover: block is not a clique (" +
                                      std::to_string(block[i]) + "," +
                                      std::to_string(block[j]) + " not adjacent)");
        }
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!seen[v]) {
      throw std::invalid_argument("clique cover: vertex " + std::to_string(v) +
                                  " not covered");
    }
  }
}

std::vector<int> block_assignment(const Graph& g, const CliqueCover& cover) {
  validate_clique_cover(g, cover);
  std::vector<int> assignment(g.num_vertices(), -1);
  for (std::size_t b = 0; b < cover.blocks.size(); ++b) {
    for (int v : cover.blocks[b]) assignment[v] = static_cast<int>(b);
  }
  return assignment;
}

namespace {

std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  std::vector<std::uint64_t> masks(g.num_vertices(), 0);
  for (const auto& [u, v] : g.edges()) {
    masks[u] |= 1ULL << v;
    masks[v] |= 1ULL << u;
  }
  return masks;
}

// Max clique with a greedy-coloring upper bound for pruning.
class MaxCliqueSolver {
 public:
  explicit MaxCliqueSolver(std::vector<std::uint64_t> adj) : adj_(std::move(adj)) {}

  int solve(std::uint64_t all) {
    best_ = 0;
    expand(all, 0);
    return best_;
  }

 private:
  void expand(std::uint64_t cand, int size) {
    if (cand == 0) {
      best_ = std::max(best_, size);
      return;
    }
    // Greedy color classes over the candidate set; color index bounds the
    // clique size reachable through each vertex.
    std::vector<int> order;
    std::vector<int> color;
    std::uint64_t uncolored = cand;
    int c = 0;
    while (uncolored != 0) {
      ++c;
      std::uint64_t avail = uncolored;
      while (avail != 0) {
        const int v = std::countr_zero(avail);
        order.push_back(v);
        color.push_back(c);
        uncolored &= ~(1ULL << v);
        avail &= ~(1ULL << v);
        avail &= ~adj_[v];
      }
    }
    std::uint64_t cur = cand;
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      const int v = order[i];
      if (size + color[i] <= best_) return;
      expand(cur & adj_[v], size + 1);
      cur &= ~(1ULL << v);
    }
  }

  std::vector<std::uint64_t> adj_;
  int best_ = 0;
};

}  // namespace

int independence_number_exact(const Graph& g, int exact_limit) {
  const int n = g.num_vertices();
  if (exact_limit > 64) {
    throw std::invalid_argument("independence_number_exact: limit above 64 unsupported");
  }
  if (n > exact_limit) {
    throw std::invalid_argument(
        "independence_number_exact: n=" + std::to_string(n) +
        " exceeds the exact-solver limit " + std::to_string(exact_limit) +
        "; use the heuristic explicitly");
  }
  if (n == 0) return 0;
  const std::uint64_t all = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  auto adj = adjacency_masks(g);
  // Independence number = clique number of the complement.
  std::vector<std::uint64_t> comp(n);
  for (int v = 0; v < n; ++v) comp[v] = ~adj[v] & all & ~(1ULL << v);
  return MaxCliqueSolver(std::move(comp)).solve(all);
}

int independence_number_bruteforce(const Graph& g) {
  const int n = g.num_vertices();
  if (n > 20) {
    throw std::invalid_argument("independence_number_bruteforce: n > 20");
  }
  auto adj = adjacency_masks(g);
  int best = 0;
  for (std::uint64_t subset = 0; subset < (1ULL << n); ++subset) {
    bool independent = true;
    for (std::uint64_t rest = subset; rest != 0 && independent; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      if (adj[v] & subset) independent = false;
    }
    if (independent) best = std::max(best, std::popcount(subset));
  }
  return best;
}

std::vector<int> maximal_independent_set(const Graph& g) {
  std::vector<int> result;
  std::vector<char> blocked(g.num_vertices(), 0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (blocked[v]) continue;
    result.push_back(v);
    blocked[v] = 1;
    for (int w : g.neighbors(v)) blocked[w] = 1;
  }
  return result;
}

CliqueCover greedy_clique_cover(const Graph& g) {
  CliqueCover cover;
  std::vector<char> covered(g.num_vertices(), 0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (covered[v]) continue;
    std::vector<int> block{v};
    covered[v] = 1;
    for (int w = v + 1; w < g.num_vertices(); ++w) {
      if (covered[w]) continue;
      bool joins = true;
      for (int u : block) {
        if (!g.adjacent(u, w)) {
          joins = false;
          break;
        }
      }
      if (joins) {
        block.push_back(w);
        covered[w] = 1;
      }
    }
    cover.blocks.push_back(std::move(block));
  }
  return cover;
}

namespace {

// Exact vertex coloring of the graph given by `adj` masks.
class ExactColoring {
 public:
  explicit ExactColoring(std::vector<std::uint64_t> adj)
      : adj_(std::move(adj)), n_(static_cast<int>(adj_.size())) {}

  int solve(int upper_bound) {
    best_ = upper_bound;
    colors_.assign(n_, 0);
    recurse(0, 0);
    return best_;
  }

 private:
  void recurse(int v, int used) {
    if (used >= best_) return;
    if (v == n_) {
      best_ = used;
      return;
    }
    for (int c = 1; c <= used + 1 && c < best_ + 1; ++c) {
      bool ok = true;
      for (int w = 0; w < v; ++w) {
        if (colors_[w] == c && (adj_[v] & (1ULL << w))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      colors_[v] = c;
      recurse(v + 1, std::max(used, c));
      colors_[v] = 0;
    }
  }

  std::vector<std::uint64_t> adj_;
  int n_;
  int best_ = 0;
  std::vector<int> colors_;
};

}  // namespace

int minimum_clique_cover_size_exact(const Graph& g, int limit) {
  const int n = g.num_vertices();
  if (limit > 20) {
    throw std::invalid_argument("minimum_clique_cover_size_exact: limit above 20");
  }
  if (n > limit) {
    throw std::invalid_argument("minimum_clique_cover_size_exact: n=" +
                                std::to_string(n) + " exceeds limit " +
                                std::to_string(limit));
  }
  if (n == 0) return 0;
  const std::uint64_t all = (1ULL << n) - 1;
  auto adj = adjacency_masks(g);
  std::vector<std::uint64_t> comp(n);
  for (int v = 0; v < n; ++v) comp[v] = ~adj[v] & all & ~(1ULL << v);
  // Minimum clique cover of g = chromatic number of the complement.
  const int greedy_bound = static_cast<int>(greedy_clique_cover(g).size());
  return ExactColoring(std::move(comp)).solve(greedy_bound);
}

std::vector<int> greedy_dominating_set(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> result;
  std::vector<char> dominated(n, 0);
  int remaining = n;
  while (remaining > 0) {
    int best_v = -1;
    int best_gain = -1;
    for (int v = 0; v < n; ++v) {
      int gain = dominated[v] ? 0 : 1;
      for (int w : g.neighbors(v)) gain += dominated[w] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best_v = v;
      }
    }
    result.push_back(best_v);
    if (!dominated[best_v]) {
      dominated[best_v] = 1;
      --remaining;
    }
    for (int w : g.neighbors(best_v)) {
      if (!dominated[w]) {
        dominated[w] = 1;
        --remaining;
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

double inverse_neighborhood_sum(const Graph& g) {
  double sum = 0.0;
  for (int v = 0; v < g.num_vertices(); ++v) sum += 1.0 / g.closed_degree(v);
  return sum;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
  std::vector<int> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> relabel(g.num_vertices(), -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= g.num_vertices()) {
      throw std::invalid_argument("induced_subgraph: vertex out of range");
    }
    relabel[sorted[i]] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [u, v] : g.edges()) {
    if (relabel[u] >= 0 && relabel[v] >= 0) edges.emplace_back(relabel[u], relabel[v]);
  }
  return Graph(static_cast<int>(sorted.size()), edges);
}

Graph make_star(int n) {
  if (n < 1) throw std::invalid_argument("star: n must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Graph(n, edges);
}

Graph make_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: n must be >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph(n, edges);
}

Graph make_complete(int n) {
  if (n < 1) throw std::invalid_argument("complete: n must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

Graph make_edgeless(int n) {
  if (n < 1) throw std::invalid_argument("edgeless: n must be >= 1");
  return Graph(n, {});
}

Graph make_path(int n) {
  if (n < 1) throw std::invalid_argument("path: n must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

Graph make_gnp(int n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gnp: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("gnp: p must be in [0,1]");
  }
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

Graph make_disjoint_cliques(int count, int size) {
  if (count < 1 || size < 1) {
    throw std::invalid_argument("disjoint_cliques: count and size must be >= 1");
  }
  std::vector<std::pair<int, int>> edges;
  for (int c = 0; c < count; ++c) {
    const int base = c * size;
    for (int i = 0; i < size; ++i) {
      for (int j = i + 1; j < size; ++j) edges.emplace_back(base + i, base + j);
    }
  }
  return Graph(count * size, edges);
}

RatioBoundResult verify_ratio_bound(const Graph& g, const std::vector<double>& q) {
  const int n = g.num_vertices();
  if (static_cast<int>(q.size()) != n) {
    throw std::invalid_argument("verify_ratio_bound: q dimension mismatch");
  }
  double total = 0.0;
  for (double x : q) {
    if (!(x >= 0.0)) throw std::invalid_argument("verify_ratio_bound: q has negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("verify_ratio_bound: q must sum to 1 within 1e-12");
  }
  RatioBoundResult result;
  for (int v = 0; v < n; ++v) {
    double mass = q[v];
    for (int w : g.neighbors(v)) mass += q[w];
    if (mass <= 0.0) {
      throw std::invalid_argument(
          "verify_ratio_bound: closed neighborhood of vertex " + std::to_string(v) +
          " has zero mass");
    }
    result.sum += q[v] / mass;
  }
  result.alpha = independence_number_exact(g);
  result.holds = result.sum <= result.alpha + 1e-9;
  return result;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::runtime_error("edge list parse error at line " + std::to_string(line) +
                           ": " + what);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  long m = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (n < 0) {
      if (!(fields >> n >> m) || n < 0 || m < 0) parse_fail(line_no, "expected header 'n m'");
      continue;
    }
    int u, v;
    if (!(fields >> u >> v)) parse_fail(line_no, "expected edge 'u v'");
    if (u < 0 || u >= n || v < 0 || v >= n) parse_fail(line_no, "vertex out of range");
    if (u == v) parse_fail(line_no, "self-loop");
    edges.emplace_back(u, v);
    if (static_cast<long>(edges.size()) == m) break;
  }
  if (n < 0) throw std::runtime_error("edge list parse error: missing header 'n m'");
  if (static_cast<long>(edges.size()) != m) {
    throw std::runtime_error("edge list parse error: expected " + std::to_string(m) +
                             " edges, found " + std::to_string(edges.size()));
  }
  return Graph(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace coopnet

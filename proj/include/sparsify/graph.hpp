#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Canonical graph / hypergraph representations and their combinatorial
// (cut / volume / quadratic-form) operations. All types are immutable after
// construction; every operation is a pure function.

namespace sparsify {

// Dense eigensolvers are the correctness baseline of this toolkit; refuse
// instances where an n x n matrix is no longer a desk-scale object.
inline constexpr int kMaxDenseVertices = 4000;

struct Edge {
  int a = 0;  // endpoints, normalized a < b
  int b = 0;
  double w = 1.0;
};

class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_vertex(int v, int n) {
  if (v < 0 || v >= n)
    throw std::invalid_argument("vertex index " + std::to_string(v) +
                                " out of range [0," + std::to_string(n) + ")");
}

}  // namespace detail

// Undirected multigraph: parallel edges are kept as distinct entries, since
// both the clique expansion and the deterministic construction produce
// genuine multisets.
class Graph {
 public:
  Graph() = default;

  Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw std::invalid_argument("negative vertex count");
    for (auto& e : edges_) {
      detail::check_vertex(e.a, n_);
      detail::check_vertex(e.b, n_);
      if (e.a == e.b) throw std::invalid_argument("self-loop rejected");
      if (e.w < 0) throw std::invalid_argument("negative edge weight");
      if (e.a > e.b) std::swap(e.a, e.b);
    }
  }

  static Graph unweighted(int n, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<Edge> es;
    es.reserve(pairs.size());
    for (auto [a, b] : pairs) es.push_back({a, b, 1.0});
    return Graph(n, std::move(es));
  }

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }

  double total_weight() const {
    double s = 0;
    for (const auto& e : edges_) s += e.w;
    return s;
  }

  bool is_unweighted() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.w == 1.0; });
  }

  bool is_simple() const {
    std::vector<std::pair<int, int>> ps;
    ps.reserve(edges_.size());
    for (const auto& e : edges_) ps.emplace_back(e.a, e.b);
    std::sort(ps.begin(), ps.end());
    return std::adjacent_find(ps.begin(), ps.end()) == ps.end();
  }

  // Weighted degree (equals the incidence count on unweighted graphs).
  std::vector<double> degrees() const {
    std::vector<double> d(n_, 0.0);
    for (const auto& e : edges_) {
      d[e.a] += e.w;
      d[e.b] += e.w;
    }
    return d;
  }

  // Number of incident edges, ignoring weights.
  std::vector<int> incidence_counts() const {
    std::vector<int> d(n_, 0);
    for (const auto& e : edges_) {
      d[e.a]++;
      d[e.b]++;
    }
    return d;
  }

  double avg_degree() const { return n_ == 0 ? 0.0 : 2.0 * total_weight() / n_; }

  double max_degree() const {
    auto d = degrees();
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
  }

  // Deduplicated adjacency lists (parallel edges collapsed); used by the
  // connected-subset enumeration.
  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(n_);
    for (const auto& e : edges_) {
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
    for (auto& l : adj) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return adj;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct Hyperedge {
  std::vector<int> vertices;  // sorted, no duplicates, size >= 2
  double w = 1.0;
};

class Hypergraph {
 public:
  Hypergraph() = default;

  // Hyperedges of size < 2 contribute nothing to any cut or to Q_H and are
  // dropped; the count is kept so the CLI can warn.
  Hypergraph(int n, std::vector<Hyperedge> edges) : n_(n) {
    if (n_ < 0) throw std::invalid_argument("negative vertex count");
    edges_.reserve(edges.size());
    for (auto& e : edges) {
      std::sort(e.vertices.begin(), e.vertices.end());
      if (std::adjacent_find(e.vertices.begin(), e.vertices.end()) != e.vertices.end())
        throw std::invalid_argument("repeated vertex in hyperedge");
      for (int v : e.vertices) detail::check_vertex(v, n_);
      if (e.w < 0) throw std::invalid_argument("negative hyperedge weight");
      if (e.vertices.size() < 2) {
        dropped_small_++;
        continue;
      }
      edges_.push_back(std::move(e));
    }
  }

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  const Hyperedge& edge(std::size_t i) const { return edges_[i]; }
  int dropped_small_edges() const { return dropped_small_; }

  // Rank: maximum hyperedge cardinality (0 on an empty edge list).
  int rank() const {
    std::size_t r = 0;
    for (const auto& e : edges_) r = std::max(r, e.vertices.size());
    return static_cast<int>(r);
  }

  double total_weight() const {
    double s = 0;
    for (const auto& e : edges_) s += e.w;
    return s;
  }

  bool is_unweighted() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Hyperedge& e) { return e.w == 1.0; });
  }

  // Weighted degree: sum of weights of incident hyperedges.
  std::vector<double> degrees() const {
    std::vector<double> d(n_, 0.0);
    for (const auto& e : edges_)
      for (int v : e.vertices) d[v] += e.w;
    return d;
  }

  std::vector<int> incidence_counts() const {
    std::vector<int> d(n_, 0);
    for (const auto& e : edges_)
      for (int v : e.vertices) d[v]++;
    return d;
  }

  int max_incidence() const {
    auto d = incidence_counts();
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
  }

  double avg_incidence() const {
    if (n_ == 0) return 0.0;
    std::size_t pins = 0;
    for (const auto& e : edges_) pins += e.vertices.size();
    return static_cast<double>(pins) / n_;
  }

 private:
  int n_ = 0;
  std::vector<Hyperedge> edges_;
  int dropped_small_ = 0;
};

namespace detail {

inline std::vector<char> subset_mask(int n, std::span<const int> s) {
  std::vector<char> in(n, 0);
  for (int v : s) {
    check_vertex(v, n);
    in[v] = 1;
  }
  return in;
}

}  // namespace detail

// e_X(S): weighted number of edges with exactly one endpoint in S.
inline double cut_value(const Graph& g, std::span<const int> s) {
  auto in = detail::subset_mask(g.num_vertices(), s);
  double total = 0;
  for (const auto& e : g.edges())
    if (in[e.a] != in[e.b]) total += e.w;
  return total;
}

// Same, restricted to an edge index multiset F (repeats count).
inline double cut_value(const Graph& g, std::span<const std::size_t> f,
                        std::span<const int> s) {
  auto in = detail::subset_mask(g.num_vertices(), s);
  double total = 0;
  for (std::size_t i : f) {
    const Edge& e = g.edge(i);
    if (in[e.a] != in[e.b]) total += e.w;
  }
  return total;
}

// e_X(S,T): weighted number of edges with one endpoint in S and one in T.
// S and T must be disjoint.
inline double cross_cut(const Graph& g, std::span<const int> s, std::span<const int> t) {
  std::vector<char> side(g.num_vertices(), 0);
  for (int v : s) {
    detail::check_vertex(v, g.num_vertices());
    side[v] = 1;
  }
  for (int v : t) {
    detail::check_vertex(v, g.num_vertices());
    if (side[v]) throw std::invalid_argument("cross_cut: S and T overlap");
    side[v] = 2;
  }
  double total = 0;
  for (const auto& e : g.edges()) {
    int x = side[e.a], y = side[e.b];
    if ((x == 1 && y == 2) || (x == 2 && y == 1)) total += e.w;
  }
  return total;
}

inline double cross_cut(const Graph& g, std::span<const std::size_t> f,
                        std::span<const int> s, std::span<const int> t) {
  std::vector<char> side(g.num_vertices(), 0);
  for (int v : s) side[v] = 1;
  for (int v : t) {
    if (side[v]) throw std::invalid_argument("cross_cut: S and T overlap");
    side[v] = 2;
  }
  double total = 0;
  for (std::size_t i : f) {
    const Edge& e = g.edge(i);
    int x = side[e.a], y = side[e.b];
    if ((x == 1 && y == 2) || (x == 2 && y == 1)) total += e.w;
  }
  return total;
}

// Total weight of hyperedges meeting both S and its complement.
inline double hypergraph_cut(const Hypergraph& h, std::span<const int> s) {
  auto in = detail::subset_mask(h.num_vertices(), s);
  double total = 0;
  for (const auto& e : h.edges()) {
    bool inside = false, outside = false;
    for (int v : e.vertices) (in[v] ? inside : outside) = true;
    if (inside && outside) total += e.w;
  }
  return total;
}

inline double hypergraph_cut(const Hypergraph& h, std::span<const std::size_t> f,
                             std::span<const int> s) {
  auto in = detail::subset_mask(h.num_vertices(), s);
  double total = 0;
  for (std::size_t i : f) {
    const Hyperedge& e = h.edge(i);
    bool inside = false, outside = false;
    for (int v : e.vertices) (in[v] ? inside : outside) = true;
    if (inside && outside) total += e.w;
  }
  return total;
}

// Q_H(x) = sum_e w_e * max_{a,b in e} (x_a - x_b)^2.
inline double hypergraph_quadratic(const Hypergraph& h, std::span<const double> x) {
  if (static_cast<int>(x.size()) != h.num_vertices())
    throw std::invalid_argument("hypergraph_quadratic: vector length mismatch");
  double total = 0;
  for (const auto& e : h.edges()) {
    double lo = x[e.vertices.front()], hi = lo;
    for (int v : e.vertices) {
      lo = std::min(lo, x[v]);
      hi = std::max(hi, x[v]);
    }
    total += e.w * (hi - lo) * (hi - lo);
  }
  return total;
}

// Associated graph: each size-k hyperedge becomes a k-clique of equal weight.
// source[i] is the hyperedge that produced graph edge i.
struct CliqueExpansion {
  Graph graph;
  std::vector<std::size_t> source;
};

inline CliqueExpansion clique_expansion(const Hypergraph& h) {
  std::vector<Edge> es;
  std::vector<std::size_t> src;
  for (std::size_t i = 0; i < h.num_edges(); ++i) {
    const auto& e = h.edge(i);
    for (std::size_t p = 0; p < e.vertices.size(); ++p)
      for (std::size_t q = p + 1; q < e.vertices.size(); ++q) {
        es.push_back({e.vertices[p], e.vertices[q], e.w});
        src.push_back(i);
      }
  }
  return {Graph(h.num_vertices(), std::move(es)), std::move(src)};
}

// vol(S): sum of weighted degrees over S.
inline double volume(const Graph& g, std::span<const int> s) {
  auto in = detail::subset_mask(g.num_vertices(), s);
  auto deg = g.degrees();
  double total = 0;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (in[v]) total += deg[v];
  return total;
}

inline double volume(const Hypergraph& h, std::span<const int> s) {
  auto in = detail::subset_mask(h.num_vertices(), s);
  auto deg = h.degrees();
  double total = 0;
  for (int v = 0; v < h.num_vertices(); ++v)
    if (in[v]) total += deg[v];
  return total;
}

// Sub-(hyper)graph induced by an edge index multiset, preserving multiplicity.
inline Graph subgraph(const Graph& g, std::span<const std::size_t> f) {
  std::vector<Edge> es;
  es.reserve(f.size());
  for (std::size_t i : f) es.push_back(g.edge(i));
  return Graph(g.num_vertices(), std::move(es));
}

inline Hypergraph subhypergraph(const Hypergraph& h, std::span<const std::size_t> f) {
  std::vector<Hyperedge> es;
  es.reserve(f.size());
  for (std::size_t i : f) es.push_back(h.edge(i));
  return Hypergraph(h.num_vertices(), std::move(es));
}

// Connected components of a graph; returns component id per vertex.
inline std::vector<int> components(const Graph& g) {
  std::vector<int> comp(g.num_vertices(), -1);
  auto adj = g.adjacency();
  int c = 0;
  std::vector<int> stack;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (comp[v] != -1) continue;
    comp[v] = c;
    stack.push_back(v);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u])
        if (comp[w] == -1) {
          comp[w] = c;
          stack.push_back(w);
        }
    }
    ++c;
  }
  return comp;
}

}  // namespace sparsify

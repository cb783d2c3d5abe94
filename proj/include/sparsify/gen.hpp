#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "sparsify/graph.hpp"
#include "sparsify/rng.hpp"

// Seeded instance generators for tests, calibration and benchmarks. All are
// pure functions of their arguments, so instances are identical across
// platforms and runs.

namespace sparsify::gen {

// Uniform simple graph with exactly m distinct edges.
inline Graph random_graph(int n, std::size_t m, std::uint64_t seed) {
  const std::size_t max_edges = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (m > max_edges) throw std::invalid_argument("random_graph: too many edges");
  std::set<std::pair<int, int>> chosen;
  std::vector<std::pair<int, int>> edges;
  std::uint64_t ctr = 0;
  while (edges.size() < m) {
    int a = static_cast<int>(rng::uniform_below(seed, ctr, 0, n));
    int b = static_cast<int>(rng::uniform_below(seed, ctr, 1, n));
    ++ctr;
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (chosen.insert({a, b}).second) edges.push_back({a, b});
  }
  return Graph::unweighted(n, edges);
}

// d-regular circulant: vertex i joined to i +- o for d/2 seed-chosen distinct
// offsets. Requires even d and d/2 <= (n-1)/2.
inline Graph random_circulant(int n, int d, std::uint64_t seed) {
  if (d % 2 != 0) throw std::invalid_argument("random_circulant: d must be even");
  const int half = d / 2;
  const int max_off = (n - 1) / 2;
  if (half > max_off) throw std::invalid_argument("random_circulant: d too large");
  std::set<int> offsets;
  std::uint64_t ctr = 0;
  while (static_cast<int>(offsets.size()) < half)
    offsets.insert(1 + static_cast<int>(rng::uniform_below(seed, ctr++, 2, max_off)));
  std::vector<std::pair<int, int>> edges;
  for (int o : offsets)
    for (int v = 0; v < n; ++v) {
      int u = (v + o) % n;
      edges.push_back({std::min(v, u), std::max(v, u)});
    }
  return Graph::unweighted(n, edges);
}

// Hypergraph with m hyperedges, sizes uniform in [min_size, max_size],
// vertices distinct within a hyperedge. Repeated hyperedges allowed (the
// edge list is a multiset).
inline Hypergraph random_hypergraph(int n, std::size_t m, int min_size, int max_size,
                                    std::uint64_t seed) {
  if (min_size < 2 || max_size < min_size || max_size > n)
    throw std::invalid_argument("random_hypergraph: bad size range");
  std::vector<Hyperedge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    int k = min_size +
            static_cast<int>(rng::uniform_below(seed, i, 1000, max_size - min_size + 1));
    std::set<int> vs;
    std::uint64_t ctr = 0;
    while (static_cast<int>(vs.size()) < k)
      vs.insert(static_cast<int>(rng::uniform_below(seed, i, 2000 + ctr++, n)));
    Hyperedge he;
    he.vertices.assign(vs.begin(), vs.end());
    edges.push_back(std::move(he));
  }
  return Hypergraph(n, std::move(edges));
}

inline Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.push_back({a, b});
  return Graph::unweighted(n, edges);
}

}  // namespace sparsify::gen

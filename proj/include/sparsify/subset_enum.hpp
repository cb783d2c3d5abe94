#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <vector>

#include "sparsify/graph.hpp"

// Enumeration of vertex sets inducing connected subgraphs, each set emitted
// exactly once. This is the ESU scheme (Wernicke): grow from every root v
// using only vertices > v, extending with exclusive neighbors.

namespace sparsify {

using SubsetCallback = std::function<void(std::span<const int>)>;

namespace detail {

inline void esu_extend(const std::vector<std::vector<int>>& adj, int root,
                       std::vector<int>& sub, std::vector<int>& ext,
                       std::vector<char>& in_sub, std::vector<char>& seen,
                       int size_cap, const SubsetCallback& emit) {
  emit(sub);
  if (static_cast<int>(sub.size()) == size_cap) return;
  // Each candidate is consumed once; new candidates are neighbors of w not
  // previously reachable (exclusive neighborhood), keeping sets unique.
  std::vector<int> local = ext;
  while (!local.empty()) {
    int w = local.back();
    local.pop_back();
    std::vector<int> next = local;
    std::vector<int> added;
    for (int u : adj[w]) {
      if (u <= root || in_sub[u] || seen[u]) continue;
      seen[u] = 1;
      added.push_back(u);
      next.push_back(u);
    }
    sub.push_back(w);
    in_sub[w] = 1;
    esu_extend(adj, root, sub, next, in_sub, seen, size_cap, emit);
    in_sub[w] = 0;
    sub.pop_back();
    for (int u : added) seen[u] = 0;
  }
}

}  // namespace detail

// Calls `emit` for every S with 1 <= |S| <= size_cap whose induced subgraph
// is connected. Sets are emitted in sorted-vector form.
inline void for_each_connected_subset(const std::vector<std::vector<int>>& adj,
                                      int size_cap, const SubsetCallback& emit) {
  const int n = static_cast<int>(adj.size());
  if (size_cap < 1) return;
  std::vector<char> in_sub(n, 0), seen(n, 0);
  auto sorted_emit = [&](std::span<const int> s) {
    std::vector<int> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    emit(v);
  };
  for (int root = 0; root < n; ++root) {
    std::vector<int> sub = {root};
    std::vector<int> ext;
    in_sub[root] = 1;
    for (int u : adj[root])
      if (u > root) {
        ext.push_back(u);
        seen[u] = 1;
      }
    detail::esu_extend(adj, root, sub, ext, in_sub, seen, size_cap, sorted_emit);
    in_sub[root] = 0;
    for (int u : adj[root])
      if (u > root) seen[u] = 0;
  }
}

// Collects the sets; optionally only those intersecting `seed_vertices`.
inline std::vector<std::vector<int>> enumerate_connected_subsets(
    const std::vector<std::vector<int>>& adj, int size_cap,
    std::span<const int> seed_vertices = {});

inline std::vector<std::vector<int>> enumerate_connected_subsets(
    const Graph& g, int size_cap, std::span<const int> seed_vertices = {}) {
  return enumerate_connected_subsets(g.adjacency(), size_cap, seed_vertices);
}

inline std::vector<std::vector<int>> enumerate_connected_subsets(
    const std::vector<std::vector<int>>& adj, int size_cap,
    std::span<const int> seed_vertices) {
  std::vector<char> want(adj.size(), seed_vertices.empty() ? 1 : 0);
  for (int v : seed_vertices) want.at(v) = 1;
  std::vector<std::vector<int>> out;
  for_each_connected_subset(adj, size_cap, [&](std::span<const int> s) {
    for (int v : s)
      if (want[v]) {
        out.emplace_back(s.begin(), s.end());
        return;
      }
  });
  return out;
}

}  // namespace sparsify

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "sparsify/gen.hpp"
#include "sparsify/graph.hpp"
#include "sparsify/subset_enum.hpp"

using namespace sparsify;

namespace {

// Brute-force oracle: all subsets up to size cap whose induced subgraph is
// connected.
std::set<std::vector<int>> brute_force(const Graph& g, int cap) {
  const int n = g.num_vertices();
  auto adj = g.adjacency();
  std::set<std::vector<int>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1u) s.push_back(v);
    if (static_cast<int>(s.size()) > cap) continue;
    // BFS within the subset
    std::vector<int> stack = {s[0]};
    std::set<int> seen = {s[0]};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u])
        if (((mask >> w) & 1u) && !seen.count(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    if (static_cast<int>(seen.size()) == static_cast<int>(s.size())) out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("path 0-1-2-3 with cap 2 yields 7 sets") {
  Graph path = Graph::unweighted(4, {{0, 1}, {1, 2}, {2, 3}});
  auto sets = enumerate_connected_subsets(path.adjacency(), 2);
  CHECK(sets.size() == 7);
}

TEST_CASE("cap 1 yields exactly the singletons") {
  Graph g = gen::random_graph(9, 12, 0);
  auto sets = enumerate_connected_subsets(g.adjacency(), 1);
  CHECK(sets.size() == 9);
}

TEST_CASE("K3 with cap 3 yields 7 sets") {
  auto sets = enumerate_connected_subsets(gen::complete_graph(3).adjacency(), 3);
  CHECK(sets.size() == 7);
}

TEST_CASE("matches brute force on random graphs, each set exactly once") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Graph g = gen::random_graph(10, 4 + seed % 18, seed);
    for (int cap : {1, 2, 3, 4, 10}) {
      auto expect = brute_force(g, cap);
      std::set<std::vector<int>> got;
      std::size_t emitted = 0;
      for_each_connected_subset(g.adjacency(), cap, [&](std::span<const int> s) {
        ++emitted;
        got.insert(std::vector<int>(s.begin(), s.end()));
      });
      CHECK(emitted == got.size());  // no duplicates
      CHECK(got == expect);
    }
  }
}

TEST_CASE("seed-vertex filter keeps only intersecting sets") {
  Graph path = Graph::unweighted(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  std::vector<int> seeds = {0};
  auto sets = enumerate_connected_subsets(path.adjacency(), 2, seeds);
  // {0}, {0,1}
  CHECK(sets.size() == 2);
  for (const auto& s : sets)
    CHECK(std::find(s.begin(), s.end(), 0) != s.end());
}

TEST_CASE("disconnected graphs enumerate per component") {
  Graph two = Graph::unweighted(4, {{0, 1}, {2, 3}});
  auto sets = enumerate_connected_subsets(two.adjacency(), 4);
  CHECK(sets.size() == 6);  // 4 singletons + 2 edges
  CHECK(enumerate_connected_subsets(two, 4).size() == 6);  // Graph overload
}

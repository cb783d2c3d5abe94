#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "sparsify/graph.hpp"

// Bounded-degree "cloud" reduction. Every vertex v is split into
// ceil(d_v / ceil(d_avg)) copies and its incidences are dealt round-robin
// over the copies (in edge-input order), so each reduced vertex carries at
// most ceil(d_avg) incidences. Edges map one-to-one, which makes the
// sparsifier back-mapping a simple index lookup.

namespace sparsify {

struct CloudMapping {
  std::vector<std::vector<int>> cloud_of;  // original vertex -> its cloud
  std::vector<int> origin_of;              // reduced vertex -> original vertex
  std::vector<std::size_t> edge_map;       // reduced edge index -> original edge index
  int degree_cap = 0;                      // ceil(d_avg) of the original instance
};

namespace detail {

struct CloudLayout {
  std::vector<int> start;   // first reduced index of each cloud
  std::vector<int> size;    // cloud sizes
  std::vector<int> origin;  // reduced vertex -> original vertex
  int cap = 0;              // ceil(d_avg), at least 1
  int total = 0;
};

inline CloudLayout build_clouds(const std::vector<int>& deg, double d_avg) {
  CloudLayout lay;
  lay.cap = std::max(1, static_cast<int>(std::ceil(d_avg)));
  const int n = static_cast<int>(deg.size());
  lay.start.resize(n);
  lay.size.resize(n);
  for (int v = 0; v < n; ++v) {
    // An isolated vertex keeps one cloud vertex so V embeds in V'.
    int s = deg[v] == 0 ? 1 : (deg[v] + lay.cap - 1) / lay.cap;
    lay.start[v] = lay.total;
    lay.size[v] = s;
    lay.total += s;
    for (int j = 0; j < s; ++j) lay.origin.push_back(v);
  }
  return lay;
}

inline CloudMapping to_mapping(const CloudLayout& lay, std::size_t num_edges) {
  CloudMapping map;
  map.degree_cap = lay.cap;
  map.origin_of = lay.origin;
  map.cloud_of.resize(lay.start.size());
  for (std::size_t v = 0; v < lay.start.size(); ++v)
    for (int j = 0; j < lay.size[v]; ++j)
      map.cloud_of[v].push_back(lay.start[v] + j);
  map.edge_map.resize(num_edges);
  for (std::size_t i = 0; i < num_edges; ++i) map.edge_map[i] = i;
  return map;
}

}  // namespace detail

struct ReducedGraph {
  Graph graph;
  CloudMapping mapping;
};

inline ReducedGraph reduce_graph(const Graph& g) {
  auto deg = g.incidence_counts();
  auto lay = detail::build_clouds(deg, g.num_edges() == 0 ? 0.0
                                                          : 2.0 * g.num_edges() / g.num_vertices());
  std::vector<int> next(g.num_vertices(), 0);
  std::vector<Edge> es;
  es.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    int a = lay.start[e.a] + (next[e.a]++ % lay.size[e.a]);
    int b = lay.start[e.b] + (next[e.b]++ % lay.size[e.b]);
    es.push_back({a, b, e.w});
  }
  return {Graph(lay.total, std::move(es)), detail::to_mapping(lay, g.num_edges())};
}

struct ReducedHypergraph {
  Hypergraph hypergraph;
  CloudMapping mapping;
};

inline ReducedHypergraph reduce_hypergraph(const Hypergraph& h) {
  auto deg = h.incidence_counts();
  auto lay = detail::build_clouds(deg, h.avg_incidence());
  std::vector<int> next(h.num_vertices(), 0);
  std::vector<Hyperedge> es;
  es.reserve(h.num_edges());
  for (const auto& e : h.edges()) {
    Hyperedge r;
    r.w = e.w;
    r.vertices.reserve(e.vertices.size());
    for (int v : e.vertices)
      r.vertices.push_back(lay.start[v] + (next[v]++ % lay.size[v]));
    es.push_back(std::move(r));
  }
  return {Hypergraph(lay.total, std::move(es)), detail::to_mapping(lay, h.num_edges())};
}

// Back-maps a reduced-instance edge multiset to original edges, preserving
// multiplicity.
inline std::vector<std::size_t> lift_edges(const CloudMapping& map,
                                           std::span<const std::size_t> reduced) {
  std::vector<std::size_t> out;
  out.reserve(reduced.size());
  for (std::size_t i : reduced) {
    if (i >= map.edge_map.size())
      throw std::invalid_argument("lift_edges: unknown reduced edge index");
    out.push_back(map.edge_map[i]);
  }
  return out;
}

// x'_{v'} = x_v for v' in the cloud of v.
inline std::vector<double> lift_vector(const CloudMapping& map,
                                       std::span<const double> x) {
  if (x.size() != map.cloud_of.size())
    throw std::invalid_argument("lift_vector: length mismatch");
  std::vector<double> out(map.origin_of.size());
  for (std::size_t vp = 0; vp < out.size(); ++vp) out[vp] = x[map.origin_of[vp]];
  return out;
}

// Union of the clouds of the vertices in S.
inline std::vector<int> lift_subset(const CloudMapping& map, std::span<const int> s) {
  std::vector<int> out;
  for (int v : s)
    for (int vp : map.cloud_of.at(v)) out.push_back(vp);
  return out;
}

}  // namespace sparsify

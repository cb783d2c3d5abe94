#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "sparsify/graph.hpp"
#include "sparsify/laplacian.hpp"

// Effective resistances on the (weighted, possibly disconnected) associated
// graph, and the induced hyperedge resistances r_e = max_{a,b in e} r_ab.
// Resistances are computed per connected component from the dense Laplacian
// pseudoinverse; pairs in different components have no entry.

namespace sparsify {

class ResistanceTable {
 public:
  void set(int a, int b, double r) { table_[key(a, b)] = r; }

  bool contains(int a, int b) const { return table_.count(key(a, b)) > 0; }

  double at(int a, int b) const {
    auto it = table_.find(key(a, b));
    if (it == table_.end())
      throw std::invalid_argument("resistance table: missing pair (" +
                                  std::to_string(a) + "," + std::to_string(b) + ")");
    return it->second;
  }

  std::size_t size() const { return table_.size(); }

 private:
  static std::uint64_t key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }
  std::unordered_map<std::uint64_t, double> table_;
};

// Resistances for every distinct vertex pair joined by at least one edge.
// With eigenvalue cutoff 1e-12 * lambda_max on the per-component Laplacian.
inline ResistanceTable effective_resistances(const Graph& g) {
  check_dense_size(g.num_vertices(), "effective_resistances");
  auto comp = components(g);
  int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;

  // Group vertices by component and index them locally.
  std::vector<std::vector<int>> members(ncomp);
  std::vector<int> local(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    local[v] = static_cast<int>(members[comp[v]].size());
    members[comp[v]].push_back(v);
  }

  ResistanceTable table;
  for (int c = 0; c < ncomp; ++c) {
    const int nc = static_cast<int>(members[c].size());
    if (nc < 2) continue;
    Matrix L = Matrix::Zero(nc, nc);
    for (const auto& e : g.edges()) {
      if (comp[e.a] != c) continue;
      int a = local[e.a], b = local[e.b];
      L(a, a) += e.w;
      L(b, b) += e.w;
      L(a, b) -= e.w;
      L(b, a) -= e.w;
    }
    Matrix P = pinv_psd(L, 1e-12);
    for (const auto& e : g.edges()) {
      if (comp[e.a] != c) continue;
      int a = local[e.a], b = local[e.b];
      if (!table.contains(e.a, e.b))
        table.set(e.a, e.b, P(a, a) + P(b, b) - 2 * P(a, b));
    }
  }
  return table;
}

// r_e per hyperedge, looked up from the associated-graph table.
inline std::vector<double> hyperedge_resistances(const Hypergraph& h,
                                                 const ResistanceTable& table) {
  std::vector<double> r(h.num_edges(), 0.0);
  for (std::size_t i = 0; i < h.num_edges(); ++i) {
    const auto& vs = h.edge(i).vertices;
    double best = 0;
    for (std::size_t p = 0; p < vs.size(); ++p)
      for (std::size_t q = p + 1; q < vs.size(); ++q)
        best = std::max(best, table.at(vs[p], vs[q]));
    r[i] = best;
  }
  return r;
}

}  // namespace sparsify

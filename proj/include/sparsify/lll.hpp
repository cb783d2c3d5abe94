#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "sparsify/graph.hpp"
#include "sparsify/rng.hpp"
#include "sparsify/subset_enum.hpp"

// Probabilistic additive sparsifiers. One halving step keeps each edge with
// probability 1/2 and then runs Moser-Tardos resampling until every core bad
// event (a cut deviating beyond its Chernoff-scale threshold) is false.
// Iterating the halving k times yields the additive cut sparsifier for
// hypergraphs and, with bilateral + degree events, the additive spectral
// sparsifier for graphs.

namespace sparsify {

class ResampleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LllConfig {
  // Deviation threshold constant: events fire beyond
  // threshold_factor * sqrt(d log(d r)) * |S|. The trivial-path cutoff
  // d <= threshold_factor^2 * log(d r) is derived from the same constant.
  double threshold_factor = 10.0;
  // Halving-count constant: k is the largest integer with
  // d * 2^-k >= c_iter * eps^-2 * log(r/eps).
  double c_iter = 200.0;
  // Resampling budget: cap = ceil(resample_cap_mult * |E| * max(1, ln n)).
  double resample_cap_mult = 64.0;
  // Fresh-seed retries per halving before giving up.
  int retries = 3;
};

enum class EventKind { CutSet, Bilateral, Degree };

struct BadEventSpec {
  EventKind kind = EventKind::CutSet;
  std::vector<int> s;                  // defining set (S, or S side)
  std::vector<int> t;                  // T side for bilateral events
  double threshold = 0;
  std::vector<std::size_t> variables;  // vbl: boundary edge indices
};

struct HalvingResult {
  std::vector<std::size_t> kept;  // F, sorted edge indices into the input
  std::uint64_t resample_rounds = 0;
  std::size_t core_event_count = 0;
  bool trivial_path = false;
};

// ---------------------------------------------------------------------------
// Core-event construction

// s = ceil(log_base(n)), at least 1.
inline int core_size_cap(int n, double base) {
  if (n <= 1) return 1;
  double s = std::log(static_cast<double>(n)) / std::log(std::max(base, 2.0));
  return std::max(1, static_cast<int>(std::ceil(s - 1e-12)));
}

// Events A_S over sets S connected in the associated graph, |S| <= s, with
// vbl(A_S) = the hyperedges cut by S.
inline std::vector<BadEventSpec> core_events_hypergraph(const Hypergraph& h,
                                                        double threshold_factor) {
  const double d = h.max_incidence();
  const double dr = d * std::max(2, h.rank());
  const double unit = threshold_factor * std::sqrt(d * std::log(dr));
  const int cap = core_size_cap(h.num_vertices(), dr);

  std::vector<std::vector<std::size_t>> incident(h.num_vertices());
  for (std::size_t i = 0; i < h.num_edges(); ++i)
    for (int v : h.edge(i).vertices) incident[v].push_back(i);

  auto adj = clique_expansion(h).graph.adjacency();
  std::vector<char> in(h.num_vertices(), 0);
  std::vector<char> edge_seen(h.num_edges(), 0);
  std::vector<BadEventSpec> events;
  for_each_connected_subset(adj, cap, [&](std::span<const int> s) {
    BadEventSpec ev;
    ev.kind = EventKind::CutSet;
    ev.s.assign(s.begin(), s.end());
    ev.threshold = unit * static_cast<double>(s.size());
    for (int v : s) in[v] = 1;
    for (int v : s)
      for (std::size_t i : incident[v]) {
        if (edge_seen[i]) continue;
        edge_seen[i] = 1;
        for (int u : h.edge(i).vertices)
          if (!in[u]) {  // cut: incident to S and leaves it
            ev.variables.push_back(i);
            break;
          }
      }
    for (int v : s) {
      in[v] = 0;
      for (std::size_t i : incident[v]) edge_seen[i] = 0;
    }
    std::sort(ev.variables.begin(), ev.variables.end());
    events.push_back(std::move(ev));
  });
  return events;
}

// Degree events D_v plus bilateral events A_{S,T} over connected S u T with
// |S u T| <= s and every bipartition (the side containing min(S u T) is S).
inline std::vector<BadEventSpec> core_events_bilateral(const Graph& g,
                                                       double threshold_factor) {
  const double d = std::max(2.0, g.max_degree());
  const double unit = threshold_factor * std::sqrt(d * std::log(d));
  const int cap = core_size_cap(g.num_vertices(), d);

  std::vector<std::vector<std::size_t>> incident(g.num_vertices());
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    incident[g.edge(i).a].push_back(i);
    incident[g.edge(i).b].push_back(i);
  }

  std::vector<BadEventSpec> events;
  for (int v = 0; v < g.num_vertices(); ++v) {
    BadEventSpec ev;
    ev.kind = EventKind::Degree;
    ev.s = {v};
    ev.threshold = unit;
    ev.variables = incident[v];
    events.push_back(std::move(ev));
  }

  auto adj = g.adjacency();
  std::vector<char> side(g.num_vertices(), 0);
  std::vector<char> edge_seen(g.num_edges(), 0);
  for_each_connected_subset(adj, cap, [&](std::span<const int> u) {
    if (u.size() < 2) return;
    const std::size_t sz = u.size();
    // Bipartitions with min(U) on the S side; T nonempty.
    for (std::uint32_t mask = 1; mask + 1 < (1u << sz); mask += 2) {
      BadEventSpec ev;
      ev.kind = EventKind::Bilateral;
      for (std::size_t j = 0; j < sz; ++j)
        ((mask >> j) & 1u ? ev.s : ev.t).push_back(u[j]);
      ev.threshold = unit * std::sqrt(static_cast<double>(ev.s.size()) *
                                      static_cast<double>(ev.t.size()));
      for (int v : ev.s) side[v] = 1;
      for (int v : ev.t) side[v] = 2;
      for (int v : ev.s)
        for (std::size_t i : incident[v]) {
          if (edge_seen[i]) continue;
          edge_seen[i] = 1;
          int x = side[g.edge(i).a], y = side[g.edge(i).b];
          if ((x == 1 && y == 2) || (x == 2 && y == 1)) ev.variables.push_back(i);
        }
      for (int v : ev.s) {
        side[v] = 0;
        for (std::size_t i : incident[v]) edge_seen[i] = 0;
      }
      for (int v : ev.t) side[v] = 0;
      std::sort(ev.variables.begin(), ev.variables.end());
      if (!ev.variables.empty()) events.push_back(std::move(ev));
    }
  });
  return events;
}

namespace detail {

// Orders events by sorted vertex set (then kind and S side) so "first
// violated" is deterministic.
inline void sort_events(std::vector<BadEventSpec>& events) {
  std::sort(events.begin(), events.end(),
            [](const BadEventSpec& x, const BadEventSpec& y) {
              std::vector<int> xu = x.s, yu = y.s;
              xu.insert(xu.end(), x.t.begin(), x.t.end());
              yu.insert(yu.end(), y.t.begin(), y.t.end());
              std::sort(xu.begin(), xu.end());
              std::sort(yu.begin(), yu.end());
              if (xu != yu) return xu < yu;
              if (x.kind != y.kind) return x.kind < y.kind;
              return x.s < y.s;
            });
}

// Moser-Tardos: while some core event is true, redraw all of its variables.
// Coins are a pure function of (seed, edge index, round). Returns the round
// count; `sel` holds the final assignment.
inline std::uint64_t moser_tardos(const std::vector<BadEventSpec>& events,
                                  std::size_t num_edges, std::uint64_t seed,
                                  std::uint64_t cap, std::vector<char>& sel) {
  sel.assign(num_edges, 0);
  for (std::size_t e = 0; e < num_edges; ++e) sel[e] = rng::coin(seed, e, 0) ? 1 : 0;

  std::vector<std::vector<std::size_t>> edge_events(num_edges);
  std::vector<std::int64_t> cnt(events.size(), 0);
  for (std::size_t j = 0; j < events.size(); ++j)
    for (std::size_t e : events[j].variables) {
      edge_events[e].push_back(j);
      cnt[j] += sel[e];
    }

  auto violated = [&](std::size_t j) {
    double tot = static_cast<double>(events[j].variables.size());
    return std::abs(2.0 * static_cast<double>(cnt[j]) - tot) > events[j].threshold;
  };

  std::set<std::size_t> active;
  for (std::size_t j = 0; j < events.size(); ++j)
    if (violated(j)) active.insert(j);

  std::uint64_t round = 0;
  while (!active.empty()) {
    if (round >= cap)
      throw ResampleCapExceeded("resample cap " + std::to_string(cap) +
                                " exceeded with " + std::to_string(active.size()) +
                                " events still true");
    ++round;
    std::size_t j = *active.begin();
    for (std::size_t e : events[j].variables) {
      char nv = rng::coin(seed, e, round) ? 1 : 0;
      if (nv == sel[e]) continue;
      int delta = nv - sel[e];
      sel[e] = nv;
      for (std::size_t k : edge_events[e]) {
        cnt[k] += delta;
        if (violated(k))
          active.insert(k);
        else
          active.erase(k);
      }
    }
    if (violated(j)) active.insert(j);  // unlucky redraw keeps it active
  }
  return round;
}

inline std::uint64_t resample_cap(std::size_t m, int n, const LllConfig& cfg) {
  double cap = cfg.resample_cap_mult * static_cast<double>(std::max<std::size_t>(m, 1)) *
               std::max(1.0, std::log(std::max(2, n)));
  return static_cast<std::uint64_t>(std::ceil(cap));
}

inline std::vector<std::size_t> selected_indices(const std::vector<char>& sel) {
  std::vector<std::size_t> kept;
  for (std::size_t e = 0; e < sel.size(); ++e)
    if (sel[e]) kept.push_back(e);
  return kept;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Independent post-hoc certification: re-enumerates the core events from
// scratch and checks each against the kept set, bypassing the resampler's
// incremental bookkeeping.

struct HalvingAudit {
  bool ok = true;
  std::size_t events_checked = 0;
  double worst_excess = -1e300;  // max over events of |2 e_F - e_E| - threshold
  BadEventSpec worst;
};

namespace detail {

inline HalvingAudit audit_events(const std::vector<BadEventSpec>& events,
                                 std::size_t num_edges,
                                 std::span<const std::size_t> kept) {
  std::vector<char> sel(num_edges, 0);
  for (std::size_t e : kept) sel[e] = 1;
  HalvingAudit audit;
  audit.events_checked = events.size();
  for (const auto& ev : events) {
    double cnt = 0;
    for (std::size_t e : ev.variables) cnt += sel[e];
    double excess =
        std::abs(2.0 * cnt - static_cast<double>(ev.variables.size())) - ev.threshold;
    if (excess > audit.worst_excess) {
      audit.worst_excess = excess;
      audit.worst = ev;
    }
    if (excess > 0) audit.ok = false;
  }
  return audit;
}

}  // namespace detail

inline HalvingAudit audit_halving(const Hypergraph& h, std::span<const std::size_t> kept,
                                  double threshold_factor = 10.0) {
  return detail::audit_events(core_events_hypergraph(h, threshold_factor), h.num_edges(),
                              kept);
}

inline HalvingAudit audit_halving(const Graph& g, std::span<const std::size_t> kept,
                                  double threshold_factor = 10.0) {
  return detail::audit_events(core_events_bilateral(g, threshold_factor), g.num_edges(),
                              kept);
}

// ---------------------------------------------------------------------------
// Halving steps

// One degree-halving of an unweighted hypergraph (cut events A_S).
inline HalvingResult halve_hypergraph(const Hypergraph& h, std::uint64_t seed,
                                      const LllConfig& cfg = {}) {
  if (!h.is_unweighted())
    throw std::invalid_argument("halve_hypergraph: weighted input not supported");
  HalvingResult res;
  const std::size_t m = h.num_edges();
  if (m == 0) {
    res.trivial_path = true;
    return res;
  }
  const double d = h.max_incidence();
  const double dr = d * std::max(2, h.rank());
  const double f = cfg.threshold_factor;
  if (d <= f * f * std::log(dr)) {
    // Any F satisfies the bound: the threshold already exceeds d.
    res.trivial_path = true;
    std::vector<char> sel(m, 0);
    for (std::size_t e = 0; e < m; ++e) sel[e] = rng::coin(seed, e, 0) ? 1 : 0;
    res.kept = detail::selected_indices(sel);
    return res;
  }

  auto events = core_events_hypergraph(h, f);
  detail::sort_events(events);
  res.core_event_count = events.size();
  std::vector<char> sel;
  res.resample_rounds =
      detail::moser_tardos(events, m, seed, detail::resample_cap(m, h.num_vertices(), cfg), sel);
  res.kept = detail::selected_indices(sel);

  auto audit = audit_halving(h, res.kept, f);
  if (!audit.ok)
    throw std::logic_error("halve_hypergraph: post-hoc certification failed");
  return res;
}

// One halving of an unweighted simple graph with bilateral cut events and
// degree events.
inline HalvingResult halve_graph_bilateral(const Graph& g, std::uint64_t seed,
                                           const LllConfig& cfg = {}) {
  if (!g.is_unweighted())
    throw std::invalid_argument("halve_graph_bilateral: weighted input not supported");
  if (!g.is_simple())
    throw std::invalid_argument("halve_graph_bilateral: parallel edges not supported");
  HalvingResult res;
  const std::size_t m = g.num_edges();
  if (m == 0) {
    res.trivial_path = true;
    return res;
  }
  const double d = std::max(2.0, g.max_degree());
  const double f = cfg.threshold_factor;
  if (d <= f * f * std::log(d)) {
    res.trivial_path = true;
    std::vector<char> sel(m, 0);
    for (std::size_t e = 0; e < m; ++e) sel[e] = rng::coin(seed, e, 0) ? 1 : 0;
    res.kept = detail::selected_indices(sel);
    return res;
  }

  auto events = core_events_bilateral(g, f);
  detail::sort_events(events);
  res.core_event_count = events.size();
  std::vector<char> sel;
  res.resample_rounds =
      detail::moser_tardos(events, m, seed, detail::resample_cap(m, g.num_vertices(), cfg), sel);
  res.kept = detail::selected_indices(sel);

  auto audit = audit_halving(g, res.kept, f);
  if (!audit.ok)
    throw std::logic_error("halve_graph_bilateral: post-hoc certification failed");
  return res;
}

// ---------------------------------------------------------------------------
// Iterated halving

struct RoundStats {
  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
  int max_degree_before = 0;
  int max_degree_after = 0;
  std::uint64_t resample_rounds = 0;
  std::size_t core_event_count = 0;
  bool trivial_path = false;
  int attempts = 1;
};

struct IteratedHalvingResult {
  std::vector<std::size_t> kept;  // F as indices into the original edge list
  int k = 0;                      // number of halvings applied
  double scale = 1;               // c = 2^k
  std::vector<RoundStats> rounds;
};

namespace detail {

// Largest k >= 0 with d * 2^-k >= target, additionally capped at log2(n)
// (the failure-probability union bound assumes at most log n halvings).
inline int halving_count(double d, double target, int n) {
  int cap_log = n > 1 ? static_cast<int>(std::floor(std::log2(static_cast<double>(n))))
                      : 0;
  if (target <= 0) return cap_log;
  int k = 0;
  while (k < cap_log && d / std::exp2(k + 1) >= target) ++k;
  return k;
}

template <typename Inst, typename HalveFn>
IteratedHalvingResult iterate_halvings(const Inst& inst, int k, std::uint64_t seed,
                                       const LllConfig& cfg, HalveFn halve) {
  IteratedHalvingResult out;
  out.k = k;
  out.scale = std::exp2(k);
  out.kept.resize(inst.num_edges());
  for (std::size_t i = 0; i < inst.num_edges(); ++i) out.kept[i] = i;

  for (int round = 0; round < k; ++round) {
    auto cur = [&] {
      if constexpr (std::is_same_v<Inst, Hypergraph>)
        return subhypergraph(inst, out.kept);
      else
        return subgraph(inst, out.kept);
    }();
    RoundStats st;
    st.edges_before = cur.num_edges();
    st.max_degree_before = [&] {
      if constexpr (std::is_same_v<Inst, Hypergraph>)
        return cur.max_incidence();
      else
        return static_cast<int>(cur.max_degree());
    }();

    HalvingResult hr;
    int attempt = 0;
    for (;;) {
      try {
        hr = halve(cur, rng::mix(seed, static_cast<std::uint64_t>(round), attempt));
        break;
      } catch (const ResampleCapExceeded&) {
        if (++attempt >= cfg.retries) throw;
      }
    }
    st.attempts = attempt + 1;
    st.resample_rounds = hr.resample_rounds;
    st.core_event_count = hr.core_event_count;
    st.trivial_path = hr.trivial_path;

    std::vector<std::size_t> next;
    next.reserve(hr.kept.size());
    for (std::size_t j : hr.kept) next.push_back(out.kept[j]);
    out.kept = std::move(next);
    st.edges_after = out.kept.size();
    st.max_degree_after = [&] {
      if constexpr (std::is_same_v<Inst, Hypergraph>)
        return subhypergraph(inst, out.kept).max_incidence();
      else
        return static_cast<int>(subgraph(inst, out.kept).max_degree());
    }();
    out.rounds.push_back(st);
  }
  return out;
}

}  // namespace detail

// Additive cut sparsifier of an unweighted hypergraph: k halvings with
// c = 2^k, targeting |2^k e_F(S) - e_E(S)| <= eps * d_max * |S| for all S.
inline IteratedHalvingResult sparsify_cut(const Hypergraph& h, double eps,
                                          std::uint64_t seed, const LllConfig& cfg = {}) {
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("sparsify_cut: eps in (0,1]");
  if (!h.is_unweighted())
    throw std::invalid_argument("sparsify_cut: weighted input not supported");
  const double d = h.max_incidence();
  const double r = std::max(2, h.rank());
  const double target = cfg.c_iter / (eps * eps) * std::log(r / eps);
  int k = detail::halving_count(d, target, h.num_vertices());
  return detail::iterate_halvings(h, k, seed, cfg, [&](const Hypergraph& cur, std::uint64_t s) {
    return halve_hypergraph(cur, s, cfg);
  });
}

// Additive spectral sparsifier of an unweighted simple graph: k bilateral
// halvings with c = 2^k; the spectral guarantee is certified downstream.
inline IteratedHalvingResult sparsify_spectral_graph(const Graph& g, double eps,
                                                     std::uint64_t seed,
                                                     const LllConfig& cfg = {}) {
  if (!(eps > 0 && eps <= 1))
    throw std::invalid_argument("sparsify_spectral_graph: eps in (0,1]");
  if (!g.is_unweighted() || !g.is_simple())
    throw std::invalid_argument("sparsify_spectral_graph: simple unweighted graph required");
  const double d = g.max_degree();
  const double target = cfg.c_iter / (eps * eps) * std::log(1.0 / eps);
  int k = detail::halving_count(d, target, g.num_vertices());
  return detail::iterate_halvings(g, k, seed, cfg, [&](const Graph& cur, std::uint64_t s) {
    return halve_graph_bilateral(cur, s, cfg);
  });
}

// ---------------------------------------------------------------------------
// Bookkeeping audits for the local-lemma accounting (used by tests).

// Deviation at which the Hoeffding bound 2 exp(-t^2 / (2 d l)) reaches the
// event-probability target q^{-6 l}; the working threshold must exceed it.
inline double chernoff_critical_deviation(double d, double q, int l) {
  return std::sqrt(2.0 * d * l * (6.0 * l * std::log(q) + std::log(2.0)));
}

// Condition-(19) slack for a size-k cut event with x(A_S) = (dr)^{-3k}:
// 0.5 * x * (neighbor product lower bound) - (dr)^{-6k}.
inline double lll_condition_slack(double d, double r, int n, int k) {
  const double dr = d * r;
  double tail = 0;
  for (int l = 1; l <= n; ++l) {
    double term = std::pow(dr, -3.0 * l) * std::pow(std::exp(1.0) * dr, l - 1.0);
    tail += term;
    if (term < 1e-300) break;
  }
  double lb = std::pow(dr, -3.0 * k) * std::exp(-2.0 * dr * k * tail);
  return 0.5 * lb - std::pow(dr, -6.0 * k);
}

// Mass sum_{A not in core} x(A), bounded by the geometric tail
// sum_{l>s} n (e dr)^l (dr)^{-3l}; must stay below n^-3.
inline double core_tail_mass(double d, double r, int n, int s) {
  const double dr = d * r;
  const double ratio = std::exp(1.0) / (dr * dr);
  if (ratio >= 1) return 1e300;
  double mass = 0, term = n * std::pow(std::exp(1.0) * dr, s + 1.0) * std::pow(dr, -3.0 * (s + 1.0));
  for (int l = s + 1; l <= n && term > 1e-300; ++l, term *= ratio) mass += term;
  return mass;
}

// Bilateral analog with the 2^l bipartition factor: sum_{l>s} n (2 e d)^l d^{-3l}.
inline double core_tail_mass_bilateral(double d, int n, int s) {
  const double ratio = 2.0 * std::exp(1.0) / (d * d);
  if (ratio >= 1) return 1e300;
  double mass = 0, term = n * std::pow(2.0 * std::exp(1.0) * d, s + 1.0) * std::pow(d, -3.0 * (s + 1.0));
  for (int l = s + 1; l <= n && term > 1e-300; ++l, term *= ratio) mass += term;
  return mass;
}

}  // namespace sparsify

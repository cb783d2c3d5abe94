#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "sparsify/graph.hpp"
#include "sparsify/laplacian.hpp"
#include "sparsify/rng.hpp"

// Independent certification of the sparsifier guarantees: brute-force cut
// oracles, eigenvalue certificates for the PSD sandwich inequalities, and
// Monte-Carlo quadratic-form audits. This module recomputes everything from
// raw edge lists and dense eigensolvers; it shares nothing with the
// constructions beyond the core model.

namespace sparsify {

inline constexpr double kPsdTolerance = 1e-8;

struct QualityReport {
  std::string kind;
  double epsilon = 0;
  double scale_c = 1;
  bool pass = false;
  double worst_violation = 0;          // positive means the bound was exceeded
  nlohmann::json witness;              // violating S / vertex / direction, if any
  nlohmann::json certificate;          // eigenvalues and other certified numbers
  nlohmann::json measured;             // measured slack constants
  std::vector<std::uint64_t> seeds;
  nlohmann::json config_echo;

  // Canonical serialization: nlohmann::json objects are key-sorted maps, so
  // identical reports produce identical bytes.
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["epsilon"] = epsilon;
    j["scale_c"] = scale_c;
    j["pass"] = pass;
    j["worst_violation"] = worst_violation;
    j["witness"] = witness;
    j["certificate"] = certificate;
    j["measured"] = measured;
    j["seeds"] = seeds;
    j["config_echo"] = config_echo;
    return j;
  }
};

namespace detail {

inline std::vector<int> mask_to_vertices(std::uint32_t mask, int n) {
  std::vector<int> s;
  for (int v = 0; v < n; ++v)
    if ((mask >> v) & 1u) s.push_back(v);
  return s;
}

}  // namespace detail

// Exhaustive cut audit: checks |c e_F(S) - e_E(S)| <= bound(S) over all 2^n
// subsets, recomputing both cuts from the raw hyperedge lists.
inline QualityReport brute_force_cut_check(
    const Hypergraph& h, const Hypergraph& fh, double c,
    const std::function<double(std::span<const int>)>& bound) {
  const int n = h.num_vertices();
  if (n > 20) throw SizeLimitError("brute_force_cut_check: n > 20");
  if (fh.num_vertices() != n)
    throw std::invalid_argument("brute_force_cut_check: vertex count mismatch");

  auto masks_of = [](const Hypergraph& x) {
    std::vector<std::uint32_t> masks(x.num_edges());
    for (std::size_t i = 0; i < x.num_edges(); ++i) {
      std::uint32_t m = 0;
      for (int v : x.edge(i).vertices) m |= (1u << v);
      masks[i] = m;
    }
    return masks;
  };
  auto masksE = masks_of(h), masksF = masks_of(fh);

  QualityReport rep;
  rep.kind = "brute_force_cut";
  rep.scale_c = c;
  const std::uint32_t full = (1u << n) - 1;
  double worst = -1e300;
  std::uint32_t worst_mask = 0;
  double worst_eE = 0, worst_eF = 0;
  for (std::uint32_t s = 0; s <= full; ++s) {
    double eE = 0, eF = 0;
    for (std::size_t i = 0; i < masksE.size(); ++i) {
      std::uint32_t inter = masksE[i] & s;
      if (inter != 0 && inter != masksE[i]) eE += h.edge(i).w;
    }
    for (std::size_t i = 0; i < masksF.size(); ++i) {
      std::uint32_t inter = masksF[i] & s;
      if (inter != 0 && inter != masksF[i]) eF += c * fh.edge(i).w;
    }
    auto sv = detail::mask_to_vertices(s, n);
    double viol = std::abs(eF - eE) - bound(sv);
    if (viol > worst) {
      worst = viol;
      worst_mask = s;
      worst_eE = eE;
      worst_eF = eF;
    }
    if (s == full) break;
  }
  rep.worst_violation = worst;
  rep.pass = worst <= kPsdTolerance;
  rep.witness["S"] = detail::mask_to_vertices(worst_mask, n);
  rep.witness["e_E"] = worst_eE;
  rep.witness["c_e_F"] = worst_eF;
  return rep;
}

inline QualityReport brute_force_cut_check(
    const Hypergraph& h, std::span<const std::size_t> f, double c,
    const std::function<double(std::span<const int>)>& bound) {
  return brute_force_cut_check(h, subhypergraph(h, f), c, bound);
}

// Certifies -B <= c L_F - L_G <= B with B = eps (D_G + d_avg I), through the
// minimum eigenvalues of B^{-1/2} (B +- M) B^{-1/2}. Also reports the plain
// operator norm against eps * d_max for the max-degree form.
inline QualityReport spectral_additive_check(const Graph& g, const Graph& fg, double c,
                                             double eps) {
  if (eps <= 0) throw std::invalid_argument("spectral_additive_check: eps must be > 0");
  check_dense_size(g.num_vertices(), "spectral_additive_check");
  if (fg.num_vertices() != g.num_vertices())
    throw std::invalid_argument("spectral_additive_check: vertex count mismatch");
  auto bundle = laplacian(g);
  Matrix M = c * laplacian(fg).L - bundle.L;
  const double d_avg = g.avg_degree();
  Vector Bdiag = (bundle.D.array() + d_avg).matrix() * eps;
  if (Bdiag.minCoeff() <= 0)
    throw std::invalid_argument("spectral_additive_check: singular bound matrix");
  Vector inv_sqrt = Bdiag.array().rsqrt().matrix();
  Matrix N = inv_sqrt.asDiagonal() * M * inv_sqrt.asDiagonal();

  auto es = sym_eig(N);
  const auto& ev = es.eigenvalues();
  Eigen::Index ilo, ihi;
  const double lo = ev.minCoeff(&ilo), hi = ev.maxCoeff(&ihi);
  const double norm_M = operator_norm(M);
  const double d_max = g.max_degree();

  QualityReport rep;
  rep.kind = "spectral_additive";
  rep.epsilon = eps;
  rep.scale_c = c;
  rep.certificate["min_eig_B_minus_M"] = 1.0 - hi;   // of B^{-1/2}(B - M)B^{-1/2}
  rep.certificate["min_eig_B_plus_M"] = 1.0 + lo;
  rep.measured["norm_M"] = norm_M;
  rep.measured["slack_vs_avg_form"] = std::max(std::abs(lo), std::abs(hi));
  rep.measured["norm_ratio_dmax"] = d_max > 0 ? norm_M / (eps * d_max) : 0.0;
  rep.worst_violation = std::max(hi - 1.0, -lo - 1.0);
  rep.pass = rep.worst_violation <= kPsdTolerance;
  if (!rep.pass) {
    Vector w = es.eigenvectors().col(hi - 1.0 >= -lo - 1.0 ? ihi : ilo);
    rep.witness["eigenvector"] = std::vector<double>(w.data(), w.data() + w.size());
  }
  return rep;
}

inline QualityReport spectral_additive_check(const Graph& g,
                                             std::span<const std::size_t> f, double c,
                                             double eps) {
  return spectral_additive_check(g, subgraph(g, f), c, eps);
}

// Certifies the two-sided bound of the deterministic construction:
//   2c D_F - 2 D_G - eps d_max I  <=  c L_F - L_G  <=  eps d_max I,
// the lower side through the equivalent signless form
//   c SL_F - SL_G <= eps d_max I.
// The guarantee's hidden constant is tracked as the measured slack; pass
// means slack <= slack_bound.
inline QualityReport det_certificate(const Graph& g, const Graph& fg, double c,
                                     double eps, double slack_bound = 8.0) {
  check_dense_size(g.num_vertices(), "det_certificate");
  if (fg.num_vertices() != g.num_vertices())
    throw std::invalid_argument("det_certificate: vertex count mismatch");
  auto bg = laplacian(g);
  auto bf = laplacian(fg);
  Matrix M = c * bf.L - bg.L;
  Matrix MS = c * bf.SL - bg.SL;
  const double d_max = g.max_degree();
  const double scale = std::max(eps * d_max, 1e-300);

  auto esM = sym_eig(M);
  auto esMS = sym_eig(MS);
  const double upper = esM.eigenvalues().maxCoeff() / scale;
  const double upper_signless = esMS.eigenvalues().maxCoeff() / scale;
  // Direct lower-bound form; equals the signless upper bound algebraically.
  Matrix lower_form = M + eps * d_max * Matrix::Identity(g.num_vertices(), g.num_vertices());
  Vector deg_shift = 2.0 * (c * bf.D - bg.D);
  lower_form -= Matrix(deg_shift.asDiagonal());
  const double lower_min = min_eigenvalue(lower_form) / scale;

  QualityReport rep;
  rep.kind = "det_certificate";
  rep.epsilon = eps;
  rep.scale_c = c;
  rep.certificate["upper_laplacian"] = upper;
  rep.certificate["upper_signless"] = upper_signless;
  rep.certificate["lower_direct_min_eig"] = lower_min;
  double slack = std::max(upper, upper_signless);
  rep.measured["slack"] = slack;
  rep.measured["slack_bound"] = slack_bound;
  rep.worst_violation = slack - slack_bound;
  rep.pass = slack <= slack_bound + kPsdTolerance;
  if (!rep.pass) {
    const auto& es = upper >= upper_signless ? esM : esMS;
    Eigen::Index top;
    es.eigenvalues().maxCoeff(&top);
    Vector w = es.eigenvectors().col(top);
    rep.witness["eigenvector"] = std::vector<double>(w.data(), w.data() + w.size());
    rep.witness["side"] = upper >= upper_signless ? "laplacian" : "signless";
  }
  return rep;
}

inline QualityReport det_certificate(const Graph& g, std::span<const std::size_t> f,
                                     double c, double eps, double slack_bound = 8.0) {
  return det_certificate(g, subgraph(g, f), c, eps, slack_bound);
}

// Average-degree form of the deterministic guarantee at the original
// instance (after the cloud reduction is lifted back):
//   c L_F - L_G <= slack * eps (D_G + d_avg I)  and the same for the
//   signless pair, which together give the two-sided statement.
inline QualityReport det_certificate_avg(const Graph& g, const Graph& fg, double c,
                                         double eps, double slack_bound = 8.0) {
  if (eps <= 0) throw std::invalid_argument("det_certificate_avg: eps must be > 0");
  check_dense_size(g.num_vertices(), "det_certificate_avg");
  auto bg = laplacian(g);
  auto bf = laplacian(fg);
  Matrix M = c * bf.L - bg.L;
  Matrix MS = c * bf.SL - bg.SL;
  Vector Bdiag = (bg.D.array() + g.avg_degree()).matrix() * eps;
  if (Bdiag.minCoeff() <= 0)
    throw std::invalid_argument("det_certificate_avg: singular bound matrix");
  Vector inv_sqrt = Bdiag.array().rsqrt().matrix();
  double upper = max_eigenvalue(inv_sqrt.asDiagonal() * M * inv_sqrt.asDiagonal());
  double upper_signless =
      max_eigenvalue(inv_sqrt.asDiagonal() * MS * inv_sqrt.asDiagonal());

  QualityReport rep;
  rep.kind = "det_certificate_avg";
  rep.epsilon = eps;
  rep.scale_c = c;
  rep.certificate["upper_laplacian"] = upper;
  rep.certificate["upper_signless"] = upper_signless;
  double slack = std::max(upper, upper_signless);
  rep.measured["slack"] = slack;
  rep.measured["slack_bound"] = slack_bound;
  rep.worst_violation = slack - slack_bound;
  rep.pass = slack <= slack_bound + kPsdTolerance;
  return rep;
}

// Multiplicative spectral check |Q_Ht(x) - Q_H(x)| <= eps Q_H(x): exhaustive
// over all 2^n cut indicators when n <= 16, plus `trials` random unit
// directions projected off per-component constants.
inline QualityReport hypergraph_multiplicative_check(const Hypergraph& h,
                                                     const Hypergraph& ht, double eps,
                                                     int trials, std::uint64_t seed) {
  const int n = h.num_vertices();
  QualityReport rep;
  rep.kind = "hypergraph_multiplicative";
  rep.epsilon = eps;
  rep.seeds = {seed};

  double worst = 0;
  nlohmann::json witness;

  if (n <= 16) {
    std::vector<std::uint32_t> masksH(h.num_edges()), masksT(ht.num_edges());
    for (std::size_t i = 0; i < h.num_edges(); ++i) {
      std::uint32_t m = 0;
      for (int v : h.edge(i).vertices) m |= (1u << v);
      masksH[i] = m;
    }
    for (std::size_t i = 0; i < ht.num_edges(); ++i) {
      std::uint32_t m = 0;
      for (int v : ht.edge(i).vertices) m |= (1u << v);
      masksT[i] = m;
    }
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t s = 1; s < full; ++s) {
      double qH = 0, qT = 0;
      for (std::size_t i = 0; i < masksH.size(); ++i) {
        std::uint32_t inter = masksH[i] & s;
        if (inter != 0 && inter != masksH[i]) qH += h.edge(i).w;
      }
      for (std::size_t i = 0; i < masksT.size(); ++i) {
        std::uint32_t inter = masksT[i] & s;
        if (inter != 0 && inter != masksT[i]) qT += ht.edge(i).w;
      }
      if (qH <= 1e-12) continue;
      double ratio = std::abs(qT - qH) / qH;
      if (ratio > worst) {
        worst = ratio;
        witness["kind"] = "cut";
        witness["S"] = detail::mask_to_vertices(s, n);
      }
    }
    rep.certificate["exhaustive_cuts"] = true;
  } else {
    rep.certificate["exhaustive_cuts"] = false;
  }

  // Component constants of the associated graph span the null directions.
  auto comp = components(clique_expansion(h).graph);
  int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> comp_size(ncomp, 0);
  for (int v = 0; v < n; ++v) comp_size[comp[v]]++;

  for (int t = 0; t < trials; ++t) {
    std::vector<double> x(n);
    for (int v = 0; v < n; ++v) x[v] = rng::normal(seed, t, v);
    std::vector<double> mean(ncomp, 0.0);
    for (int v = 0; v < n; ++v) mean[comp[v]] += x[v];
    for (int c0 = 0; c0 < ncomp; ++c0) mean[c0] /= std::max(1, comp_size[c0]);
    double norm2 = 0;
    for (int v = 0; v < n; ++v) {
      x[v] -= mean[comp[v]];
      norm2 += x[v] * x[v];
    }
    if (norm2 < 1e-24) continue;
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& xv : x) xv *= inv;
    double qH = hypergraph_quadratic(h, x);
    if (qH <= 1e-12) continue;
    double qT = hypergraph_quadratic(ht, x);
    double ratio = std::abs(qT - qH) / qH;
    if (ratio > worst) {
      worst = ratio;
      witness["kind"] = "direction";
      witness["trial"] = t;
    }
  }

  rep.worst_violation = worst - eps;
  rep.measured["max_ratio"] = worst;
  rep.witness = witness;
  rep.pass = worst <= eps + kPsdTolerance;
  return rep;
}

// Resistance sanity: per-component Foster identity sum w r = size - 1 and the
// metric (triangle) property on sampled triples. Resistances are recomputed
// here from the dense pseudoinverse, independent of the sampler's table.
inline QualityReport resistance_identities_check(const Graph& g, std::uint64_t seed,
                                                 int triples = 100000) {
  check_dense_size(g.num_vertices(), "resistance_identities_check");
  auto comp = components(g);
  int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::vector<int>> members(ncomp);
  std::vector<int> local(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    local[v] = static_cast<int>(members[comp[v]].size());
    members[comp[v]].push_back(v);
  }

  QualityReport rep;
  rep.kind = "resistance_identities";
  rep.seeds = {seed};
  double worst_sum_dev = 0, worst_triangle = -1e300;

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
    auto r_of = [&](int a, int b) { return P(a, a) + P(b, b) - 2 * P(a, b); };

    double sum = 0;
    for (const auto& e : g.edges())
      if (comp[e.a] == c) sum += e.w * r_of(local[e.a], local[e.b]);
    worst_sum_dev = std::max(worst_sum_dev, std::abs(sum - (nc - 1)));

    // Share of the triple budget proportional to component size.
    int share = static_cast<int>(static_cast<double>(triples) * nc / g.num_vertices()) + 1;
    if (nc >= 3) {
      for (int t = 0; t < share; ++t) {
        int a = static_cast<int>(rng::uniform_below(seed, c, 3 * t, nc));
        int b = static_cast<int>(rng::uniform_below(seed, c, 3 * t + 1, nc));
        int cc = static_cast<int>(rng::uniform_below(seed, c, 3 * t + 2, nc));
        if (a == b || b == cc || a == cc) continue;
        worst_triangle =
            std::max(worst_triangle, r_of(a, b) - r_of(a, cc) - r_of(cc, b));
      }
    }
  }

  rep.measured["worst_foster_deviation"] = worst_sum_dev;
  rep.measured["worst_triangle_excess"] = worst_triangle;
  rep.worst_violation = std::max(worst_sum_dev - 1e-6, worst_triangle - 1e-9);
  rep.pass = worst_sum_dev <= 1e-6 && worst_triangle <= 1e-9;
  return rep;
}

}  // namespace sparsify

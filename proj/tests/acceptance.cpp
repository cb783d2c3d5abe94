// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 9 drives the CLI binary, whose path must be argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sparsify/det_game.hpp"
#include "sparsify/gen.hpp"
#include "sparsify/hypergraph_spectral.hpp"
#include "sparsify/io.hpp"
#include "sparsify/laplacian.hpp"
#include "sparsify/lll.hpp"
#include "sparsify/reduction.hpp"
#include "sparsify/verifier.hpp"

using namespace sparsify;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cli_path;

// ---------------------------------------------------------------------- 1
Outcome criterion1_identities() {
  // Q_H(1_S) = e_E(S) exactly for all S, n <= 12
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Hypergraph h = gen::random_hypergraph(12, 150, 2, 4, seed);
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
      std::vector<double> x(12, 0.0);
      std::vector<int> s;
      for (int v = 0; v < 12; ++v)
        if ((mask >> v) & 1u) {
          x[v] = 1.0;
          s.push_back(v);
        }
      if (hypergraph_quadratic(h, x) != hypergraph_cut(h, s))
        return {false, "Q_H(1_S) != e_E(S) at seed " + std::to_string(seed)};
    }
  }

  // clique-expansion edge counts
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Hypergraph h = gen::random_hypergraph(15, 60, 2, 6, seed);
    std::size_t expect = 0;
    for (const auto& e : h.edges())
      expect += e.vertices.size() * (e.vertices.size() - 1) / 2;
    if (clique_expansion(h).graph.num_edges() != expect)
      return {false, "clique expansion count mismatch"};
  }

  // reduction transfer identities, 1000 random trials, 1e-10 relative
  int trials = 0;
  double worst_rel = 0;
  for (std::uint64_t seed = 0; trials < 1000; ++seed) {
    int n = 10 + static_cast<int>(seed % 41);
    Graph g = gen::random_graph(n, 2 * n, seed);
    auto red = reduce_graph(g);
    auto bg = laplacian(g);
    auto br = laplacian(red.graph);
    for (int rep = 0; rep < 5; ++rep, ++trials) {
      Vector x(n);
      for (int v = 0; v < n; ++v) x[v] = rng::normal(seed, rep, v);
      std::vector<double> xv(x.data(), x.data() + n);
      auto xp = lift_vector(red.mapping, xv);
      Vector xpv = Eigen::Map<const Vector>(xp.data(), xp.size());
      double a = x.dot(bg.L * x), b = xpv.dot(br.L * xpv);
      worst_rel = std::max(worst_rel, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
  }
  if (worst_rel > 1e-10)
    return {false, "transfer identity error " + std::to_string(worst_rel)};
  return {true, "exact cut identities; transfer rel err " + std::to_string(worst_rel)};
}

// ---------------------------------------------------------------------- 2
std::uint64_t addr_seed(int i) { return 7000 + static_cast<std::uint64_t>(i); }

Outcome criterion2_resistances() {
  // K3 value
  auto k3 = effective_resistances(gen::complete_graph(3));
  if (std::abs(k3.at(0, 1) - 2.0 / 3.0) > 1e-9) return {false, "K3 resistance wrong"};

  double worst_foster = 0, worst_triangle = -1e300;
  for (int i = 0; i < 100; ++i) {
    int n = 20 + (i * 180) / 100;
    Graph g = gen::random_graph(n, 3 * n, 300 + i);
    if (i % 3 == 2) {  // weighted variant
      std::vector<Edge> es = g.edges();
      for (std::size_t j = 0; j < es.size(); ++j)
        es[j].w = 0.25 + rng::uniform01(i, j);
      g = Graph(n, es);
    }
    auto rep = resistance_identities_check(g, addr_seed(i), 1000);
    worst_foster = std::max(
        worst_foster, rep.measured["worst_foster_deviation"].template get<double>());
    worst_triangle = std::max(
        worst_triangle, rep.measured["worst_triangle_excess"].template get<double>());
    if (!rep.pass) return {false, "identities fail on instance " + std::to_string(i)};

    // dual route: sampler-side table vs the verifier's pseudoinverse
    if (i < 10) {
      auto table = effective_resistances(g);
      Matrix P = pinv_psd(laplacian(g).L);
      auto comp = components(g);
      for (const auto& e : g.edges()) {
        if (comp[e.a] != comp[e.b]) continue;
        double indep = P(e.a, e.a) + P(e.b, e.b) - 2 * P(e.a, e.b);
        if (std::abs(table.at(e.a, e.b) - indep) > 1e-8)
          return {false, "resistance table disagrees with independent route"};
      }
    }
  }
  std::ostringstream os;
  os << "foster dev " << worst_foster << ", triangle excess " << worst_triangle;
  return {true, os.str()};
}

// ---------------------------------------------------------------------- 3
Outcome criterion3_halving() {
  Hypergraph h = gen::random_hypergraph(64, 1365, 3, 3, 6400);
  int passes = 0;
  std::vector<std::uint64_t> rounds;
  bool trivial = true;
  for (int s = 0; s < 100; ++s) {
    auto res = halve_hypergraph(h, 100 + s);
    trivial = trivial && res.trivial_path;
    rounds.push_back(res.resample_rounds);
    if (audit_halving(h, res.kept).ok) ++passes;
  }
  std::sort(rounds.begin(), rounds.end());
  std::ostringstream os;
  os << passes << "/100 seeds, median resample rounds " << rounds[50]
     << (trivial ? " (trivial path: d <= 100 log(dr))" : "");
  return {passes >= 99, os.str()};
}

// ---------------------------------------------------------------------- 4
Outcome criterion4_cut_pipeline() {
  const double eps = 0.5;
  int passes = 0;
  int k_min = 99, k_max = 0;
  double worst_margin = 0;  // max over seeds of worst |c e_F - e_E| / bound
  for (int i = 0; i < 100; ++i) {
    Hypergraph h = gen::random_hypergraph(14, 16000, 3, 3, 1400 + i);
    auto red = reduce_hypergraph(h);
    auto res = sparsify_cut(red.hypergraph, eps, 100 + i);
    k_min = std::min(k_min, res.k);
    k_max = std::max(k_max, res.k);
    auto lifted = lift_edges(red.mapping, res.kept);

    // exhaustive over all 2^14 cuts against eps (d |S| + vol(S))
    const int n = 14;
    std::vector<std::uint32_t> masks(h.num_edges());
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      std::uint32_t m = 0;
      for (int v : h.edge(e).vertices) m |= (1u << v);
      masks[e] = m;
    }
    std::vector<char> in_f(h.num_edges(), 0);
    for (std::size_t e : lifted) in_f[e] = 1;
    auto deg = h.degrees();
    const double d = 3.0 * static_cast<double>(h.num_edges()) / n;
    bool ok = true;
    double margin = 0;
    for (std::uint32_t sm = 1; sm + 1 < (1u << n); ++sm) {
      double eE = 0, eF = 0;
      for (std::size_t e = 0; e < masks.size(); ++e) {
        std::uint32_t inter = masks[e] & sm;
        if (inter != 0 && inter != masks[e]) {
          eE += 1.0;
          eF += in_f[e];
        }
      }
      double vol = 0;
      int size = 0;
      for (int v = 0; v < n; ++v)
        if ((sm >> v) & 1u) {
          vol += deg[v];
          ++size;
        }
      double bound = eps * (d * size + vol);
      double dev = std::abs(res.scale * eF - eE);
      margin = std::max(margin, dev / bound);
      if (dev > bound + 1e-9) {
        ok = false;
        break;
      }
    }
    worst_margin = std::max(worst_margin, margin);
    if (ok) ++passes;
  }
  std::ostringstream os;
  os << passes << "/100 seeds, k in [" << k_min << "," << k_max
     << "], worst deviation/bound " << worst_margin;
  return {passes >= 95 && k_min >= 1, os.str()};
}

// ---------------------------------------------------------------------- 5
Outcome criterion5_spectral_additive() {
  // The spec names (n=256, d=512), which no simple graph attains; the nearest
  // constructible sibling swaps them. c_iter = 16 yields k = 2 real halvings.
  Graph g = gen::random_circulant(512, 256, 5001);
  const double eps = 0.5;
  LllConfig cfg;
  cfg.c_iter = 16.0;
  auto bundleG = laplacian(g);
  double worst_C = 0;
  int k_seen = -1;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto res = sparsify_spectral_graph(g, eps, seed, cfg);
    k_seen = res.k;
    Matrix diff = res.scale * laplacian(subgraph(g, res.kept)).L - bundleG.L;
    double C =
        operator_norm(diff) / (eps * std::log(1.0 / eps) * g.max_degree());
    worst_C = std::max(worst_C, C);
  }
  std::ostringstream os;
  os << "k=" << k_seen << ", measured C <= " << worst_C << " (bound 8)";
  return {worst_C <= 8.0 && k_seen >= 1, os.str()};
}

// ---------------------------------------------------------------------- 6
Outcome criterion6_deterministic() {
  // stated instances: T >= m, so F = E exactly
  {
    Graph k8 = gen::complete_graph(8);
    auto res = det_sparsify(k8, 0.25);
    std::size_t T = static_cast<std::size_t>(std::ceil(16.0 * 8 / (0.25 * 0.25)));
    if (!(res.trivial && T >= k8.num_edges() && res.selected.size() == k8.num_edges() &&
          res.c == 1.0))
      return {false, "K8 trivial path wrong"};
    if (!det_certificate(k8, res.selected, res.c, 0.25).pass)
      return {false, "K8 certificate failed"};
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = gen::random_graph(64, 600 + 200 * seed, 600 + seed);
    auto res = det_sparsify(g, 0.25);
    if (!(res.trivial && res.selected.size() == g.num_edges() && res.c == 1.0))
      return {false, "n=64 trivial path wrong"};
    if (!det_certificate(g, res.selected, res.c, 0.25).pass)
      return {false, "n=64 certificate failed"};
  }

  // non-trivial game audit (c_T = 1 so T < m) at n = 64
  Graph k64 = gen::complete_graph(64);
  DetGameConfig cfg;
  cfg.c_T = 1.0;
  const double eps = 0.25;
  auto res = det_sparsify(k64, eps, cfg);
  if (res.trivial || res.T != 1024) return {false, "game did not run"};
  const double m = static_cast<double>(k64.num_edges());
  const double d = k64.max_degree();
  for (const auto& st : res.transcript) {
    if (st.trace_err > 1e-8) return {false, "trace drift " + std::to_string(st.trace_err)};
    if (st.payoff > 1e-8) return {false, "positive payoff " + std::to_string(st.payoff)};
    if (st.width > 8.0 * std::sqrt(d * m)) return {false, "width audit failed"};
  }
  auto cert = det_certificate(k64, res.selected, res.c, eps);
  double slack = cert.measured["slack"].get<double>();
  if (!cert.pass) return {false, "det certificate slack " + std::to_string(slack)};

  // bit-identical rerun
  auto res2 = det_sparsify(k64, eps, cfg);
  std::ostringstream s1, s2;
  serialize_graph(subgraph(k64, res.selected), s1, res.c);
  serialize_graph(subgraph(k64, res2.selected), s2, res2.c);
  if (res.selected != res2.selected || s1.str() != s2.str())
    return {false, "rerun not bit-identical"};

  std::ostringstream os;
  os << "trivial instances exact; game slack " << slack << ", max width/sqrt(dm) "
     << res.max_width / std::sqrt(d * m) << ", trace err " << res.max_trace_err;
  return {true, os.str()};
}

// ---------------------------------------------------------------------- 7
Outcome criterion7_hypergraph_multiplicative() {
  Hypergraph h = gen::random_hypergraph(14, 300, 2, 4, 1401);
  const double eps = 0.3;
  auto ce = clique_expansion(h);
  auto table = effective_resistances(ce.graph);
  auto r_e = hyperedge_resistances(h, table);
  auto plan = build_plan(h, eps, r_e);  // calibrated default c_L

  int passes = 0;
  double worst_ratio = 0;
  for (int s = 0; s < 100; ++s) {
    Hypergraph ht = sample_sparsifier(h, plan, 1 + s);
    auto rep = hypergraph_multiplicative_check(h, ht, eps, 10000, rng::derive(1 + s, 13));
    worst_ratio = std::max(worst_ratio, rep.measured["max_ratio"].get<double>());
    if (rep.pass) ++passes;
  }

  // size bound bookkeeping
  const double n = 14, r = 4;
  double kappa = plan.expected_edges /
                 (std::pow(eps, -2.0) * r * r * r * n * std::log(n));

  // per-hyperedge unbiasedness over 1000 seeds, 3 sigma
  std::vector<double> sums(h.num_edges(), 0.0);
  const int reps = 1000;
  for (int s = 0; s < reps; ++s)
    for (std::size_t e = 0; e < h.num_edges(); ++e)
      if (rng::uniform01(2000 + s, e) < plan.p[e]) sums[e] += 1.0 / plan.p[e];
  double worst_z = 0;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    double p = plan.p[e];
    if (p >= 1.0) {
      if (sums[e] != reps) return {false, "p=1 edge not always kept"};
      continue;
    }
    double mean = sums[e] / reps;
    double sigma = std::sqrt((1.0 - p) / p / reps);
    worst_z = std::max(worst_z, std::abs(mean - 1.0) / sigma);
  }

  std::ostringstream os;
  os << passes << "/100 seeds, worst ratio " << worst_ratio << " (eps 0.3), E|F| "
     << plan.expected_edges << ", kappa " << kappa << ", worst unbiasedness z "
     << worst_z;
  return {passes >= 99 && worst_z <= 3.0, os.str()};
}

// ---------------------------------------------------------------------- 8
Outcome criterion8_sandwich() {
  for (std::uint64_t inst = 0; inst < 3; ++inst) {
    Hypergraph h = gen::random_hypergraph(16, 120, 2, 2 + 2 * inst, 80 + inst);
    for (int t = 0; t < 10000; ++t) {
      std::vector<double> x(16);
      for (int v = 0; v < 16; ++v) x[v] = rng::normal(4242 + inst, t, v);
      SandwichBounds sb;
      try {
        sb = sandwich_bounds(h, x);
      } catch (const std::logic_error&) {
        return {false, "containment violated"};
      }
      if (sb.lower > sb.quadratic + 1e-9 || sb.quadratic > sb.upper + 1e-9)
        return {false, "aggregate containment violated"};
    }
  }
  return {true, "3 instances x 10000 draws, zero violations"};
}

// ---------------------------------------------------------------------- 9
Outcome criterion9_cli() {
  if (cli_path.empty()) return {false, "CLI path not given (argv[1])"};
  fs::path dir = fs::temp_directory_path() / "sparsify_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  // library-level round trip
  {
    Hypergraph h = gen::random_hypergraph(10, 30, 2, 4, 90);
    std::ostringstream os;
    serialize_hypergraph(h, os);
    std::istringstream is(os.str());
    auto back = parse_hypergraph(is).hypergraph;
    if (back.num_edges() != h.num_edges()) return {false, "round trip lost edges"};
    for (std::size_t i = 0; i < h.num_edges(); ++i)
      if (back.edge(i).vertices != h.edge(i).vertices || back.edge(i).w != h.edge(i).w)
        return {false, "round trip not exact"};
  }

  Hypergraph h = gen::random_hypergraph(12, 200, 2, 4, 91);
  {
    std::ostringstream os;
    serialize_hypergraph(h, os);
    write_text_file((dir / "in.hg").string(), os.str());
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run = [&](const std::string& args) {
    std::string cmd = cli_path + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };

  std::string in = (dir / "in.hg").string();
  if (run("sparsify-hyper -i " + in + " -e 0.3 -s 11 -o " + (dir / "a").string()) != 0)
    return {false, "sparsify-hyper run failed"};
  if (run("sparsify-hyper -i " + in + " -e 0.3 -s 11 -o " + (dir / "b").string()) != 0)
    return {false, "sparsify-hyper rerun failed"};
  if (slurp(dir / "a.hg") != slurp(dir / "b.hg")) return {false, "hyper outputs differ"};
  if (slurp(dir / "a.report.json") != slurp(dir / "b.report.json"))
    return {false, "hyper reports differ"};

  if (run("sparsify-cut -i " + in + " -e 0.9 -s 12 -o " + (dir / "c").string()) != 0)
    return {false, "sparsify-cut run failed"};
  if (run("sparsify-cut -i " + in + " -e 0.9 -s 12 -o " + (dir / "d").string()) != 0)
    return {false, "sparsify-cut rerun failed"};
  if (slurp(dir / "c.hg") != slurp(dir / "d.hg")) return {false, "cut outputs differ"};
  if (slurp(dir / "c.report.json") != slurp(dir / "d.report.json"))
    return {false, "cut reports differ"};

  // verify an untouched bundle (F = E, c = 1)
  {
    std::ostringstream os;
    serialize_hypergraph(h, os, 1.0);
    write_text_file((dir / "full.hg").string(), os.str());
  }
  if (run("verify -i " + in + " -f " + (dir / "full.hg").string() + " -k hyper -e 0.3") != 0)
    return {false, "verify on untouched bundle failed"};

  return {true, "byte-identical reruns; exact round trip; untouched bundle verifies"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  int only = argc > 2 ? std::atoi(argv[2]) : 0;

  struct Entry {
    int num;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "exact identities (quadratic form, clique counts, reduction transfer)",
       criterion1_identities},
      {2, "effective resistance suite (Foster, metric, K3)", criterion2_resistances},
      {3, "halving certificate via independent enumeration", criterion3_halving},
      {4, "additive cut sparsifier end-to-end, exhaustive cuts", criterion4_cut_pipeline},
      {5, "additive spectral graph sparsifier norm bound", criterion5_spectral_additive},
      {6, "deterministic construction with per-step audits", criterion6_deterministic},
      {7, "multiplicative hypergraph sparsifier", criterion7_hypergraph_multiplicative},
      {8, "clique sandwich bounds", criterion8_sandwich},
      {9, "CLI determinism and round-trip", criterion9_cli},
  };

  int failures = 0;
  for (const auto& e : entries) {
    if (only != 0 && e.num != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.fn();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s :: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL",
                e.num, e.name, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}

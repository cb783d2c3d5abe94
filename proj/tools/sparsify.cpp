// Batch CLI for the sparsification toolkit: constructions, verification and
// instance statistics. All randomized commands require an explicit --seed and
// are pure functions of (input bytes, config, seed), so outputs are
// byte-identical across reruns.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "sparsify/det_game.hpp"
#include "sparsify/gen.hpp"
#include "sparsify/graph.hpp"
#include "sparsify/hypergraph_spectral.hpp"
#include "sparsify/io.hpp"
#include "sparsify/lll.hpp"
#include "sparsify/reduction.hpp"
#include "sparsify/verifier.hpp"

namespace {

using nlohmann::json;
using namespace sparsify;

struct CommonOpts {
  std::string input;
  std::string out;
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  bool json_out = false;
  double slack_bound = 8.0;
  int trials = 10000;
  LllConfig lll;
  DetGameConfig det;
  SpectralSamplerConfig sampler;
};

json instance_stats(const Graph& g) {
  json j;
  j["type"] = "graph";
  j["n"] = g.num_vertices();
  j["m"] = g.num_edges();
  j["total_weight"] = g.total_weight();
  j["d_avg"] = g.avg_degree();
  j["d_max"] = g.max_degree();
  auto comp = components(g);
  j["components"] = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  j["simple"] = g.is_simple();
  j["unweighted"] = g.is_unweighted();
  return j;
}

json instance_stats(const Hypergraph& h) {
  json j;
  j["type"] = "hypergraph";
  j["n"] = h.num_vertices();
  j["m"] = h.num_edges();
  j["total_weight"] = h.total_weight();
  j["rank"] = h.rank();
  j["d_max"] = h.max_incidence();
  j["d_avg"] = h.avg_incidence();
  j["rank_avg_degree"] = h.num_vertices() > 0 ? static_cast<double>(h.rank()) *
                                                    h.num_edges() / h.num_vertices()
                                              : 0.0;
  j["unweighted"] = h.is_unweighted();
  return j;
}

void warn_dropped(const Hypergraph& h, const std::string& path) {
  if (h.dropped_small_edges() > 0)
    std::cerr << path << ": dropped " << h.dropped_small_edges()
              << " hyperedge(s) with fewer than 2 vertices\n";
}

json config_echo(const CommonOpts& o) {
  json j;
  j["epsilon"] = o.epsilon;
  j["seed"] = o.seed;
  j["slack_bound"] = o.slack_bound;
  j["trials"] = o.trials;
  j["c_iter"] = o.lll.c_iter;
  j["threshold_factor"] = o.lll.threshold_factor;
  j["resample_cap_mult"] = o.lll.resample_cap_mult;
  j["retries"] = o.lll.retries;
  j["c_T"] = o.det.c_T;
  j["eta_const"] = o.det.eta_const;
  j["width_kappa"] = o.det.width_kappa;
  j["c_L"] = o.sampler.c_L;
  return j;
}

json rounds_to_json(const IteratedHalvingResult& res) {
  json rounds = json::array();
  for (const auto& r : res.rounds) {
    json jr;
    jr["edges_before"] = r.edges_before;
    jr["edges_after"] = r.edges_after;
    jr["max_degree_before"] = r.max_degree_before;
    jr["max_degree_after"] = r.max_degree_after;
    jr["resample_rounds"] = r.resample_rounds;
    jr["core_event_count"] = r.core_event_count;
    jr["trivial_path"] = r.trivial_path;
    jr["attempts"] = r.attempts;
    rounds.push_back(jr);
  }
  return rounds;
}

void write_labels(const std::string& prefix, const LabelMap& labels) {
  if (labels.identity) return;
  json j;
  j["labels"] = labels.label_of;
  write_text_file(prefix + ".labels.json", j.dump(2) + "\n");
}

int emit(const std::string& prefix, const std::string& command, json report,
         bool json_out) {
  bool pass = report["pass"].get<bool>();
  write_text_file(prefix + ".report.json", report.dump(2) + "\n");
  if (json_out)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << command << ": " << (pass ? "pass" : "FAIL") << " (report at " << prefix
              << ".report.json)\n";
  return pass ? 0 : 1;
}

// Deterministic random-subset spot check for instances too large for the
// exhaustive oracle.
json sampled_cut_check(const Hypergraph& h, const Hypergraph& fh, double c, double eps,
                       std::uint64_t seed, int trials) {
  const int n = h.num_vertices();
  auto deg = h.degrees();
  const double d = h.num_vertices() > 0
                       ? static_cast<double>(h.rank()) * h.num_edges() / n
                       : 0.0;
  double worst = -1e300;
  std::vector<int> worst_s;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> s;
    for (int v = 0; v < n; ++v)
      if (rng::coin(seed, t, v)) s.push_back(v);
    double vol = 0;
    for (int v : s) vol += deg[v];
    double bound = eps * (d * s.size() + vol);
    double viol =
        std::abs(c * hypergraph_cut(fh, s) - hypergraph_cut(h, s)) - bound;
    if (viol > worst) {
      worst = viol;
      worst_s = s;
    }
  }
  json j;
  j["kind"] = "sampled_cut_check";
  j["trials"] = trials;
  j["worst_violation"] = worst;
  j["pass"] = worst <= kPsdTolerance;
  j["witness_size"] = worst_s.size();
  return j;
}

int cmd_stats(const CommonOpts& o) {
  std::ifstream probe(o.input);
  if (!probe) throw ParseError(o.input + ": cannot open");
  std::string line;
  char tag = 0;
  while (std::getline(probe, line)) {
    auto i = line.find_first_not_of(" \t");
    if (i == std::string::npos || line[i] == '#') continue;
    tag = line[i];
    break;
  }
  json j;
  if (tag == 'g')
    j = instance_stats(parse_graph_file(o.input).graph);
  else if (tag == 'h')
    j = instance_stats(parse_hypergraph_file(o.input).hypergraph);
  else
    throw ParseError(o.input + ": unknown header tag");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sparsify_cut(const CommonOpts& o) {
  auto parsed = parse_hypergraph_file(o.input);
  const Hypergraph& h = parsed.hypergraph;
  warn_dropped(h, o.input);
  if (!h.is_unweighted())
    throw std::invalid_argument("sparsify-cut requires an unweighted hypergraph");

  auto red = reduce_hypergraph(h);
  auto res = sparsify_cut(red.hypergraph, o.epsilon, o.seed, o.lll);
  auto lifted = lift_edges(red.mapping, res.kept);
  Hypergraph fh = subhypergraph(h, lifted);

  std::ostringstream os;
  serialize_hypergraph(fh, os, res.scale);
  write_text_file(o.out + ".hg", os.str());
  write_labels(o.out, parsed.labels);

  json report;
  report["command"] = "sparsify-cut";
  report["config"] = config_echo(o);
  report["instance"] = instance_stats(h);
  report["construction"] = {{"k", res.k},
                            {"scale_c", res.scale},
                            {"edges_out", lifted.size()},
                            {"reduced_vertices", red.hypergraph.num_vertices()},
                            {"degree_cap", red.mapping.degree_cap},
                            {"rounds", rounds_to_json(res)}};

  const double d = static_cast<double>(h.rank()) * h.num_edges() / h.num_vertices();
  auto deg = h.degrees();
  json checks = json::array();
  if (h.num_vertices() <= 20) {
    auto rep = brute_force_cut_check(h, fh, res.scale, [&](std::span<const int> s) {
      double vol = 0;
      for (int v : s) vol += deg[v];
      return o.epsilon * (d * s.size() + vol);
    });
    rep.epsilon = o.epsilon;
    rep.seeds = {o.seed};
    checks.push_back(rep.to_json());
  } else {
    checks.push_back(
        sampled_cut_check(h, fh, res.scale, o.epsilon, rng::derive(o.seed, 71), 20000));
  }
  report["checks"] = checks;
  bool pass = true;
  for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
  report["pass"] = pass;
  return emit(o.out, "sparsify-cut", report, o.json_out);
}

int cmd_sparsify_spectral(const CommonOpts& o) {
  auto parsed = parse_graph_file(o.input);
  const Graph& g = parsed.graph;
  if (!g.is_unweighted() || !g.is_simple())
    throw std::invalid_argument("sparsify-spectral requires a simple unweighted graph");

  auto red = reduce_graph(g);
  auto res = sparsify_spectral_graph(red.graph, o.epsilon, o.seed, o.lll);
  auto lifted = lift_edges(red.mapping, res.kept);
  Graph fg = subgraph(g, lifted);

  std::ostringstream os;
  serialize_graph(fg, os, res.scale);
  write_text_file(o.out + ".g", os.str());
  write_labels(o.out, parsed.labels);

  auto rep = spectral_additive_check(g, fg, res.scale, o.epsilon);
  rep.seeds = {o.seed};
  double slack = rep.measured["slack_vs_avg_form"].get<double>();
  bool pass = slack <= o.slack_bound + kPsdTolerance;

  json report;
  report["command"] = "sparsify-spectral";
  report["config"] = config_echo(o);
  report["instance"] = instance_stats(g);
  report["construction"] = {{"k", res.k},
                            {"scale_c", res.scale},
                            {"edges_out", lifted.size()},
                            {"reduced_vertices", red.graph.num_vertices()},
                            {"rounds", rounds_to_json(res)}};
  report["checks"] = json::array({rep.to_json()});
  report["measured_slack"] = slack;
  report["pass"] = pass;
  return emit(o.out, "sparsify-spectral", report, o.json_out);
}

int cmd_sparsify_det(const CommonOpts& o) {
  auto parsed = parse_graph_file(o.input);
  const Graph& g = parsed.graph;
  if (!g.is_unweighted())
    throw std::invalid_argument("sparsify-det requires an unweighted graph");

  auto red = reduce_graph(g);
  auto res = det_sparsify(red.graph, o.epsilon, o.det);
  auto lifted = lift_edges(red.mapping, res.selected);
  Graph fg = subgraph(g, lifted);

  std::ostringstream os;
  serialize_graph(fg, os, res.c);
  write_text_file(o.out + ".g", os.str());
  write_labels(o.out, parsed.labels);

  auto rep_reduced =
      det_certificate(red.graph, subgraph(red.graph, res.selected), res.c, o.epsilon,
                      o.slack_bound);
  auto rep_avg = det_certificate_avg(g, fg, res.c, o.epsilon, o.slack_bound);

  json game;
  game["T"] = res.T;
  game["trivial"] = res.trivial;
  game["eta"] = res.eta;
  game["max_trace_err"] = res.max_trace_err;
  game["max_payoff"] = res.max_payoff;
  game["max_width"] = res.max_width;
  if (!res.trivial) {
    const double dmax = red.graph.max_degree();
    game["width_kappa_measured"] =
        res.max_width / std::sqrt(dmax * static_cast<double>(red.graph.num_edges()));
  }

  json report;
  report["command"] = "sparsify-det";
  report["config"] = config_echo(o);
  report["instance"] = instance_stats(g);
  report["construction"] = {{"scale_c", res.c},
                            {"edges_out", lifted.size()},
                            {"reduced_vertices", red.graph.num_vertices()},
                            {"game", game}};
  report["checks"] = json::array({rep_reduced.to_json(), rep_avg.to_json()});
  report["pass"] = rep_reduced.pass && rep_avg.pass;
  return emit(o.out, "sparsify-det", report, o.json_out);
}

int cmd_sparsify_hyper(const CommonOpts& o) {
  auto parsed = parse_hypergraph_file(o.input);
  const Hypergraph& h = parsed.hypergraph;
  warn_dropped(h, o.input);

  auto ce = clique_expansion(h);
  auto table = effective_resistances(ce.graph);
  auto r_e = hyperedge_resistances(h, table);
  auto plan = build_plan(h, o.epsilon, r_e, o.sampler);
  Hypergraph ht = sample_sparsifier(h, plan, o.seed);

  std::ostringstream os;
  serialize_hypergraph(ht, os, 1.0);
  write_text_file(o.out + ".hg", os.str());
  write_labels(o.out, parsed.labels);

  auto rep = hypergraph_multiplicative_check(h, ht, o.epsilon, o.trials,
                                             rng::derive(o.seed, 13));

  const double n = h.num_vertices();
  const double r = std::max(2, h.rank());
  double denom = std::pow(o.epsilon, -2.0) * r * r * r * n * std::log(std::max(2.0, n));
  json sampling;
  sampling["expected_edges"] = plan.expected_edges;
  sampling["actual_edges"] = ht.num_edges();
  sampling["kappa_measured"] = plan.expected_edges / denom;
  json buckets = json::array();
  for (const auto& b : plan.buckets) {
    json jb;
    jb["class"] = b.klass;
    jb["eps_i"] = b.eps_i;
    jb["L_i"] = b.L_i;
    jb["edges"] = b.edges.size();
    buckets.push_back(jb);
  }
  sampling["buckets"] = buckets;

  json report;
  report["command"] = "sparsify-hyper";
  report["config"] = config_echo(o);
  report["instance"] = instance_stats(h);
  report["construction"] = sampling;
  report["checks"] = json::array({rep.to_json()});
  report["pass"] = rep.pass;
  return emit(o.out, "sparsify-hyper", report, o.json_out);
}

int cmd_verify(const CommonOpts& o, const std::string& original,
               const std::string& sparsifier, const std::string& kind,
               std::optional<double> scale_opt) {
  json report;
  report["command"] = "verify";
  report["config"] = config_echo(o);
  report["kind"] = kind;
  json checks = json::array();
  bool pass = false;

  if (kind == "cut" || kind == "hyper") {
    auto ph = parse_hypergraph_file(original);
    auto pf = parse_hypergraph_file(sparsifier);
    double c = scale_opt.value_or(pf.scale.value_or(1.0));
    report["instance"] = instance_stats(ph.hypergraph);
    if (kind == "cut") {
      const Hypergraph& h = ph.hypergraph;
      const double d = static_cast<double>(h.rank()) * h.num_edges() / h.num_vertices();
      auto deg = h.degrees();
      auto rep =
          brute_force_cut_check(h, pf.hypergraph, c, [&](std::span<const int> s) {
            double vol = 0;
            for (int v : s) vol += deg[v];
            return o.epsilon * (d * s.size() + vol);
          });
      rep.epsilon = o.epsilon;
      pass = rep.pass;
      checks.push_back(rep.to_json());
    } else {
      auto rep = hypergraph_multiplicative_check(ph.hypergraph, pf.hypergraph,
                                                 o.epsilon, o.trials,
                                                 rng::derive(o.seed, 13));
      pass = rep.pass;
      checks.push_back(rep.to_json());
    }
  } else if (kind == "spectral" || kind == "det") {
    auto pg = parse_graph_file(original);
    auto pf = parse_graph_file(sparsifier);
    double c = scale_opt.value_or(pf.scale.value_or(1.0));
    report["instance"] = instance_stats(pg.graph);
    if (kind == "spectral") {
      auto rep = spectral_additive_check(pg.graph, pf.graph, c, o.epsilon);
      double slack = rep.measured["slack_vs_avg_form"].get<double>();
      pass = slack <= o.slack_bound + kPsdTolerance;
      checks.push_back(rep.to_json());
    } else {
      auto rep = det_certificate_avg(pg.graph, pf.graph, c, o.epsilon, o.slack_bound);
      pass = rep.pass;
      checks.push_back(rep.to_json());
    }
  } else {
    throw std::invalid_argument("verify: unknown kind " + kind);
  }

  report["checks"] = checks;
  report["pass"] = pass;
  if (o.json_out)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << "verify(" << kind << "): " << (pass ? "pass" : "FAIL") << "\n";
  if (!o.out.empty()) write_text_file(o.out + ".report.json", report.dump(2) + "\n");
  return pass ? 0 : 1;
}

void add_constants(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--c-iter", o.lll.c_iter, "halving-count constant")
      ->envname("SPARSIFY_C_ITER");
  cmd->add_option("--threshold-factor", o.lll.threshold_factor,
                  "core-event threshold constant")
      ->envname("SPARSIFY_THRESHOLD_FACTOR");
  cmd->add_option("--resample-cap-mult", o.lll.resample_cap_mult,
                  "resample budget multiplier")
      ->envname("SPARSIFY_RESAMPLE_CAP_MULT");
  cmd->add_option("--retries", o.lll.retries, "fresh-seed retries per halving")
      ->envname("SPARSIFY_RETRIES");
  cmd->add_option("--c-t", o.det.c_T, "deterministic game step constant")
      ->envname("SPARSIFY_C_T");
  cmd->add_option("--eta-const", o.det.eta_const, "learning-rate denominator constant")
      ->envname("SPARSIFY_ETA_CONST");
  cmd->add_option("--c-l", o.sampler.c_L, "resistance sampling-rate constant")
      ->envname("SPARSIFY_C_L");
  cmd->add_option("--slack-bound", o.slack_bound,
                  "measured-slack bound for certificates")
      ->envname("SPARSIFY_SLACK_BOUND");
  cmd->add_option("--trials", o.trials, "random directions for multiplicative checks")
      ->envname("SPARSIFY_TRIALS");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph / hypergraph sparsification toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string original, sparsifier, kind;
  double scale_flag = -1;

  auto* stats = app.add_subcommand("stats", "instance statistics");
  stats->add_option("-i,--input", o.input)->required();
  stats->add_flag("--json", o.json_out);

  auto add_common = [&](CLI::App* cmd, bool needs_seed) {
    cmd->add_option("-i,--input", o.input)->required();
    cmd->add_option("-o,--out", o.out, "output path prefix")->required();
    cmd->add_option("-e,--epsilon", o.epsilon)->check(CLI::Range(1e-9, 1.0))->required();
    auto* seed = cmd->add_option("-s,--seed", o.seed, "rng seed (required: no silent entropy)");
    if (needs_seed) seed->required();
    cmd->add_flag("--json", o.json_out);
    add_constants(cmd, o);
  };

  auto* cut = app.add_subcommand("sparsify-cut",
                                 "additive cut sparsifier for hypergraphs (reduce + "
                                 "iterated halving + lift)");
  add_common(cut, true);
  auto* spectral = app.add_subcommand(
      "sparsify-spectral", "additive spectral graph sparsifier (bilateral halvings)");
  add_common(spectral, true);
  auto* det = app.add_subcommand("sparsify-det",
                                 "deterministic unweighted sparsifier (online game)");
  add_common(det, false);
  auto* hyper = app.add_subcommand(
      "sparsify-hyper", "multiplicative spectral hypergraph sparsifier (resistances)");
  add_common(hyper, true);

  auto* verify = app.add_subcommand("verify", "re-certify an output bundle");
  verify->add_option("-i,--original", original)->required();
  verify->add_option("-f,--sparsifier", sparsifier)->required();
  verify->add_option("-k,--kind", kind)->required()->check(
      CLI::IsMember({"cut", "spectral", "det", "hyper"}));
  verify->add_option("-e,--epsilon", o.epsilon)->check(CLI::Range(1e-9, 1.0))->required();
  verify->add_option("--scale", scale_flag, "override the scale header");
  verify->add_option("-s,--seed", o.seed);
  verify->add_option("-o,--out", o.out, "optional report path prefix");
  verify->add_flag("--json", o.json_out);
  add_constants(verify, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats) return cmd_stats(o);
    if (*cut) return cmd_sparsify_cut(o);
    if (*spectral) return cmd_sparsify_spectral(o);
    if (*det) return cmd_sparsify_det(o);
    if (*hyper) return cmd_sparsify_hyper(o);
    if (*verify)
      return cmd_verify(o, original, sparsifier, kind,
                        scale_flag >= 0 ? std::optional<double>(scale_flag)
                                        : std::nullopt);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cout << err.dump() << "\n";
    return 2;
  }
  return 2;
}

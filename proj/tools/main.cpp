// dpres: drive the library from the shell. Subcommands generate adversarial
// instances, run the directed-preserver reduction, build preservers, verify
// named structural claims, measure hopbounds and potentials, and audit
// potential drops.
//
// Contract: exit 0 on success, 1 when a verified invariant fails (the message
// is a minimal witness), 2 on usage or I/O errors (malformed JSON reports the
// byte position). Every run that writes an output also writes
// `<out>.manifest.json` — tool version, effective configuration, FNV-1a
// fingerprints of every input file — and reruns with an identical manifest
// produce byte-identical outputs.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpres/claims.hpp"
#include "dpres/cluster.hpp"
#include "dpres/evaluate.hpp"
#include "dpres/json_io.hpp"
#include "dpres/lbgen.hpp"
#include "dpres/path.hpp"
#include "dpres/preserver.hpp"
#include "dpres/reduction.hpp"
#include "dpres/shortest_paths.hpp"
#include "dpres/stats.hpp"
#include "dpres/types.hpp"

namespace {

using dpres::Json;

constexpr const char* kVersion = "0.1.0";

// Parallelism is pinned per run so manifests capture it; every operation in
// the library is currently sequential, so the value is recorded, not used.
int default_parallelism() {
  if (const char* env = std::getenv("DPRES_PARALLELISM")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

dpres::Rational parse_rational_flag(const std::string& s, const char* flag) {
  try {
    return dpres::parse_rational(s);
  } catch (const dpres::ArgumentError& e) {
    throw dpres::ArgumentError(std::string(flag) + ": " + e.what());
  }
}

dpres::Weight parse_weight_flag(const std::string& s, const char* flag) {
  try {
    return dpres::Weight(s);
  } catch (const std::runtime_error&) {
    throw dpres::ArgumentError(std::string(flag) + ": '" + s +
                               "' is not a decimal integer");
  }
}

// Collects the inputs a run touches and flushes result + manifest when done.
struct RunContext {
  std::string subcommand;
  Json config = Json::object();
  Json inputs = Json::object();
  std::string out;          // primary artifact path; "" prints to stdout
  std::string json_report;  // optional extra copy of manifest + result

  Json load(const std::string& path) {
    const std::string text = dpres::read_text_file(path);
    inputs[path] = dpres::fnv1a_hex(text);
    return dpres::parse_json(text);
  }

  Json manifest() const {
    return Json{{"tool", "dpres"},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"config", config},
                {"inputs", inputs}};
  }

  void finish(const Json& result) const {
    Json envelope = manifest();
    envelope["result"] = result;
    if (!out.empty()) {
      dpres::write_text_file(out, dpres::dump_json(result));
      dpres::write_text_file(out + ".manifest.json",
                             dpres::dump_json(manifest()));
    }
    if (!json_report.empty())
      dpres::write_text_file(json_report, dpres::dump_json(envelope));
    if (out.empty())
      std::cout << dpres::dump_json(envelope);
    else
      std::cout << subcommand << ": wrote " << out << "\n";
  }
};

dpres::Graph load_graph(RunContext& ctx, const std::string& path) {
  return dpres::graph_from_json(ctx.load(path));
}

std::vector<dpres::DemandPair> load_demands(RunContext& ctx,
                                            const std::string& path,
                                            std::size_t n) {
  Json j = ctx.load(path);
  // Accept either a bare [[s,t],...] array or a {"demands": [...]} object.
  if (j.is_object() && j.contains("demands")) j = j["demands"];
  return dpres::demands_from_json(j, n);
}

dpres::LowerBoundInstance load_instance(RunContext& ctx,
                                        const std::string& path) {
  return dpres::instance_from_json(ctx.load(path));
}

Json opt_weight_json(const std::optional<dpres::Weight>& w) {
  return w ? Json(w->str()) : Json(nullptr);
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

void cmd_gen(RunContext& ctx, const std::string& family, std::uint32_t k,
             std::uint32_t l, const std::string& alpha, std::uint32_t sqrt_n,
             std::uint32_t r, std::uint32_t c) {
  const dpres::Family fam = dpres::family_from_name(family);
  const dpres::Rational a = parse_rational_flag(alpha, "--alpha");
  dpres::LowerBoundInstance inst;
  switch (fam) {
    case dpres::Family::kPointLine:
      if (k == 0 || l == 0)
        throw dpres::ArgumentError("pointline needs --k and --l");
      ctx.config["k"] = k;
      ctx.config["l"] = l;
      ctx.config["alpha"] = alpha;
      inst = dpres::gen_pointline(k, l, a);
      break;
    case dpres::Family::kApproxHopset:
      if (sqrt_n == 0)
        throw dpres::ArgumentError("approx-hopset needs --sqrt-n");
      ctx.config["sqrt_n"] = sqrt_n;
      ctx.config["alpha"] = alpha;
      ctx.config["c"] = c;
      inst = dpres::gen_approx_hopset(sqrt_n, a, c);
      break;
    case dpres::Family::kShortcutLayered:
      if (r == 0) throw dpres::ArgumentError("shortcut needs --r");
      ctx.config["r"] = r;
      ctx.config["c"] = c;
      inst = dpres::gen_shortcut(r, c);
      break;
    case dpres::Family::kUnweightedHopset:
      if (r == 0) throw dpres::ArgumentError("unweighted-hopset needs --r");
      ctx.config["r"] = r;
      ctx.config["c"] = c;
      inst = dpres::gen_unweighted_hopset(r, c);
      break;
  }
  std::cout << family << ": " << inst.graph.node_count() << " nodes, "
            << inst.graph.edge_count() << " edges, "
            << inst.critical_paths.size() << " critical paths\n";
  ctx.finish(dpres::instance_to_json(inst));
}

// ---------------------------------------------------------------------------
// apsp-dag
// ---------------------------------------------------------------------------

void cmd_apsp_dag(RunContext& ctx, const std::string& graph_path) {
  const dpres::Graph g = load_graph(ctx, graph_path);
  const auto matrix = dpres::apsp_dag(g);
  ctx.finish(dpres::matrix_to_json(matrix));
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

void cmd_reduce(RunContext& ctx, const std::string& graph_path,
                const std::string& demands_path, const std::string& dag_out,
                const std::string& undirected_out) {
  const dpres::Graph g = load_graph(ctx, graph_path);
  const auto demands = load_demands(ctx, demands_path, g.node_count());
  const dpres::ReductionReport rep =
      dpres::reduce_directed_preserver(g, demands);
  Json result{{"n", rep.n},
              {"demands_total", rep.demands_total},
              {"demands_unreachable", rep.demands_unreachable},
              {"demands_non_unique", rep.demands_non_unique},
              {"demands_dropped_overlap", rep.demands_dropped_overlap},
              {"demands_kept", rep.demands_kept},
              {"preserver_edges", rep.preserver_edges},
              {"pivot_source_index", rep.pivot_source_index},
              {"pivot_edges", rep.pivot_edges},
              {"q_count", rep.q_count},
              {"dag_edges", rep.dag_edges},
              {"pivot_degree_sum", rep.pivot_degree_sum},
              {"empty", rep.empty}};
  if (!dag_out.empty()) {
    if (!rep.crossing)
      throw dpres::ArgumentError("--dag-out: the reduction produced no DAG");
    dpres::write_text_file(dag_out,
                           dpres::dump_json(dpres::graph_to_json(rep.crossing->dag)));
  }
  if (!undirected_out.empty()) {
    if (!rep.reweighted)
      throw dpres::ArgumentError(
          "--undirected-out: the reduction produced no reweighted graph");
    dpres::write_text_file(
        undirected_out,
        dpres::dump_json(dpres::graph_to_json(rep.reweighted->undirected)));
  }
  std::cout << "reduce: kept " << rep.demands_kept << "/" << rep.demands_total
            << " demands, preserver " << rep.preserver_edges << " edges, |Q| "
            << rep.q_count << ", DAG " << rep.dag_edges << " edges\n";
  ctx.finish(result);
}

// ---------------------------------------------------------------------------
// preserve
// ---------------------------------------------------------------------------

void cmd_preserve(RunContext& ctx, const std::string& mode,
                  const std::string& graph_path,
                  const std::string& demands_path, const std::string& alpha,
                  const std::vector<dpres::NodeId>& sources,
                  const std::string& min_dist, const std::string& phi,
                  const std::string& c1, const std::string& c2) {
  const dpres::Graph g = load_graph(ctx, graph_path);
  std::vector<dpres::DemandPair> demands;
  if (!demands_path.empty())
    demands = load_demands(ctx, demands_path, g.node_count());
  else if (mode != "d")
    throw dpres::ArgumentError("mode '" + mode + "' needs --demands");
  dpres::ClusterConfig ccfg;
  ccfg.c1 = parse_rational_flag(c1, "--c1");
  ccfg.c2 = parse_rational_flag(c2, "--c2");

  Json result{{"mode", mode}};
  if (mode == "clean") {
    const dpres::CleanResult res = dpres::clean_instance(g, demands);
    result["graph"] = dpres::graph_to_json(res.graph);
    result["demands"] = dpres::demands_to_json(res.demands);
    result["paths"] = res.system.paths.size();
  } else if (mode == "minimal") {
    const dpres::Rational a = parse_rational_flag(alpha, "--alpha");
    ctx.config["alpha"] = alpha;
    const dpres::Graph h = dpres::minimal_preserver(g, demands, a);
    result["graph"] = dpres::graph_to_json(h);
    result["edges"] = h.edge_count();
  } else if (mode == "sourcewise") {
    if (sources.empty())
      throw dpres::ArgumentError("sourcewise needs at least one --source");
    const dpres::SourcewiseResult res =
        dpres::sourcewise_preserver(g, sources, demands);
    result["graph"] = dpres::graph_to_json(res.preserver);
    result["edges"] = res.preserver.edge_count();
    result["sources"] = res.source_count;
    result["demands"] = res.demand_count;
    result["weak_diameter"] = opt_weight_json(res.weak_diameter);
    result["size_bound"] = opt_weight_json(res.size_bound);
  } else if (mode == "d") {
    if (min_dist.empty()) throw dpres::ArgumentError("mode d needs --min-dist");
    ctx.config["min_dist"] = min_dist;
    const dpres::Graph h =
        dpres::d_preserver(g, parse_weight_flag(min_dist, "--min-dist"));
    result["graph"] = dpres::graph_to_json(h);
    result["edges"] = h.edge_count();
  } else if (mode == "small-ellhat") {
    if (phi.empty())
      throw dpres::ArgumentError("mode small-ellhat needs --phi");
    ctx.config["phi"] = phi;
    const dpres::SmallEllhatResult res = dpres::small_ellhat_preserver(
        g, demands, parse_rational_flag(phi, "--phi"), ccfg);
    result["graph"] = dpres::graph_to_json(res.preserver);
    result["edges"] = res.preserver.edge_count();
    result["iterations"] = res.iterations;
    result["phi_gate_ok"] = res.phi_gate_ok;
    result["phi"] = dpres::rational_to_string(res.phi);
    result["size_scale"] = dpres::rational_to_string(res.size_scale);
  } else if (mode == "unweighted") {
    const dpres::UnweightedPreserverResult res =
        dpres::build_unweighted_preserver(g, demands, ccfg);
    result["graph"] = dpres::graph_to_json(res.preserver);
    result["edges"] = res.preserver.edge_count();
    Json buckets = Json::array();
    for (const auto& b : res.buckets)
      buckets.push_back(Json{{"index", b.index},
                             {"demands", b.demands},
                             {"ell_hat", dpres::rational_to_string(b.ell_hat)},
                             {"small_branch", b.small_branch}});
    result["buckets"] = std::move(buckets);
  } else if (mode == "cluster") {
    const dpres::PathSystem sys = dpres::make_tiebroken_system(g, demands);
    const auto res = dpres::find_dense_cluster(g, sys, ccfg);
    result["found"] = bool(res);
    if (res) {
      result["nodes"] = res->nodes;
      result["witness_demands"] = res->witness_demands.size();
      result["weak_diameter"] = opt_weight_json(res->weak_diameter);
      result["pivot"] = res->pivot.nodes();
      result["pivot_index"] = res->pivot_index;
      result["degree_floor"] = res->degree_floor;
    }
  } else {
    throw dpres::ArgumentError("unknown preserve mode '" + mode + "'");
  }
  ctx.config["c1"] = c1;
  ctx.config["c2"] = c2;
  if (result.contains("edges"))
    std::cout << "preserve " << mode << ": " << result["edges"]
              << " edges kept of " << g.edge_count() << "\n";
  ctx.finish(result);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

void cmd_verify(RunContext& ctx, const std::string& instance_path,
                const std::string& claim, const std::string& constant,
                std::size_t samples, std::size_t exhaustive_k,
                std::size_t sampled_k, std::uint64_t seed) {
  const dpres::LowerBoundInstance inst = load_instance(ctx, instance_path);
  dpres::ClaimOptions opts;
  opts.constant = parse_rational_flag(constant, "--constant");
  opts.samples = samples;
  opts.exhaustive_max_k = exhaustive_k;
  opts.sampled_max_k = sampled_k;
  opts.seed = seed;
  const dpres::ClaimReport rep = dpres::run_claim(claim, inst, opts);
  std::cout << "verify " << rep.claim << ": ok\n";
  ctx.finish(Json{{"claim", rep.claim}, {"ok", true}, {"details", rep.details}});
}

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------

void cmd_measure(RunContext& ctx, const std::string& mode,
                 const std::string& graph_path,
                 const std::string& instance_path,
                 const std::string& demands_path, const std::string& aug_path,
                 std::size_t folklore, const std::string& aug_out,
                 const std::string& alpha, std::uint64_t delta, bool no_table,
                 std::uint64_t seed) {
  const dpres::Rational a = parse_rational_flag(alpha, "--alpha");
  if (mode == "stats") {
    if (graph_path.empty() || demands_path.empty())
      throw dpres::ArgumentError("mode stats needs --graph and --demands");
    const dpres::Graph g = load_graph(ctx, graph_path);
    const auto demands = load_demands(ctx, demands_path, g.node_count());
    const dpres::PathSystem sys = dpres::make_tiebroken_system(g, demands);
    const dpres::PreserverStats st = dpres::compute_stats(g, sys);
    ctx.finish(Json{{"edge_count", st.edge_count},
                    {"ell", st.ell},
                    {"avg_degree", st.avg_degree},
                    {"ell_hat", dpres::rational_to_string(st.ell_hat)},
                    {"branching_events", st.branching_events}});
    return;
  }

  std::optional<dpres::LowerBoundInstance> inst;
  dpres::Graph g;
  if (!instance_path.empty()) {
    inst = load_instance(ctx, instance_path);
    g = inst->graph;
  } else if (!graph_path.empty()) {
    g = load_graph(ctx, graph_path);
  } else {
    throw dpres::ArgumentError("measure needs --graph or --instance");
  }

  dpres::AugmentationSet aug;
  if (!aug_path.empty()) {
    aug = dpres::augmentation_from_json(ctx.load(aug_path));
    dpres::validate_augmentation(g, aug);
  } else if (folklore > 0) {
    ctx.config["folklore"] = folklore;
    ctx.config["seed"] = seed;
    aug = dpres::folklore_hopset(g, folklore, seed);
  }
  if (!aug_out.empty())
    dpres::write_text_file(aug_out,
                           dpres::dump_json(dpres::augmentation_to_json(aug)));

  if (mode == "hopbound") {
    std::vector<dpres::DemandPair> pairs;
    const std::vector<dpres::DemandPair>* pairs_ptr = nullptr;
    if (!demands_path.empty()) {
      pairs = load_demands(ctx, demands_path, g.node_count());
      pairs_ptr = &pairs;
    } else if (inst) {
      pairs_ptr = &inst->demands;  // the instance's demand endpoints
    }
    const dpres::HopboundReport rep =
        dpres::measure_hopbound(g, aug, a, pairs_ptr);
    Json result = dpres::hopbound_report_to_json(rep);
    if (no_table) result.erase("table");
    std::cout << "hopbound: max " << rep.max_hops << " over "
              << rep.table.size() << " pairs\n";
    ctx.finish(result);
  } else if (mode == "potential") {
    if (!inst) throw dpres::ArgumentError("mode potential needs --instance");
    ctx.config["delta"] = delta;
    const dpres::PotentialReport rep = dpres::potential(*inst, delta, aug, a);
    std::cout << "potential: phi " << rep.phi << " (empty " << rep.phi_empty
              << ") over " << rep.paths << " paths\n";
    ctx.finish(dpres::potential_report_to_json(rep));
  } else {
    throw dpres::ArgumentError("unknown measure mode '" + mode + "'");
  }
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

void cmd_audit(RunContext& ctx, const std::string& instance_path,
               std::uint64_t delta, std::size_t per_gap,
               std::size_t exhaustive_cap, std::size_t cross_checks,
               std::size_t cross_check_cap, const std::string& alpha,
               std::uint64_t seed) {
  const dpres::LowerBoundInstance inst = load_instance(ctx, instance_path);
  dpres::AuditConfig cfg;
  cfg.delta = delta;
  cfg.per_gap_samples = per_gap;
  cfg.exhaustive_cap = exhaustive_cap;
  cfg.cross_checks = cross_checks;
  cfg.cross_check_node_cap = cross_check_cap;
  cfg.seed = seed;
  cfg.alpha = parse_rational_flag(alpha, "--alpha");
  const dpres::AuditReport rep = dpres::max_drop_audit(inst, cfg);
  std::cout << "audit: max drop " << rep.max_drop << " over "
            << rep.rows.size() << " candidates ("
            << (rep.exhaustive ? "exhaustive" : "sampled") << ")\n";
  ctx.finish(dpres::audit_report_to_json(rep));
  if (rep.within_delta_nonzero > 0) {
    for (const dpres::AuditRow& row : rep.rows)
      if (row.gap <= delta && row.drop > 0)
        throw dpres::VerifyError(
            "edge (" + std::to_string(row.tail) + "," +
            std::to_string(row.head) + ") spans " + std::to_string(row.gap) +
            " <= delta yet drops the potential by " +
            std::to_string(row.drop));
    throw dpres::VerifyError("a within-delta candidate dropped the potential");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distance preservers, reductions, and adversarial instances"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunContext ctx;
  ctx.config["parallelism"] = default_parallelism();
  app.add_option("--parallel", "worker count (default: DPRES_PARALLELISM or 1)")
      ->each([&ctx](const std::string& v) {
        ctx.config["parallelism"] = std::atoi(v.c_str());
      });

  auto add_common = [&ctx](CLI::App* sub) {
    sub->add_option("--out", ctx.out,
                    "write the result here (plus <out>.manifest.json)");
    sub->add_option("--json-report", ctx.json_report,
                    "also write manifest + result as one JSON document");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "generate an adversarial instance");
  std::string family;
  std::uint32_t k = 0, l = 0, sqrt_n = 0, r = 0, c = 1;
  std::string gen_alpha = "1";
  gen->add_option("--family", family,
                  "pointline | approx-hopset | shortcut | unweighted-hopset")
      ->required();
  gen->add_option("--k", k, "pointline: demands per line bundle");
  gen->add_option("--l", l, "pointline: line bundles");
  gen->add_option("--alpha", gen_alpha,
                  "stretch (rational, e.g. 3/2) for the weighted families");
  gen->add_option("--sqrt-n", sqrt_n, "approx-hopset: grid side (power of 2)");
  gen->add_option("--r", r, "shortcut / unweighted-hopset: radix (power of 2)");
  gen->add_option("--c", c, "compression / scaling factor");
  add_common(gen);
  gen->callback([&] {
    ctx.subcommand = "gen";
    ctx.config["family"] = family;
    cmd_gen(ctx, family, k, l, gen_alpha, sqrt_n, r, c);
  });

  // apsp-dag
  auto* apsp = app.add_subcommand(
      "apsp-dag", "all-pairs shortest distances of a weighted DAG");
  std::string apsp_graph;
  apsp->add_option("--graph", apsp_graph, "graph JSON file")->required();
  add_common(apsp);
  apsp->callback([&] {
    ctx.subcommand = "apsp-dag";
    cmd_apsp_dag(ctx, apsp_graph);
  });

  // reduce
  auto* red = app.add_subcommand(
      "reduce", "directed preserver -> undirected shortest-path reduction");
  std::string red_graph, red_demands, red_dag_out, red_undirected_out;
  red->add_option("--graph", red_graph, "directed graph JSON file")->required();
  red->add_option("--demands", red_demands, "demand pairs JSON file")
      ->required();
  red->add_option("--dag-out", red_dag_out, "write the induced DAG here");
  red->add_option("--undirected-out", red_undirected_out,
                  "write the reweighted undirected graph here");
  add_common(red);
  red->callback([&] {
    ctx.subcommand = "reduce";
    cmd_reduce(ctx, red_graph, red_demands, red_dag_out, red_undirected_out);
  });

  // preserve
  auto* pre = app.add_subcommand("preserve", "build a distance preserver");
  std::string pre_mode, pre_graph, pre_demands, pre_alpha = "1";
  std::string pre_min_dist, pre_phi, pre_c1 = "1", pre_c2 = "16";
  std::vector<dpres::NodeId> pre_sources;
  pre->add_option("--mode", pre_mode,
                  "clean | minimal | sourcewise | d | small-ellhat | "
                  "unweighted | cluster")
      ->required();
  pre->add_option("--graph", pre_graph, "graph JSON file")->required();
  pre->add_option("--demands", pre_demands, "demand pairs JSON file");
  pre->add_option("--alpha", pre_alpha, "stretch for minimal mode");
  pre->add_option("--source", pre_sources, "sourcewise: source node (repeat)");
  pre->add_option("--min-dist", pre_min_dist, "d mode: distance floor");
  pre->add_option("--phi", pre_phi, "small-ellhat: density threshold");
  pre->add_option("--c1", pre_c1, "cluster pruning threshold factor");
  pre->add_option("--c2", pre_c2, "cluster closeness threshold factor");
  add_common(pre);
  pre->callback([&] {
    ctx.subcommand = "preserve";
    ctx.config["mode"] = pre_mode;
    cmd_preserve(ctx, pre_mode, pre_graph, pre_demands, pre_alpha, pre_sources,
                 pre_min_dist, pre_phi, pre_c1, pre_c2);
  });

  // verify
  auto* ver = app.add_subcommand("verify", "check a named structural claim");
  std::string ver_instance, ver_claim, ver_constant = "0";
  std::size_t ver_samples = 1000, ver_exh_k = 3, ver_samp_k = 8;
  std::uint64_t ver_seed = 0;
  bool ver_list = false;
  ver->add_option("--instance", ver_instance, "instance JSON file");
  ver->add_option("--claim", ver_claim, "claim id (see --list)");
  ver->add_option("--constant", ver_constant,
                  "enforced bound constant; 0 measures without enforcing");
  ver->add_option("--samples", ver_samples, "samples per stratum");
  ver->add_option("--exhaustive-k", ver_exh_k,
                  "intersection subsets checked exhaustively up to this size");
  ver->add_option("--sampled-k", ver_samp_k,
                  "and by sampling up to this size");
  ver->add_option("--seed", ver_seed, "sampling seed");
  ver->add_flag("--list", ver_list, "print the claim ids and exit");
  add_common(ver);
  ver->callback([&] {
    if (ver_list) {
      for (const std::string& name : dpres::claim_names())
        std::cout << name << "\n";
      return;
    }
    if (ver_instance.empty() || ver_claim.empty())
      throw dpres::ArgumentError("verify needs --instance and --claim");
    ctx.subcommand = "verify";
    ctx.config["claim"] = ver_claim;
    ctx.config["constant"] = ver_constant;
    ctx.config["samples"] = ver_samples;
    ctx.config["exhaustive_k"] = ver_exh_k;
    ctx.config["sampled_k"] = ver_samp_k;
    ctx.config["seed"] = ver_seed;
    cmd_verify(ctx, ver_instance, ver_claim, ver_constant, ver_samples,
               ver_exh_k, ver_samp_k, ver_seed);
  });

  // measure
  auto* mea = app.add_subcommand(
      "measure", "hopbound / potential / path-system statistics");
  std::string mea_mode = "hopbound", mea_graph, mea_instance, mea_demands;
  std::string mea_aug, mea_aug_out, mea_alpha = "1";
  std::size_t mea_folklore = 0;
  std::uint64_t mea_delta = 0, mea_seed = 0;
  bool mea_no_table = false;
  mea->add_option("--mode", mea_mode, "hopbound | potential | stats");
  mea->add_option("--graph", mea_graph, "graph JSON file");
  mea->add_option("--instance", mea_instance, "instance JSON file");
  mea->add_option("--demands", mea_demands,
                  "pairs to measure (default: instance demands or all pairs)");
  mea->add_option("--aug", mea_aug, "augmentation JSON file (validated)");
  mea->add_option("--folklore", mea_folklore,
                  "build a folklore hopset on this many sampled nodes");
  mea->add_option("--aug-out", mea_aug_out, "write the augmentation used");
  mea->add_option("--alpha", mea_alpha, "stretch for the hopdist");
  mea->add_option("--delta", mea_delta, "potential: the E_Delta radius");
  mea->add_flag("--no-table", mea_no_table, "omit the per-pair table");
  mea->add_option("--seed", mea_seed, "folklore sampling seed");
  add_common(mea);
  mea->callback([&] {
    ctx.subcommand = "measure";
    ctx.config["mode"] = mea_mode;
    ctx.config["alpha"] = mea_alpha;
    cmd_measure(ctx, mea_mode, mea_graph, mea_instance, mea_demands, mea_aug,
                mea_folklore, mea_aug_out, mea_alpha, mea_delta, mea_no_table,
                mea_seed);
  });

  // audit
  auto* aud = app.add_subcommand(
      "audit", "bound the potential drop of any single extra edge");
  std::string aud_instance, aud_alpha = "1";
  std::uint64_t aud_delta = 1, aud_seed = 0;
  std::size_t aud_per_gap = 1000, aud_cap = 300000, aud_checks = 3,
              aud_check_cap = 6000;
  aud->add_option("--instance", aud_instance, "instance JSON file")
      ->required();
  aud->add_option("--delta", aud_delta, "the E_Delta radius")->required();
  aud->add_option("--per-gap-samples", aud_per_gap,
                  "sampled candidates per layer gap");
  aud->add_option("--exhaustive-cap", aud_cap,
                  "switch to sampling above this many candidate pairs");
  aud->add_option("--cross-checks", aud_checks,
                  "fast drops recomputed the slow way");
  aud->add_option("--cross-check-cap", aud_check_cap,
                  "skip cross checks above this node count");
  aud->add_option("--alpha", aud_alpha, "stretch for the weighted families");
  aud->add_option("--seed", aud_seed, "sampling seed");
  add_common(aud);
  aud->callback([&] {
    ctx.subcommand = "audit";
    ctx.config["delta"] = aud_delta;
    ctx.config["per_gap_samples"] = aud_per_gap;
    ctx.config["exhaustive_cap"] = aud_cap;
    ctx.config["cross_checks"] = aud_checks;
    ctx.config["cross_check_cap"] = aud_check_cap;
    ctx.config["alpha"] = aud_alpha;
    ctx.config["seed"] = aud_seed;
    cmd_audit(ctx, aud_instance, aud_delta, aud_per_gap, aud_cap, aud_checks,
              aud_check_cap, aud_alpha, aud_seed);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors are exit 2; --help stays 0
  } catch (const dpres::VerifyError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const Json::parse_error& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";  // has byte position
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

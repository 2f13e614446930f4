#include "cli.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "fpx/fparadox.h"
#include "manifest.hpp"

namespace fparadox_cli {

namespace {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(fpx_status status) {
  if (status != FPX_OK) throw DomainError(fpx_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dataset = std::unique_ptr<fpx_dataset, Deleter<fpx_dataset, fpx_dataset_free>>;
using HubAnalysis = std::unique_ptr<fpx_hub_analysis, Deleter<fpx_hub_analysis, fpx_hub_free>>;
using DegreeSpec = std::unique_ptr<fpx_degree_spec, Deleter<fpx_degree_spec, fpx_degree_spec_free>>;
using Graph = std::unique_ptr<fpx_graph, Deleter<fpx_graph, fpx_graph_free>>;
using Ensemble = std::unique_ptr<fpx_ensemble, Deleter<fpx_ensemble, fpx_ensemble_free>>;

std::string fmt(double v) {
  if (v != v) return {};
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const char* method_name(fpx_test_method m) {
  switch (m) {
    case FPX_TEST_EXACT: return "exact";
    case FPX_TEST_PERMUTATION: return "permutation";
    case FPX_TEST_NORMAL_APPROX: return "normal_approx";
  }
  return "unknown";
}

Dataset load_dataset(const std::string& path) {
  fpx_dataset* raw = nullptr;
  check(fpx_dataset_read_csv(path.c_str(), &raw));
  return Dataset(raw);
}

struct DegreeOptions {
  double mode = 100;
  double sigma = 0.8;
  std::string histogram;
  std::int64_t min_degree = 1;

  void bind(CLI::App* app) {
    app->add_option("--degree-mode", mode, "peak of the lognormal degree density")->capture_default_str();
    app->add_option("--degree-sigma", sigma, "lognormal shape parameter")->capture_default_str();
    app->add_option("--degree-hist", histogram, "degree,probability CSV; overrides the lognormal")
        ->check(CLI::ExistingFile);
    app->add_option("--min-degree", min_degree, "degrees below this are resampled")->capture_default_str();
  }

  DegreeSpec make() const {
    fpx_degree_spec* raw = nullptr;
    if (!histogram.empty())
      check(fpx_degree_spec_read_histogram(histogram.c_str(), &raw));
    else
      check(fpx_degree_spec_lognormal_mode(mode, sigma, &raw));
    return DegreeSpec(raw);
  }
};

struct Options {
  std::string in, out, out_dir, graph_path, manifest, preset;
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  // stats / zipf
  int max_rank = 15, bins = 10;
  bool log10_degree = false;
  std::size_t min_dyads = 1;

  // hub
  std::size_t min_available = 5, perms = 1000, trend_perms = 10000;
  double coverage = 0.95;

  // synth
  std::size_t egos = 1000, alters = 15;
  double zipf = 1.2, base_volume = 100, coupling = 0, unavailable = 0;
  DegreeOptions degrees;

  // graph
  std::size_t nodes = 0;
  bool no_simplify = false;

  // simulate
  double beta = 0.01;
  std::vector<double> p_mix;
  std::size_t steps = 20, replicates = 100;
  std::int64_t seed_node = -1;
  bool no_clip = false;
};

struct Outcome {
  std::string manifest_path;  // empty: nothing written
  std::vector<std::string> inputs;
  bool seeded = false;
};

Outcome run_validate(const Options& o) {
  auto ds = load_dataset(o.in);
  fpx_validation_summary s{};
  check(fpx_dataset_validation(ds.get(), &s));
  std::cout << "egos=" << s.n_egos << " dyads=" << s.n_dyads << " dyads_with_degree=" << s.n_dyads_with_degree
            << " violations=" << s.n_violations << '\n';
  for (std::size_t i = 0; i < s.n_violations; ++i) {
    const char *ego = nullptr, *what = nullptr;
    check(fpx_dataset_violation(ds.get(), i, &ego, &what));
    std::cerr << "fparadox: violation: ego " << ego << ": " << what << '\n';
  }
  Outcome outcome{{}, {o.in}, false};
  if (!o.out.empty()) {
    check(fpx_dataset_write_violations_csv(ds.get(), o.out.c_str()));
    outcome.manifest_path = o.out + ".manifest";
  }
  if (s.n_violations > 0) throw DomainError(std::to_string(s.n_violations) + " validation violation(s)");
  return outcome;
}

Outcome run_stats(const Options& o) {
  auto ds = load_dataset(o.in);
  std::filesystem::create_directories(o.out_dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(o.out_dir) / name).string(); };

  check(fpx_write_rank_summary_csv(ds.get(), o.max_rank, path("rank_summary.csv").c_str()));
  check(fpx_write_decile_curves_csv(ds.get(), o.log10_degree, o.bins, path("decile_curves.csv").c_str()));

  std::size_t n_ranks = 0;
  check(fpx_dataset_dyads_per_rank(ds.get(), 0, nullptr, 0, &n_ranks));
  std::vector<std::size_t> all(n_ranks), available(n_ranks);
  check(fpx_dataset_dyads_per_rank(ds.get(), 0, all.data(), n_ranks, &n_ranks));
  check(fpx_dataset_dyads_per_rank(ds.get(), 1, available.data(), n_ranks, &n_ranks));
  {
    std::ofstream out(path("dyads_per_rank.csv"), std::ios::binary);
    out << "rank,n_dyads,n_available\n";
    for (std::size_t r = 0; r < n_ranks; ++r) out << r + 1 << ',' << all[r] << ',' << available[r] << '\n';
    if (!out) throw DomainError("cannot write dyads_per_rank.csv");
  }

  double prev_mean = 0, prev_median = 0;
  check(fpx_paradox_prevalence(ds.get(), FPX_AGG_MEAN, &prev_mean));
  check(fpx_paradox_prevalence(ds.get(), FPX_AGG_MEDIAN, &prev_median));
  fpx_rank1_comparison r1{};
  check(fpx_rank1_comparison_compute(ds.get(), &r1));
  {
    std::ofstream out(path("paradox.csv"), std::ios::binary);
    out << "metric,value\n"
        << "prevalence_mean," << fmt(prev_mean) << '\n'
        << "prevalence_median," << fmt(prev_median) << '\n'
        << "rank1_pairs," << r1.n_pairs << '\n'
        << "rank1_fraction_lower," << fmt(r1.fraction_lower) << '\n'
        << "ego_mean," << fmt(r1.ego_mean) << '\n'
        << "alter1_mean," << fmt(r1.alter1_mean) << '\n'
        << "ego_median," << fmt(r1.ego_median) << '\n'
        << "alter1_median," << fmt(r1.alter1_median) << '\n';
    if (r1.has_wilcoxon)
      out << "wilcoxon_statistic," << fmt(r1.wilcoxon.statistic) << '\n'
          << "wilcoxon_p," << fmt(r1.wilcoxon.p_value) << '\n'
          << "wilcoxon_n," << r1.wilcoxon.n << '\n'
          << "wilcoxon_method," << method_name(r1.wilcoxon.method) << '\n';
    if (!out) throw DomainError("cannot write paradox.csv");
  }
  std::cout << "prevalence_mean=" << fmt(prev_mean) << " prevalence_median=" << fmt(prev_median)
            << " rank1_fraction_lower=" << fmt(r1.fraction_lower) << '\n';
  return {path("stats.manifest"), {o.in}, false};
}

Outcome run_zipf(const Options& o) {
  auto ds = load_dataset(o.in);
  fpx_zipf_fit fit{};
  check(fpx_zipf_fit_compute(ds.get(), o.min_dyads, &fit));
  check(fpx_write_zipf_csv(&fit, o.out.c_str()));
  std::cout << "exponent=" << fmt(fit.exponent) << " r_squared=" << fmt(fit.r_squared)
            << " ranks_used=" << fit.ranks_used << '\n';
  return {o.out + ".manifest", {o.in}, false};
}

Outcome run_hub(const Options& o) {
  auto ds = load_dataset(o.in);
  fpx_hub_options opts{};
  fpx_hub_options_default(&opts);
  opts.min_available = o.min_available;
  opts.n_perm = o.perms;
  opts.seed = o.seed;
  opts.coverage = o.coverage;
  opts.threads = o.threads;
  fpx_hub_analysis* raw = nullptr;
  check(fpx_hub_analyze(ds.get(), &opts, &raw));
  HubAnalysis hub(raw);
  check(fpx_hub_write_csv(hub.get(), o.out.c_str()));
  fpx_test_result trend{};
  check(fpx_hub_trend_test(hub.get(), o.trend_perms, o.seed, &trend));
  std::cout << "eligible_egos=" << fpx_hub_eligible_egos(hub.get()) << " trend_rho=" << fmt(trend.statistic)
            << " trend_p=" << fmt(trend.p_value) << '\n';
  return {o.out + ".manifest", {o.in}, true};
}

Outcome run_synth(const Options& o) {
  auto spec = o.degrees.make();
  fpx_synth_params params{};
  fpx_synth_params_default(&params);
  params.n_egos = o.egos;
  params.alters_per_ego = o.alters;
  params.zipf_exponent = o.zipf;
  params.base_volume = o.base_volume;
  params.coupling = o.coupling;
  params.degree_spec = spec.get();
  params.min_degree = o.degrees.min_degree;
  params.fraction_unavailable = o.unavailable;
  fpx_dataset* raw = nullptr;
  check(fpx_synth_dataset(&params, o.seed, &raw));
  Dataset ds(raw);
  check(fpx_dataset_write_csv(ds.get(), o.out.c_str()));
  Outcome outcome{o.out + ".manifest", {}, true};
  if (!o.degrees.histogram.empty()) outcome.inputs.push_back(o.degrees.histogram);
  return outcome;
}

Outcome run_graph(const Options& o) {
  DegreeSpec spec;
  std::size_t n = o.nodes, target = 0;
  std::int64_t min_degree = o.degrees.min_degree;
  if (!o.preset.empty()) {
    fpx_degree_spec* raw = nullptr;
    check(fpx_degree_spec_paper_scale(&raw, &n, &min_degree, &target));
    spec.reset(raw);
  } else {
    if (n < 2) throw CLI::ValidationError("--nodes", "needs --nodes >= 2 or --preset");
    spec = o.degrees.make();
  }
  std::vector<std::int64_t> degrees(n);
  check(fpx_sample_degree_sequence(spec.get(), n, min_degree, o.seed, degrees.data()));
  fpx_graph* raw = nullptr;
  check(fpx_graph_configuration(degrees.data(), n, o.seed, o.no_simplify ? 0 : 1, &raw));
  Graph graph(raw);
  check(fpx_graph_write_edge_list(graph.get(), o.out.c_str()));
  std::int64_t stubs = 0;
  for (auto k : degrees) stubs += k;
  std::cout << "nodes=" << fpx_graph_node_count(graph.get()) << " requested_edges=" << stubs / 2
            << " realized_edges=" << fpx_graph_edge_count(graph.get());
  if (target) std::cout << " target_edges=" << target;
  std::cout << '\n';
  Outcome outcome{o.out + ".manifest", {}, true};
  if (o.preset.empty() && !o.degrees.histogram.empty()) outcome.inputs.push_back(o.degrees.histogram);
  return outcome;
}

Outcome run_simulate(const Options& o) {
  fpx_graph* raw = nullptr;
  check(fpx_graph_read_edge_list(o.graph_path.c_str(), &raw));
  Graph graph(raw);
  std::vector<Ensemble> ensembles;
  std::vector<const fpx_ensemble*> views;
  for (const double p : o.p_mix) {
    fpx_outbreak_config config{};
    fpx_outbreak_config_default(&config);
    config.beta = o.beta;
    config.p_mix = p;
    config.steps = o.steps;
    config.replicates = o.replicates;
    config.seed_node = o.seed_node;
    config.master_seed = o.seed;
    config.clip = o.no_clip ? 0 : 1;
    fpx_ensemble* e = nullptr;
    check(fpx_run_ensemble(graph.get(), &config, o.threads, &e));
    ensembles.emplace_back(e);
    views.push_back(e);
    fpx_ensemble_step last{};
    check(fpx_ensemble_step_get(e, fpx_ensemble_step_count(e) - 1, &last));
    std::cout << "p=" << fmt(p) << " final_mean_total=" << fmt(last.mean_total)
              << " clipped_attempts=" << fpx_ensemble_clipped_attempts(e) << '\n';
  }
  check(fpx_write_epidemic_csv(views.data(), views.size(), o.out.c_str()));
  return {o.out + ".manifest", {o.graph_path}, true};
}

Outcome run_report(const Options& o) {
  std::vector<const char*> paths;
  for (const auto& p : o.inputs) paths.push_back(p.c_str());
  check(fpx_write_report(paths.data(), paths.size(), o.out.c_str()));
  return {o.out + ".manifest", o.inputs, false};
}

std::string option_key(const CLI::Option* opt) {
  std::string name = opt->get_name();
  while (!name.empty() && name.front() == '-') name.erase(0, 1);
  return name;
}

}  // namespace

int execute(const std::vector<std::string>& args) {
  CLI::App app{"Friendship-paradox statistics and contact-volume spreading simulations", "fparadox"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fpx_version());
  Options o;

  auto* validate = app.add_subcommand("validate", "check a dyad CSV against the data model");
  validate->add_option("--in", o.in, "dyad CSV")->required()->check(CLI::ExistingFile);
  validate->add_option("--out", o.out, "write violations as CSV");

  auto* stats = app.add_subcommand("stats", "paradox prevalence, rank summaries and decile curves");
  stats->add_option("--in", o.in, "dyad CSV")->required()->check(CLI::ExistingFile);
  stats->add_option("--out-dir", o.out_dir, "directory for the output CSVs")->required();
  stats->add_option("--max-rank", o.max_rank)->capture_default_str()->check(CLI::PositiveNumber);
  stats->add_option("--bins", o.bins, "contact-volume bins per decile")->capture_default_str();
  stats->add_flag("--log10-degree", o.log10_degree, "average log10 alter outdegree in decile curves");

  auto* zipf = app.add_subcommand("zipf", "fit contact volume against alter rank");
  zipf->add_option("--in", o.in, "dyad CSV")->required()->check(CLI::ExistingFile);
  zipf->add_option("--min-dyads", o.min_dyads, "ranks with fewer dyads are skipped")->capture_default_str();
  zipf->add_option("--out", o.out, "zipf.csv")->required();

  auto* hub = app.add_subcommand("hub", "hub-alter proportions with the permutation null band");
  hub->add_option("--in", o.in, "dyad CSV")->required()->check(CLI::ExistingFile);
  hub->add_option("--min-available", o.min_available)->capture_default_str();
  hub->add_option("--perms", o.perms, "null permutations")->capture_default_str();
  hub->add_option("--coverage", o.coverage, "central mass of the null band")->capture_default_str();
  hub->add_option("--trend-perms", o.trend_perms, "permutations for the trend p-value")->capture_default_str();
  hub->add_option("--seed", o.seed)->required();
  hub->add_option("--threads", o.threads, "0 = all cores; output is unaffected")->capture_default_str();
  hub->add_option("--out", o.out, "hub_prop.csv")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic dyad CSV");
  synth->add_option("--egos", o.egos)->capture_default_str();
  synth->add_option("--alters", o.alters, "alters per ego")->capture_default_str();
  synth->add_option("--zipf", o.zipf, "contact-volume exponent")->capture_default_str();
  synth->add_option("--base-volume", o.base_volume, "rank-1 contact volume")->capture_default_str();
  synth->add_option("--coupling", o.coupling, "probability an ego's alters are degree-sorted")->capture_default_str();
  synth->add_option("--unavailable", o.unavailable, "probability an alter outdegree is masked")->capture_default_str();
  o.degrees.bind(synth);
  synth->add_option("--seed", o.seed)->required();
  synth->add_option("--out", o.out, "dyad CSV")->required();

  auto* graph = app.add_subcommand("graph", "sample a configuration-model graph");
  auto* nodes = graph->add_option("--nodes", o.nodes);
  graph->add_option("--preset", o.preset, "paper-scale: 88,137 nodes, ~8.77M edges")
      ->check(CLI::IsMember({"paper-scale"}))
      ->excludes(nodes);
  o.degrees.bind(graph);
  graph->add_flag("--no-simplify", o.no_simplify, "keep self-loops and parallel edges");
  graph->add_option("--seed", o.seed)->required();
  graph->add_option("--out", o.out, "edge list")->required();

  auto* simulate = app.add_subcommand("simulate", "SI outbreaks under uniform and rank-dependent transmission");
  simulate->add_option("--graph", o.graph_path, "edge list")->required()->check(CLI::ExistingFile);
  simulate->add_option("--beta", o.beta)->capture_default_str();
  simulate->add_option("--p", o.p_mix, "rank-regime probability; repeat for several")->required();
  simulate->add_option("--steps", o.steps)->capture_default_str();
  simulate->add_option("--replicates", o.replicates)->capture_default_str();
  simulate->add_option("--seed-node", o.seed_node, "fixed initial node; default random per replicate");
  simulate->add_flag("--no-clip", o.no_clip, "do not cap rank probabilities at 1");
  simulate->add_option("--seed", o.seed)->required();
  simulate->add_option("--threads", o.threads, "0 = all cores; output is unaffected")->capture_default_str();
  simulate->add_option("--out", o.out, "epidemic.csv")->required();

  auto* report = app.add_subcommand("report", "stack existing CSVs into one long table");
  report->add_option("--in", o.inputs, "input CSVs")->required()->check(CLI::ExistingFile);
  report->add_option("--out", o.out)->required();

  auto* replay = app.add_subcommand("replay", "re-execute a run from its manifest");
  replay->add_option("manifest", o.manifest)->required()->check(CLI::ExistingFile);

  std::vector<std::string> argv_storage{"fparadox"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fparadox: usage error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (chosen == replay) {
      const auto manifest = read_manifest(o.manifest);
      for (const auto& [path, digest] : manifest.input_digests)
        if (sha256_file(path) != digest) throw DomainError("input changed since the manifest was written: " + path);
      return execute(manifest.argv);
    }

    Outcome outcome;
    if (chosen == validate) outcome = run_validate(o);
    else if (chosen == stats) outcome = run_stats(o);
    else if (chosen == zipf) outcome = run_zipf(o);
    else if (chosen == hub) outcome = run_hub(o);
    else if (chosen == synth) outcome = run_synth(o);
    else if (chosen == graph) outcome = run_graph(o);
    else if (chosen == simulate) outcome = run_simulate(o);
    else if (chosen == report) outcome = run_report(o);

    if (!outcome.manifest_path.empty()) {
      RunManifest m;
      m.command = chosen->get_name();
      m.tool_version = fpx_version();
      if (outcome.seeded) m.master_seed = o.seed;
      for (const auto* opt : chosen->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ";") + r;
        m.parameters.emplace_back(option_key(opt), joined);
      }
      for (const auto& in : outcome.inputs) m.input_digests.emplace_back(in, sha256_file(in));
      m.argv = args;
      write_manifest(outcome.manifest_path, m);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "fparadox: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fparadox: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fparadox_cli

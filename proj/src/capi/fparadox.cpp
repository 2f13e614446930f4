#include "fpx/fparadox.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "fpx/csv.hpp"
#include "fpx/ego_model.hpp"
#include "fpx/error.hpp"
#include "fpx/generators.hpp"
#include "fpx/hub_analysis.hpp"
#include "fpx/paradox_stats.hpp"
#include "fpx/report.hpp"
#include "fpx/si_sim.hpp"

#ifndef FPX_VERSION
#define FPX_VERSION "0.0.0"
#endif

struct fpx_dataset {
  fpx::EgoDataset data;
  fpx::ValidationReport report;
};

struct fpx_hub_analysis {
  fpx::HubProportionCurve curve;
  fpx::NullBand band;
};

struct fpx_degree_spec {
  fpx::DegreeSpec spec;
};

struct fpx_graph {
  fpx::Graph graph;
};

struct fpx_ensemble {
  fpx::EnsembleResult result;
};

namespace {

thread_local std::string last_error;

fpx_status status_of(fpx::ErrorKind kind) {
  switch (kind) {
    case fpx::ErrorKind::invalid_argument: return FPX_ERR_INVALID_ARGUMENT;
    case fpx::ErrorKind::parse: return FPX_ERR_PARSE;
    case fpx::ErrorKind::validation: return FPX_ERR_VALIDATION;
    case fpx::ErrorKind::empty_result: return FPX_ERR_EMPTY_RESULT;
    case fpx::ErrorKind::degenerate: return FPX_ERR_DEGENERATE;
    case fpx::ErrorKind::io: return FPX_ERR_IO;
  }
  return FPX_ERR_INTERNAL;
}

template <class Fn>
fpx_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return FPX_OK;
  } catch (const fpx::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return FPX_ERR_INTERNAL;
}

template <class... Ptrs>
void need(const char* what, const Ptrs*... ptrs) {
  if (((ptrs == nullptr) || ...)) fpx::fail(fpx::ErrorKind::invalid_argument, std::string(what) + ": null argument");
}

fpx_test_result to_c(const fpx::TestResult& r) {
  fpx_test_method m = FPX_TEST_EXACT;
  if (r.method == fpx::TestMethod::permutation) m = FPX_TEST_PERMUTATION;
  if (r.method == fpx::TestMethod::normal_approx) m = FPX_TEST_NORMAL_APPROX;
  return {r.statistic, r.p_value, r.n, m};
}

fpx_dataset* wrap(fpx::ParsedDataset parsed) {
  return new fpx_dataset{std::move(parsed.dataset), std::move(parsed.report)};
}

std::vector<std::pair<double, double>> zip(const double* x, const double* y, size_t n) {
  std::vector<std::pair<double, double>> pairs(n);
  for (size_t i = 0; i < n; ++i) pairs[i] = {x[i], y[i]};
  return pairs;
}

fpx::OutbreakConfig to_cpp(const fpx_outbreak_config& c) {
  fpx::OutbreakConfig out;
  out.beta = c.beta;
  out.p_mix = c.p_mix;
  out.steps = c.steps;
  out.replicates = c.replicates;
  if (c.seed_node >= 0) {
    if (c.seed_node > static_cast<int64_t>(std::numeric_limits<fpx::Node>::max()))
      fpx::fail(fpx::ErrorKind::invalid_argument, "seed node out of range");
    out.seed_node = static_cast<fpx::Node>(c.seed_node);
  }
  out.master_seed = c.master_seed;
  out.clip = c.clip != 0;
  return out;
}

}  // namespace

extern "C" {

const char* fpx_version(void) { return FPX_VERSION; }

const char* fpx_last_error(void) { return last_error.c_str(); }

fpx_status fpx_dataset_read_csv(const char* path, fpx_dataset** out) {
  return guarded([&] {
    need("fpx_dataset_read_csv", path, out);
    *out = wrap(fpx::read_dyad_csv(path));
  });
}

fpx_status fpx_dataset_parse_csv(const char* text, size_t length, fpx_dataset** out) {
  return guarded([&] {
    need("fpx_dataset_parse_csv", text, out);
    std::istringstream in(std::string(text, length));
    *out = wrap(fpx::parse_dyad_csv(in));
  });
}

fpx_status fpx_dataset_write_csv(const fpx_dataset* dataset, const char* path) {
  return guarded([&] {
    need("fpx_dataset_write_csv", dataset, path);
    fpx::write_dyad_csv(std::string(path), dataset->data);
  });
}

void fpx_dataset_free(fpx_dataset* dataset) { delete dataset; }

fpx_status fpx_dataset_validation(const fpx_dataset* dataset, fpx_validation_summary* out) {
  return guarded([&] {
    need("fpx_dataset_validation", dataset, out);
    const auto& r = dataset->report;
    *out = {r.n_egos, r.n_dyads, r.n_dyads_with_degree, r.violations.size()};
  });
}

fpx_status fpx_dataset_violation(const fpx_dataset* dataset, size_t index, const char** ego_id,
                                 const char** description) {
  return guarded([&] {
    need("fpx_dataset_violation", dataset, ego_id, description);
    const auto& v = dataset->report.violations;
    fpx::require(index < v.size(), "violation index out of range");
    *ego_id = v[index].ego_id.c_str();
    *description = v[index].description.c_str();
  });
}

fpx_status fpx_dataset_write_violations_csv(const fpx_dataset* dataset, const char* path) {
  return guarded([&] {
    need("fpx_dataset_write_violations_csv", dataset, path);
    auto out = fpx::csv::open_out(path);
    out << "ego_id,description\n";
    for (const auto& v : dataset->report.violations) out << v.ego_id << ',' << v.description << '\n';
    if (!out) fpx::fail(fpx::ErrorKind::io, std::string("write failed: ") + path);
  });
}

fpx_status fpx_dataset_dyads_per_rank(const fpx_dataset* dataset, int only_available, size_t* counts,
                                      size_t capacity, size_t* n_ranks) {
  return guarded([&] {
    need("fpx_dataset_dyads_per_rank", dataset, n_ranks);
    if (capacity > 0) need("fpx_dataset_dyads_per_rank", counts);
    const auto rows = fpx::dyads_per_rank(dataset->data, only_available != 0);
    *n_ranks = rows.size();
    for (size_t i = 0; i < rows.size() && i < capacity; ++i) counts[i] = rows[i].count;
  });
}

fpx_status fpx_paradox_prevalence(const fpx_dataset* dataset, fpx_aggregator aggregator, double* out) {
  return guarded([&] {
    need("fpx_paradox_prevalence", dataset, out);
    fpx::require(aggregator == FPX_AGG_MEAN || aggregator == FPX_AGG_MEDIAN, "unknown aggregator");
    *out = fpx::paradox_prevalence(dataset->data,
                                   aggregator == FPX_AGG_MEAN ? fpx::Aggregator::mean : fpx::Aggregator::median);
  });
}

fpx_status fpx_rank1_comparison_compute(const fpx_dataset* dataset, fpx_rank1_comparison* out) {
  return guarded([&] {
    need("fpx_rank1_comparison_compute", dataset, out);
    const auto r = fpx::rank1_comparison(dataset->data);
    *out = {r.n_pairs, r.fraction_lower, r.ego_mean, r.alter1_mean, r.ego_median, r.alter1_median,
            r.wilcoxon.has_value() ? 1 : 0, r.wilcoxon ? to_c(*r.wilcoxon) : fpx_test_result{}};
  });
}

fpx_status fpx_write_rank_summary_csv(const fpx_dataset* dataset, int max_rank, const char* path) {
  return guarded([&] {
    need("fpx_write_rank_summary_csv", dataset, path);
    fpx::write_rank_summary_csv(path, fpx::rank_degree_summary(dataset->data, max_rank));
  });
}

fpx_status fpx_write_decile_curves_csv(const fpx_dataset* dataset, int log10_degree, int n_bins, const char* path) {
  return guarded([&] {
    need("fpx_write_decile_curves_csv", dataset, path);
    fpx::write_decile_curves_csv(path, fpx::decile_contact_curves(dataset->data, log10_degree != 0, n_bins));
  });
}

fpx_status fpx_zipf_fit_compute(const fpx_dataset* dataset, size_t min_dyads, fpx_zipf_fit* out) {
  return guarded([&] {
    need("fpx_zipf_fit_compute", dataset, out);
    const auto f = fpx::zipf_fit(dataset->data, min_dyads);
    *out = {f.exponent, f.log_prefactor, f.r_squared, f.ranks_used};
  });
}

fpx_status fpx_write_zipf_csv(const fpx_zipf_fit* fit, const char* path) {
  return guarded([&] {
    need("fpx_write_zipf_csv", fit, path);
    fpx::write_zipf_csv(path, {fit->exponent, fit->log_prefactor, fit->r_squared, fit->ranks_used});
  });
}

fpx_status fpx_wilcoxon_signed_rank(const double* x, const double* y, size_t n, fpx_test_result* out) {
  return guarded([&] {
    need("fpx_wilcoxon_signed_rank", out);
    if (n > 0) need("fpx_wilcoxon_signed_rank", x, y);
    *out = to_c(fpx::wilcoxon_signed_rank(zip(x, y, n)));
  });
}

fpx_status fpx_spearman(const double* x, const double* y, size_t n, size_t n_perm, uint64_t seed,
                        fpx_test_result* out) {
  return guarded([&] {
    need("fpx_spearman", out);
    if (n > 0) need("fpx_spearman", x, y);
    *out = to_c(fpx::spearman({x, n}, {y, n}, n_perm, seed));
  });
}

void fpx_hub_options_default(fpx_hub_options* out) {
  if (!out) return;
  const fpx::NullOptions d;
  *out = {d.min_available, d.n_perm, d.seed, d.coverage, d.threads};
}

fpx_status fpx_hub_analyze(const fpx_dataset* dataset, const fpx_hub_options* options, fpx_hub_analysis** out) {
  return guarded([&] {
    need("fpx_hub_analyze", dataset, options, out);
    fpx::NullOptions opts;
    opts.min_available = options->min_available;
    opts.n_perm = options->n_perm;
    opts.seed = options->seed;
    opts.coverage = options->coverage;
    opts.threads = options->threads;
    auto curve = fpx::hub_proportion_by_rank(dataset->data, opts.min_available);
    auto band = fpx::permutation_null_band(dataset->data, opts);
    *out = new fpx_hub_analysis{std::move(curve), std::move(band)};
  });
}

size_t fpx_hub_rank_count(const fpx_hub_analysis* hub) { return hub ? hub->curve.ranks.size() : 0; }

size_t fpx_hub_eligible_egos(const fpx_hub_analysis* hub) { return hub ? hub->curve.n_eligible : 0; }

fpx_status fpx_hub_row_get(const fpx_hub_analysis* hub, size_t index, fpx_hub_row* out) {
  return guarded([&] {
    need("fpx_hub_row_get", hub, out);
    fpx::require(index < hub->curve.ranks.size(), "hub row index out of range");
    const auto& c = hub->curve.ranks[index];
    const auto& b = hub->band.ranks[index];
    *out = {c.rank, c.n_dyads, c.n_hub, c.proportion, b.mean, b.lo, b.hi};
  });
}

fpx_status fpx_hub_trend_test(const fpx_hub_analysis* hub, size_t n_perm, uint64_t seed, fpx_test_result* out) {
  return guarded([&] {
    need("fpx_hub_trend_test", hub, out);
    *out = to_c(fpx::hub_trend_test(hub->curve, n_perm, seed));
  });
}

fpx_status fpx_hub_write_csv(const fpx_hub_analysis* hub, const char* path) {
  return guarded([&] {
    need("fpx_hub_write_csv", hub, path);
    fpx::write_hub_csv(path, hub->curve, hub->band);
  });
}

void fpx_hub_free(fpx_hub_analysis* hub) { delete hub; }

fpx_status fpx_degree_spec_lognormal(double mu, double sigma, fpx_degree_spec** out) {
  return guarded([&] {
    need("fpx_degree_spec_lognormal", out);
    fpx::require(std::isfinite(mu) && sigma > 0 && std::isfinite(sigma), "lognormal needs finite mu and sigma > 0");
    *out = new fpx_degree_spec{fpx::LognormalDegrees{mu, sigma}};
  });
}

fpx_status fpx_degree_spec_lognormal_mode(double mode, double sigma, fpx_degree_spec** out) {
  return guarded([&] {
    need("fpx_degree_spec_lognormal_mode", out);
    *out = new fpx_degree_spec{fpx::LognormalDegrees::from_mode(mode, sigma)};
  });
}

fpx_status fpx_degree_spec_read_histogram(const char* path, fpx_degree_spec** out) {
  return guarded([&] {
    need("fpx_degree_spec_read_histogram", path, out);
    *out = new fpx_degree_spec{fpx::read_degree_histogram(path)};
  });
}

fpx_status fpx_degree_spec_paper_scale(fpx_degree_spec** out, size_t* n_nodes, int64_t* min_degree,
                                       size_t* target_edges) {
  return guarded([&] {
    need("fpx_degree_spec_paper_scale", out);
    auto preset = fpx::paper_scale_preset();
    if (n_nodes) *n_nodes = preset.n_nodes;
    if (min_degree) *min_degree = preset.min_degree;
    if (target_edges) *target_edges = preset.target_edges;
    *out = new fpx_degree_spec{std::move(preset.spec)};
  });
}

void fpx_degree_spec_free(fpx_degree_spec* spec) { delete spec; }

fpx_status fpx_sample_degree_sequence(const fpx_degree_spec* spec, size_t n, int64_t min_degree, uint64_t seed,
                                      int64_t* out_degrees) {
  return guarded([&] {
    need("fpx_sample_degree_sequence", spec, out_degrees);
    const auto degrees = fpx::sample_degree_sequence(spec->spec, n, min_degree, seed);
    std::copy(degrees.begin(), degrees.end(), out_degrees);
  });
}

fpx_status fpx_graph_configuration(const int64_t* degrees, size_t n, uint64_t seed, int simplify, fpx_graph** out) {
  return guarded([&] {
    need("fpx_graph_configuration", out);
    if (n > 0) need("fpx_graph_configuration", degrees);
    *out = new fpx_graph{fpx::configuration_graph({degrees, n}, seed, simplify != 0)};
  });
}

fpx_status fpx_graph_read_edge_list(const char* path, fpx_graph** out) {
  return guarded([&] {
    need("fpx_graph_read_edge_list", path, out);
    *out = new fpx_graph{fpx::read_edge_list(path)};
  });
}

fpx_status fpx_graph_write_edge_list(const fpx_graph* graph, const char* path) {
  return guarded([&] {
    need("fpx_graph_write_edge_list", graph, path);
    fpx::write_edge_list(std::string(path), graph->graph);
  });
}

size_t fpx_graph_node_count(const fpx_graph* graph) { return graph ? graph->graph.n_nodes() : 0; }

size_t fpx_graph_edge_count(const fpx_graph* graph) { return graph ? graph->graph.n_edges() : 0; }

fpx_status fpx_graph_degree(const fpx_graph* graph, size_t node, size_t* out) {
  return guarded([&] {
    need("fpx_graph_degree", graph, out);
    fpx::require(node < graph->graph.n_nodes(), "node out of range");
    *out = graph->graph.degree(static_cast<fpx::Node>(node));
  });
}

void fpx_graph_free(fpx_graph* graph) { delete graph; }

void fpx_synth_params_default(fpx_synth_params* out) {
  if (!out) return;
  const fpx::SynthParams d;
  *out = {d.n_egos, d.alters_per_ego, d.zipf_exponent, d.base_volume, d.coupling, nullptr, d.min_degree,
          d.fraction_unavailable};
}

fpx_status fpx_synth_dataset(const fpx_synth_params* params, uint64_t seed, fpx_dataset** out) {
  return guarded([&] {
    need("fpx_synth_dataset", params, out);
    fpx::SynthParams p;
    p.n_egos = params->n_egos;
    p.alters_per_ego = params->alters_per_ego;
    p.zipf_exponent = params->zipf_exponent;
    p.base_volume = params->base_volume;
    p.coupling = params->coupling;
    if (params->degree_spec) p.degree_spec = params->degree_spec->spec;
    p.min_degree = params->min_degree;
    p.fraction_unavailable = params->fraction_unavailable;
    auto data = fpx::synth_ego_dataset(p, seed);
    auto report = fpx::validate(data);
    *out = new fpx_dataset{std::move(data), std::move(report)};
  });
}

void fpx_outbreak_config_default(fpx_outbreak_config* out) {
  if (!out) return;
  const fpx::OutbreakConfig d;
  *out = {d.beta, d.p_mix, d.steps, d.replicates, -1, d.master_seed, d.clip ? 1 : 0};
}

fpx_status fpx_rank_beta(size_t n_alters, size_t rank, double beta, int clip, double* out) {
  return guarded([&] {
    need("fpx_rank_beta", out);
    *out = fpx::rank_beta(n_alters, rank, beta, clip != 0);
  });
}

fpx_status fpx_run_outbreak(const fpx_graph* graph, const fpx_outbreak_config* config, uint64_t replicate_index,
                            size_t* total_infected, size_t* new_infected, uint64_t* clipped) {
  return guarded([&] {
    need("fpx_run_outbreak", graph, config, total_infected, new_infected);
    const auto r = fpx::run_outbreak(graph->graph, to_cpp(*config), replicate_index);
    std::copy(r.curve.total_infected.begin(), r.curve.total_infected.end(), total_infected);
    std::copy(r.curve.new_infected.begin(), r.curve.new_infected.end(), new_infected);
    if (clipped) *clipped = r.clipped_attempts;
  });
}

fpx_status fpx_run_ensemble(const fpx_graph* graph, const fpx_outbreak_config* config, unsigned threads,
                            fpx_ensemble** out) {
  return guarded([&] {
    need("fpx_run_ensemble", graph, config, out);
    *out = new fpx_ensemble{fpx::run_ensemble(graph->graph, to_cpp(*config), threads)};
  });
}

size_t fpx_ensemble_step_count(const fpx_ensemble* ensemble) { return ensemble ? ensemble->result.steps.size() : 0; }

fpx_status fpx_ensemble_step_get(const fpx_ensemble* ensemble, size_t step, fpx_ensemble_step* out) {
  return guarded([&] {
    need("fpx_ensemble_step_get", ensemble, out);
    fpx::require(step < ensemble->result.steps.size(), "step out of range");
    const auto& s = ensemble->result.steps[step];
    *out = {s.mean_total, s.total_ci_lo, s.total_ci_hi, s.mean_new, s.new_ci_lo, s.new_ci_hi};
  });
}

uint64_t fpx_ensemble_clipped_attempts(const fpx_ensemble* ensemble) {
  return ensemble ? ensemble->result.clipped_attempts : 0;
}

void fpx_ensemble_free(fpx_ensemble* ensemble) { delete ensemble; }

fpx_status fpx_write_epidemic_csv(const fpx_ensemble* const* ensembles, size_t count, const char* path) {
  return guarded([&] {
    need("fpx_write_epidemic_csv", path);
    if (count > 0) need("fpx_write_epidemic_csv", ensembles);
    std::vector<fpx::EnsembleResult> results;
    for (size_t i = 0; i < count; ++i) {
      need("fpx_write_epidemic_csv", ensembles[i]);
      results.push_back(ensembles[i]->result);
    }
    fpx::write_epidemic_csv(path, results);
  });
}

fpx_status fpx_write_report(const char* const* inputs, size_t count, const char* out_path) {
  return guarded([&] {
    need("fpx_write_report", out_path);
    if (count > 0) need("fpx_write_report", inputs);
    std::vector<std::string> paths;
    for (size_t i = 0; i < count; ++i) {
      need("fpx_write_report", inputs[i]);
      paths.emplace_back(inputs[i]);
    }
    fpx::write_report(paths, out_path);
  });
}

}  // extern "C"

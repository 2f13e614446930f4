/* C interface to the fparadox library. Every function returning fpx_status
 * leaves a message for fpx_last_error() on failure. Objects are opaque
 * handles released with their matching _free function. */
#ifndef FPARADOX_H
#define FPARADOX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FPX_BUILDING_LIBRARY)
#    define FPX_API __declspec(dllexport)
#  else
#    define FPX_API __declspec(dllimport)
#  endif
#else
#  define FPX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpx_status {
  FPX_OK = 0,
  FPX_ERR_INVALID_ARGUMENT = 1,
  FPX_ERR_PARSE = 2,
  FPX_ERR_VALIDATION = 3,
  FPX_ERR_EMPTY_RESULT = 4,
  FPX_ERR_DEGENERATE = 5,
  FPX_ERR_IO = 6,
  FPX_ERR_INTERNAL = 99
} fpx_status;

FPX_API const char* fpx_version(void);
/* Message of the last failed call on this thread; "" if none. */
FPX_API const char* fpx_last_error(void);

/* ---- egocentric datasets ---- */

typedef struct fpx_dataset fpx_dataset;

typedef struct fpx_validation_summary {
  size_t n_egos;
  size_t n_dyads;
  size_t n_dyads_with_degree;
  size_t n_violations;
} fpx_validation_summary;

FPX_API fpx_status fpx_dataset_read_csv(const char* path, fpx_dataset** out);
FPX_API fpx_status fpx_dataset_parse_csv(const char* text, size_t length, fpx_dataset** out);
FPX_API fpx_status fpx_dataset_write_csv(const fpx_dataset* dataset, const char* path);
FPX_API void fpx_dataset_free(fpx_dataset* dataset);

FPX_API fpx_status fpx_dataset_validation(const fpx_dataset* dataset, fpx_validation_summary* out);
/* Strings stay valid until the dataset is freed. */
FPX_API fpx_status fpx_dataset_violation(const fpx_dataset* dataset, size_t index, const char** ego_id,
                                         const char** description);
/* `ego_id,description` rows. */
FPX_API fpx_status fpx_dataset_write_violations_csv(const fpx_dataset* dataset, const char* path);

/* Writes up to `capacity` counts (index 0 = rank 1); *n_ranks receives the
 * full length, so a first call with capacity 0 sizes the buffer. */
FPX_API fpx_status fpx_dataset_dyads_per_rank(const fpx_dataset* dataset, int only_available, size_t* counts,
                                              size_t capacity, size_t* n_ranks);

/* ---- paradox statistics ---- */

typedef enum fpx_aggregator { FPX_AGG_MEAN = 0, FPX_AGG_MEDIAN = 1 } fpx_aggregator;

typedef enum fpx_test_method {
  FPX_TEST_EXACT = 0,
  FPX_TEST_PERMUTATION = 1,
  FPX_TEST_NORMAL_APPROX = 2
} fpx_test_method;

typedef struct fpx_test_result {
  double statistic;
  double p_value;
  size_t n;
  fpx_test_method method;
} fpx_test_result;

typedef struct fpx_rank1_comparison {
  size_t n_pairs;
  double fraction_lower;
  double ego_mean;
  double alter1_mean;
  double ego_median;
  double alter1_median;
  int has_wilcoxon; /* 0 when every pair is tied */
  fpx_test_result wilcoxon;
} fpx_rank1_comparison;

typedef struct fpx_zipf_fit {
  double exponent;
  double log_prefactor;
  double r_squared;
  size_t ranks_used;
} fpx_zipf_fit;

FPX_API fpx_status fpx_paradox_prevalence(const fpx_dataset* dataset, fpx_aggregator aggregator, double* out);
FPX_API fpx_status fpx_rank1_comparison_compute(const fpx_dataset* dataset, fpx_rank1_comparison* out);
FPX_API fpx_status fpx_write_rank_summary_csv(const fpx_dataset* dataset, int max_rank, const char* path);
FPX_API fpx_status fpx_write_decile_curves_csv(const fpx_dataset* dataset, int log10_degree, int n_bins,
                                               const char* path);
FPX_API fpx_status fpx_zipf_fit_compute(const fpx_dataset* dataset, size_t min_dyads, fpx_zipf_fit* out);
FPX_API fpx_status fpx_write_zipf_csv(const fpx_zipf_fit* fit, const char* path);
FPX_API fpx_status fpx_wilcoxon_signed_rank(const double* x, const double* y, size_t n, fpx_test_result* out);
FPX_API fpx_status fpx_spearman(const double* x, const double* y, size_t n, size_t n_perm, uint64_t seed,
                                fpx_test_result* out);

/* ---- hub alters and the permutation null ---- */

typedef struct fpx_hub_analysis fpx_hub_analysis;

typedef struct fpx_hub_options {
  size_t min_available;
  size_t n_perm;
  uint64_t seed;
  double coverage;
  unsigned threads; /* 0 = hardware concurrency */
} fpx_hub_options;

typedef struct fpx_hub_row {
  int rank;
  size_t n_dyads;
  size_t n_hub;
  double proportion; /* NaN where n_dyads == 0, as are the null fields */
  double null_mean;
  double null_lo;
  double null_hi;
} fpx_hub_row;

FPX_API void fpx_hub_options_default(fpx_hub_options* out);
FPX_API fpx_status fpx_hub_analyze(const fpx_dataset* dataset, const fpx_hub_options* options,
                                   fpx_hub_analysis** out);
FPX_API size_t fpx_hub_rank_count(const fpx_hub_analysis* hub);
FPX_API size_t fpx_hub_eligible_egos(const fpx_hub_analysis* hub);
FPX_API fpx_status fpx_hub_row_get(const fpx_hub_analysis* hub, size_t index, fpx_hub_row* out);
FPX_API fpx_status fpx_hub_trend_test(const fpx_hub_analysis* hub, size_t n_perm, uint64_t seed,
                                      fpx_test_result* out);
FPX_API fpx_status fpx_hub_write_csv(const fpx_hub_analysis* hub, const char* path);
FPX_API void fpx_hub_free(fpx_hub_analysis* hub);

/* ---- generators ---- */

typedef struct fpx_degree_spec fpx_degree_spec;
typedef struct fpx_graph fpx_graph;

FPX_API fpx_status fpx_degree_spec_lognormal(double mu, double sigma, fpx_degree_spec** out);
FPX_API fpx_status fpx_degree_spec_lognormal_mode(double mode, double sigma, fpx_degree_spec** out);
/* `degree,probability` CSV. */
FPX_API fpx_status fpx_degree_spec_read_histogram(const char* path, fpx_degree_spec** out);
/* 88,137-node surrogate of the phone network; any out pointer may be NULL. */
FPX_API fpx_status fpx_degree_spec_paper_scale(fpx_degree_spec** out, size_t* n_nodes, int64_t* min_degree,
                                               size_t* target_edges);
FPX_API void fpx_degree_spec_free(fpx_degree_spec* spec);

/* Fills out_degrees[0..n). */
FPX_API fpx_status fpx_sample_degree_sequence(const fpx_degree_spec* spec, size_t n, int64_t min_degree,
                                              uint64_t seed, int64_t* out_degrees);

FPX_API fpx_status fpx_graph_configuration(const int64_t* degrees, size_t n, uint64_t seed, int simplify,
                                           fpx_graph** out);
FPX_API fpx_status fpx_graph_read_edge_list(const char* path, fpx_graph** out);
FPX_API fpx_status fpx_graph_write_edge_list(const fpx_graph* graph, const char* path);
FPX_API size_t fpx_graph_node_count(const fpx_graph* graph);
FPX_API size_t fpx_graph_edge_count(const fpx_graph* graph);
FPX_API fpx_status fpx_graph_degree(const fpx_graph* graph, size_t node, size_t* out);
FPX_API void fpx_graph_free(fpx_graph* graph);

typedef struct fpx_synth_params {
  size_t n_egos;
  size_t alters_per_ego;
  double zipf_exponent;
  double base_volume;
  double coupling;
  const fpx_degree_spec* degree_spec; /* NULL: lognormal peaked at 100, sigma 0.8 */
  int64_t min_degree;
  double fraction_unavailable;
} fpx_synth_params;

FPX_API void fpx_synth_params_default(fpx_synth_params* out);
FPX_API fpx_status fpx_synth_dataset(const fpx_synth_params* params, uint64_t seed, fpx_dataset** out);

/* ---- SI spreading ---- */

typedef struct fpx_outbreak_config {
  double beta;
  double p_mix;
  size_t steps;
  size_t replicates;
  int64_t seed_node; /* < 0: uniform random per replicate */
  uint64_t master_seed;
  int clip;
} fpx_outbreak_config;

typedef struct fpx_ensemble_step {
  double mean_total, total_ci_lo, total_ci_hi;
  double mean_new, new_ci_lo, new_ci_hi;
} fpx_ensemble_step;

typedef struct fpx_ensemble fpx_ensemble;

FPX_API void fpx_outbreak_config_default(fpx_outbreak_config* out);
FPX_API fpx_status fpx_rank_beta(size_t n_alters, size_t rank, double beta, int clip, double* out);
/* Buffers hold config->steps + 1 entries; `clipped` may be NULL. */
FPX_API fpx_status fpx_run_outbreak(const fpx_graph* graph, const fpx_outbreak_config* config,
                                    uint64_t replicate_index, size_t* total_infected, size_t* new_infected,
                                    uint64_t* clipped);
FPX_API fpx_status fpx_run_ensemble(const fpx_graph* graph, const fpx_outbreak_config* config, unsigned threads,
                                    fpx_ensemble** out);
FPX_API size_t fpx_ensemble_step_count(const fpx_ensemble* ensemble);
FPX_API fpx_status fpx_ensemble_step_get(const fpx_ensemble* ensemble, size_t step, fpx_ensemble_step* out);
FPX_API uint64_t fpx_ensemble_clipped_attempts(const fpx_ensemble* ensemble);
FPX_API void fpx_ensemble_free(fpx_ensemble* ensemble);
FPX_API fpx_status fpx_write_epidemic_csv(const fpx_ensemble* const* ensembles, size_t count, const char* path);

/* ---- report ---- */

FPX_API fpx_status fpx_write_report(const char* const* inputs, size_t count, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* FPARADOX_H */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpx/generators.hpp"
#include "fpx/rng.hpp"

namespace fpx {

/// Harmonic number H(n) = 1 + 1/2 + ... + 1/n.
double harmonic(std::size_t n);

/// Per-alter transmission probability for an ego with `n_alters` alters and
/// an alter at `rank`: C/rank with C = n_alters * beta / H(n_alters), so the
/// probabilities over all ranks sum to n_alters * beta. With `clip` the
/// result is capped at 1.
double rank_beta(std::size_t n_alters, std::size_t rank, double beta, bool clip);

/// neighbor_ranks(g)[u][j] is the rank of g.neighbors(u)[j] among u's
/// neighbours: ascending degree, ties by node index, rank 1 = lowest degree.
using NeighborRanks = std::vector<std::vector<std::uint32_t>>;
NeighborRanks neighbor_ranks(const Graph& graph);

struct OutbreakConfig {
  double beta = 0.01;
  double p_mix = 0;  // probability an attempt uses the rank-dependent regime
  std::size_t steps = 20;
  std::size_t replicates = 100;
  std::optional<Node> seed_node;  // empty: uniform random per replicate
  std::uint64_t master_seed = 0;
  bool clip = true;
};

void validate_config(const OutbreakConfig& config);

struct EpidemicCurve {
  std::vector<std::size_t> total_infected;  // index t = 0..steps
  std::vector<std::size_t> new_infected;    // new[0] = 1, the seed
};

struct OutbreakResult {
  EpidemicCurve curve;
  Node seed_node = 0;
  /// Rank-regime attempts whose unclipped probability exceeded 1.
  std::uint64_t clipped_attempts = 0;
};

/// Synchronous SI: during step t every node infected before t tries each
/// neighbour that was susceptible at the start of t. Draws come only from
/// make_rng(config.master_seed, replicate_index).
OutbreakResult run_outbreak(const Graph& graph, const NeighborRanks& ranks, const OutbreakConfig& config,
                            std::uint64_t replicate_index);
OutbreakResult run_outbreak(const Graph& graph, const OutbreakConfig& config, std::uint64_t replicate_index);

struct EnsembleStep {
  double mean_total = 0, total_ci_lo = 0, total_ci_hi = 0;
  double mean_new = 0, new_ci_lo = 0, new_ci_hi = 0;
};

struct EnsembleResult {
  double p_mix = 0;
  std::vector<EnsembleStep> steps;  // t = 0..config.steps
  std::uint64_t clipped_attempts = 0;
};

/// mean +/- 1.96 * sd / sqrt(replicates) per step (sd with n - 1).
/// Identical for any `threads`, including 0 (= hardware concurrency).
EnsembleResult run_ensemble(const Graph& graph, const OutbreakConfig& config, unsigned threads = 1);

enum class Regime { uniform, rank };

/// Expected infections caused by `node` in one step, given which nodes are
/// susceptible. Rank regime uses unclipped probabilities over static ranks.
double expected_secondary(const Graph& graph, Node node, Regime regime, double beta,
                          const std::vector<bool>& susceptible);

/// One step of attempts from `node` to every neighbour, all susceptible;
/// returns the number infected. Shares the per-attempt logic of run_outbreak.
std::size_t sample_secondary(const Graph& graph, const NeighborRanks& ranks, Node node,
                             const OutbreakConfig& config, Rng& rng);

void write_epidemic_csv(const std::string& path, std::span<const EnsembleResult> results);

}  // namespace fpx

#pragma once

#include <cstdint>
#include <vector>

#include "fpx/ego_model.hpp"
#include "fpx/paradox_stats.hpp"

namespace fpx {

struct HubRankEntry {
  int rank = 0;
  std::size_t n_dyads = 0;
  std::size_t n_hub = 0;
  double proportion = 0;  // NaN when n_dyads == 0
};

struct HubProportionCurve {
  std::vector<HubRankEntry> ranks;  // ranks 1..max available rank
  std::size_t n_eligible = 0;
};

struct NullBandEntry {
  int rank = 0;
  double lo = 0;
  double hi = 0;
  double mean = 0;
};

struct NullBand {
  std::vector<NullBandEntry> ranks;  // aligned with HubProportionCurve::ranks
  std::size_t n_perm = 0;
  double coverage = 0;
};

inline constexpr std::size_t kDefaultMinAvailable = 5;

/// Rank of the available alter with the largest outdegree, lowest rank on ties.
int hub_rank(const EgoRecord& ego);

HubProportionCurve hub_proportion_by_rank(const EgoDataset& dataset,
                                          std::size_t min_available = kDefaultMinAvailable);

struct NullOptions {
  std::size_t n_perm = 1000;
  std::uint64_t seed = 0;
  double coverage = 0.95;
  std::size_t min_available = kDefaultMinAvailable;
  unsigned threads = 1;  // 0: hardware concurrency
};

/// Pointwise envelope of hub proportions when every eligible ego's hub is
/// drawn uniformly from its own available ranks. Permutation i draws from
/// derive_seed(seed, i), so the band does not depend on `threads`.
NullBand permutation_null_band(const EgoDataset& dataset, const NullOptions& options);

/// Spearman trend of proportion against rank over ranks with dyads.
TestResult hub_trend_test(const HubProportionCurve& curve, std::size_t n_perm, std::uint64_t seed);

void write_hub_csv(const std::string& path, const HubProportionCurve& curve, const NullBand& band);

}  // namespace fpx

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpx/ego_model.hpp"

namespace fpx {

enum class Aggregator { mean, median };

enum class TestMethod { exact, permutation, normal_approx };

struct TestResult {
  double statistic = 0;
  double p_value = 1;
  std::size_t n = 0;
  TestMethod method = TestMethod::exact;
};

const char* to_string(TestMethod method);

/// Quantile with linear interpolation between order statistics
/// (h = (n-1)q). Input must be sorted ascending and non-empty.
double sorted_quantile(std::span<const double> sorted, double q);
double median(std::vector<double> values);
double mean(std::span<const double> values);

/// Fraction of egos with at least one available alter whose outdegree is
/// strictly below the aggregate of their available alters' outdegrees.
double paradox_prevalence(const EgoDataset& dataset, Aggregator aggregator);

struct Rank1Comparison {
  std::size_t n_pairs = 0;
  double fraction_lower = 0;
  double ego_mean = 0;
  double alter1_mean = 0;
  double ego_median = 0;
  double alter1_median = 0;
  std::optional<TestResult> wilcoxon;
  std::string wilcoxon_error;  // set when the signed-rank test is undefined
};

/// Ego outdegree versus its rank-1 alter, over egos whose rank-1 alter has a
/// known outdegree. An alter at rank 1 must actually exist.
Rank1Comparison rank1_comparison(const EgoDataset& dataset);

struct RankSummary {
  int rank = 0;
  std::size_t n_dyads = 0;
  double mean_k = 0;  // NaN when n_dyads == 0, as are the order statistics
  double median_k = 0;
  double q25 = 0;
  double q75 = 0;
};

std::vector<RankSummary> rank_degree_summary(const EgoDataset& dataset, int max_rank);

struct CurvePoint {
  double mean_contact_volume = 0;
  double mean_alter_k = 0;
  std::size_t n = 0;
};

struct DecileCurve {
  int decile = 0;
  std::vector<CurvePoint> points;  // ascending contact volume
};

/// Ego outdegree decile index (1..10) for each ego, using type-7 quantile
/// boundaries; a value equal to a boundary goes to the lower decile.
std::vector<int> ego_deciles(const EgoDataset& dataset);

std::vector<DecileCurve> decile_contact_curves(const EgoDataset& dataset, bool log10_degree,
                                               int n_bins);

struct ZipfFit {
  double exponent = 0;
  double log_prefactor = 0;
  double r_squared = 0;
  std::size_t ranks_used = 0;
};

struct RankVolume {
  int rank = 0;
  double mean_volume = 0;
  std::size_t n_dyads = 0;
};

/// Mean contact volume per rank over all dyads (volume needs no outdegree).
std::vector<RankVolume> mean_volume_by_rank(const EgoDataset& dataset);

/// OLS of log10(mean_volume) on log10(rank); exponent is the negated slope.
ZipfFit fit_power_law(std::span<const RankVolume> points);

/// fit_power_law over the ranks of `dataset` with at least `min_dyads` dyads.
ZipfFit zipf_fit(const EgoDataset& dataset, std::size_t min_dyads);

/// Two-sided signed-rank test. Exact (subset-sum enumeration over the
/// doubled mid-ranks) up to kWilcoxonExactMax nonzero differences.
inline constexpr std::size_t kWilcoxonExactMax = 20;
TestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs);

/// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Rank correlation with a seeded two-sided Monte Carlo permutation p-value.
inline constexpr std::size_t kDefaultSpearmanPerms = 10000;
TestResult spearman(std::span<const double> x, std::span<const double> y, std::size_t n_perm,
                    std::uint64_t seed);

void write_rank_summary_csv(const std::string& path, std::span<const RankSummary> rows);
void write_decile_curves_csv(const std::string& path, std::span<const DecileCurve> curves);
void write_zipf_csv(const std::string& path, const ZipfFit& fit);

}  // namespace fpx

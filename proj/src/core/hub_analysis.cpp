#include "fpx/hub_analysis.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "fpx/csv.hpp"
#include "fpx/error.hpp"
#include "fpx/parallel.hpp"
#include "fpx/rng.hpp"

namespace fpx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<const EgoRecord*> eligible_egos(const EgoDataset& dataset, std::size_t min_available) {
  const std::size_t floor = std::max<std::size_t>(min_available, 1);
  std::vector<const EgoRecord*> out;
  for (const auto& ego : dataset.egos)
    if (ego.available_count() >= floor) out.push_back(&ego);
  if (out.empty())
    fail(ErrorKind::empty_result,
         "no ego has at least " + std::to_string(floor) + " alters with available outdegree");
  return out;
}

std::vector<std::size_t> dyads_by_rank(const std::vector<const EgoRecord*>& egos) {
  std::vector<std::size_t> counts;
  for (const auto* ego : egos)
    for (const auto& a : ego->alters) {
      if (!a.available()) continue;
      const auto r = static_cast<std::size_t>(a.rank);
      if (counts.size() < r) counts.resize(r, 0);
      ++counts[r - 1];
    }
  return counts;
}

}  // namespace

int hub_rank(const EgoRecord& ego) {
  const AlterRecord* hub = nullptr;
  for (const auto& a : ego.alters)
    if (a.available() && (!hub || *a.outdegree > *hub->outdegree)) hub = &a;
  if (!hub) fail(ErrorKind::empty_result, "ego " + ego.ego_id + " has no alter with available outdegree");
  return hub->rank;
}

HubProportionCurve hub_proportion_by_rank(const EgoDataset& dataset, std::size_t min_available) {
  const auto egos = eligible_egos(dataset, min_available);
  const auto dyads = dyads_by_rank(egos);
  std::vector<std::size_t> hubs(dyads.size(), 0);
  for (const auto* ego : egos) ++hubs[static_cast<std::size_t>(hub_rank(*ego) - 1)];

  HubProportionCurve curve;
  curve.n_eligible = egos.size();
  for (std::size_t i = 0; i < dyads.size(); ++i) {
    const double p = dyads[i] ? static_cast<double>(hubs[i]) / static_cast<double>(dyads[i]) : kNaN;
    curve.ranks.push_back({static_cast<int>(i + 1), dyads[i], hubs[i], p});
  }
  return curve;
}

NullBand permutation_null_band(const EgoDataset& dataset, const NullOptions& options) {
  require(options.n_perm >= 1, "n_perm must be >= 1");
  require(options.coverage > 0 && options.coverage <= 1, "coverage must be in (0, 1]");
  const auto egos = eligible_egos(dataset, options.min_available);
  const auto dyads = dyads_by_rank(egos);
  const std::size_t n_ranks = dyads.size();

  std::vector<std::vector<int>> available(egos.size());
  for (std::size_t e = 0; e < egos.size(); ++e)
    for (const auto& a : egos[e]->alters)
      if (a.available()) available[e].push_back(a.rank);

  // proportions[perm * n_ranks + rank index]
  std::vector<double> proportions(options.n_perm * n_ranks, 0.0);
  parallel_for(options.n_perm, options.threads, [&](std::size_t perm) {
    auto rng = make_rng(options.seed, perm);
    std::vector<std::size_t> hubs(n_ranks, 0);
    for (const auto& ranks : available) {
      std::uniform_int_distribution<std::size_t> pick(0, ranks.size() - 1);
      ++hubs[static_cast<std::size_t>(ranks[pick(rng)] - 1)];
    }
    double* row = proportions.data() + perm * n_ranks;
    for (std::size_t r = 0; r < n_ranks; ++r)
      row[r] = dyads[r] ? static_cast<double>(hubs[r]) / static_cast<double>(dyads[r]) : kNaN;
  });

  NullBand band;
  band.n_perm = options.n_perm;
  band.coverage = options.coverage;
  const double tail = (1.0 - options.coverage) / 2.0;
  std::vector<double> column(options.n_perm);
  for (std::size_t r = 0; r < n_ranks; ++r) {
    NullBandEntry entry{static_cast<int>(r + 1), kNaN, kNaN, kNaN};
    if (dyads[r]) {
      double sum = 0;
      for (std::size_t p = 0; p < options.n_perm; ++p) {
        column[p] = proportions[p * n_ranks + r];
        sum += column[p];
      }
      entry.mean = sum / static_cast<double>(options.n_perm);
      std::sort(column.begin(), column.end());
      entry.lo = sorted_quantile(column, tail);
      entry.hi = sorted_quantile(column, 1.0 - tail);
    }
    band.ranks.push_back(entry);
  }
  return band;
}

TestResult hub_trend_test(const HubProportionCurve& curve, std::size_t n_perm, std::uint64_t seed) {
  std::vector<double> ranks, props;
  for (const auto& e : curve.ranks)
    if (e.n_dyads > 0) {
      ranks.push_back(e.rank);
      props.push_back(e.proportion);
    }
  return spearman(ranks, props, n_perm, seed);
}

void write_hub_csv(const std::string& path, const HubProportionCurve& curve, const NullBand& band) {
  require(curve.ranks.size() == band.ranks.size(), "hub curve and null band cover different ranks");
  auto out = csv::open_out(path);
  out << "rank,n_dyads,n_hub,proportion,null_mean,null_lo,null_hi\n";
  for (std::size_t i = 0; i < curve.ranks.size(); ++i) {
    const auto& c = curve.ranks[i];
    const auto& b = band.ranks[i];
    out << c.rank << ',' << c.n_dyads << ',' << c.n_hub << ',' << csv::fmt(c.proportion) << ','
        << csv::fmt(b.mean) << ',' << csv::fmt(b.lo) << ',' << csv::fmt(b.hi) << '\n';
  }
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

}  // namespace fpx

#include "fpx/paradox_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fpx/error.hpp"
#include "fpx/rng.hpp"

namespace fpx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double aggregate(std::vector<double> values, Aggregator aggregator) {
  return aggregator == Aggregator::mean ? mean(values) : median(std::move(values));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

bool is_constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

const char* to_string(TestMethod method) {
  switch (method) {
    case TestMethod::exact: return "exact";
    case TestMethod::permutation: return "permutation";
    case TestMethod::normal_approx: return "normal_approx";
  }
  return "unknown";
}

double sorted_quantile(std::span<const double> sorted, double q) {
  require(!sorted.empty(), "quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return sorted_quantile(values, 0.5);
}

double mean(std::span<const double> values) {
  require(!values.empty(), "mean of empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double paradox_prevalence(const EgoDataset& dataset, Aggregator aggregator) {
  std::size_t eligible = 0, holds = 0;
  std::vector<double> degrees;
  for (const auto& ego : dataset.egos) {
    degrees.clear();
    for (const auto& a : ego.alters)
      if (a.available()) degrees.push_back(static_cast<double>(*a.outdegree));
    if (degrees.empty()) continue;
    ++eligible;
    if (static_cast<double>(ego.outdegree) < aggregate(degrees, aggregator)) ++holds;
  }
  if (eligible == 0) fail(ErrorKind::empty_result, "no ego has an alter with available outdegree");
  return static_cast<double>(holds) / static_cast<double>(eligible);
}

Rank1Comparison rank1_comparison(const EgoDataset& dataset) {
  std::vector<double> ego_k, alter_k;
  std::vector<std::pair<double, double>> pairs;
  for (const auto& ego : dataset.egos) {
    if (ego.alters.empty()) continue;
    const auto& first = ego.alters.front();
    if (first.rank != 1 || !first.available()) continue;
    ego_k.push_back(static_cast<double>(ego.outdegree));
    alter_k.push_back(static_cast<double>(*first.outdegree));
    pairs.emplace_back(ego_k.back(), alter_k.back());
  }
  if (pairs.size() < 2)
    fail(ErrorKind::empty_result, "fewer than 2 egos with an available rank-1 alter");

  Rank1Comparison out;
  out.n_pairs = pairs.size();
  const auto lower = std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return p.first < p.second; });
  out.fraction_lower = static_cast<double>(lower) / static_cast<double>(pairs.size());
  out.ego_mean = mean(ego_k);
  out.alter1_mean = mean(alter_k);
  out.ego_median = median(ego_k);
  out.alter1_median = median(alter_k);
  try {
    out.wilcoxon = wilcoxon_signed_rank(pairs);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate) throw;
    out.wilcoxon_error = e.what();
  }
  return out;
}

std::vector<RankSummary> rank_degree_summary(const EgoDataset& dataset, int max_rank) {
  require(max_rank >= 1, "max_rank must be >= 1");
  std::vector<std::vector<double>> by_rank(static_cast<std::size_t>(max_rank));
  for (const auto& ego : dataset.egos)
    for (const auto& a : ego.alters)
      if (a.available() && a.rank >= 1 && a.rank <= max_rank)
        by_rank[static_cast<std::size_t>(a.rank - 1)].push_back(static_cast<double>(*a.outdegree));

  std::vector<RankSummary> out;
  out.reserve(by_rank.size());
  for (int r = 1; r <= max_rank; ++r) {
    auto& ks = by_rank[static_cast<std::size_t>(r - 1)];
    RankSummary s{r, ks.size(), kNaN, kNaN, kNaN, kNaN};
    if (!ks.empty()) {
      std::sort(ks.begin(), ks.end());
      s.mean_k = mean(ks);
      s.median_k = sorted_quantile(ks, 0.5);
      s.q25 = sorted_quantile(ks, 0.25);
      s.q75 = sorted_quantile(ks, 0.75);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<int> ego_deciles(const EgoDataset& dataset) {
  std::vector<double> sorted;
  sorted.reserve(dataset.egos.size());
  for (const auto& ego : dataset.egos) sorted.push_back(static_cast<double>(ego.outdegree));
  std::sort(sorted.begin(), sorted.end());
  double bounds[9];
  for (int d = 1; d <= 9; ++d) bounds[d - 1] = sorted_quantile(sorted, d / 10.0);

  std::vector<int> deciles;
  deciles.reserve(dataset.egos.size());
  for (const auto& ego : dataset.egos) {
    const auto k = static_cast<double>(ego.outdegree);
    deciles.push_back(1 + static_cast<int>(std::count_if(std::begin(bounds), std::end(bounds),
                                                         [k](double b) { return k > b; })));
  }
  return deciles;
}

std::vector<DecileCurve> decile_contact_curves(const EgoDataset& dataset, bool log10_degree,
                                               int n_bins) {
  require(n_bins >= 2, "n_bins must be >= 2");
  require(dataset.egos.size() >= 10, "decile binning needs at least 10 egos");
  const auto deciles = ego_deciles(dataset);

  struct Dyad {
    double volume;
    double k;
  };
  std::vector<std::vector<Dyad>> groups(10);
  for (std::size_t i = 0; i < dataset.egos.size(); ++i)
    for (const auto& a : dataset.egos[i].alters) {
      if (!a.available()) continue;
      double k = static_cast<double>(*a.outdegree);
      if (log10_degree) {
        if (k <= 0)
          fail(ErrorKind::invalid_argument,
               "log10 transform needs positive alter outdegree (ego " + dataset.egos[i].ego_id + ")");
        k = std::log10(k);
      }
      groups[static_cast<std::size_t>(deciles[i] - 1)].push_back({static_cast<double>(a.contact_volume), k});
    }

  std::vector<DecileCurve> curves;
  for (int d = 1; d <= 10; ++d) {
    auto& dyads = groups[static_cast<std::size_t>(d - 1)];
    std::stable_sort(dyads.begin(), dyads.end(), [](const Dyad& a, const Dyad& b) { return a.volume < b.volume; });
    DecileCurve curve{d, {}};
    const std::size_t m = dyads.size(), bins = static_cast<std::size_t>(n_bins);
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t lo = b * m / bins, hi = (b + 1) * m / bins;
      if (lo == hi) continue;
      double sv = 0, sk = 0;
      for (std::size_t j = lo; j < hi; ++j) {
        sv += dyads[j].volume;
        sk += dyads[j].k;
      }
      const auto n = static_cast<double>(hi - lo);
      curve.points.push_back({sv / n, sk / n, hi - lo});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<RankVolume> mean_volume_by_rank(const EgoDataset& dataset) {
  std::vector<double> sum;
  std::vector<std::size_t> count;
  for (const auto& ego : dataset.egos)
    for (const auto& a : ego.alters) {
      if (a.rank < 1) continue;
      const auto r = static_cast<std::size_t>(a.rank);
      if (sum.size() < r) {
        sum.resize(r, 0.0);
        count.resize(r, 0);
      }
      sum[r - 1] += static_cast<double>(a.contact_volume);
      ++count[r - 1];
    }
  std::vector<RankVolume> out;
  for (std::size_t i = 0; i < sum.size(); ++i)
    out.push_back({static_cast<int>(i + 1), count[i] ? sum[i] / static_cast<double>(count[i]) : kNaN, count[i]});
  return out;
}

ZipfFit fit_power_law(std::span<const RankVolume> points) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    require(p.rank >= 1 && p.mean_volume > 0, "power-law fit needs rank >= 1 and positive volume");
    xs.push_back(std::log10(static_cast<double>(p.rank)));
    ys.push_back(std::log10(p.mean_volume));
  }
  if (xs.size() < 2) fail(ErrorKind::empty_result, "zipf fit needs at least 2 ranks with enough dyads");

  const double mx = mean(xs), my = mean(ys);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) fail(ErrorKind::degenerate, "zipf fit needs at least 2 distinct ranks");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    ss_res += e * e;
  }
  // A flat series is fit perfectly by slope 0.
  const double r2 = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return {0.0 - slope, intercept, r2, xs.size()};
}

ZipfFit zipf_fit(const EgoDataset& dataset, std::size_t min_dyads) {
  const std::size_t threshold = std::max<std::size_t>(min_dyads, 1);
  std::vector<RankVolume> usable;
  for (const auto& p : mean_volume_by_rank(dataset))
    if (p.n_dyads >= threshold) usable.push_back(p);
  return fit_power_law(usable);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

TestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> diffs;
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (d != 0) diffs.push_back(d);
  }
  if (diffs.empty()) fail(ErrorKind::degenerate, "wilcoxon: all differences are zero");
  if (diffs.size() < 2) fail(ErrorKind::degenerate, "wilcoxon: fewer than 2 nonzero differences");

  std::vector<double> magnitudes(diffs.size());
  std::transform(diffs.begin(), diffs.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
  const auto ranks = average_ranks(magnitudes);
  const std::size_t n = diffs.size();

  double w_plus = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (diffs[i] > 0) w_plus += ranks[i];

  TestResult result;
  result.statistic = w_plus;
  result.n = n;

  if (n <= kWilcoxonExactMax) {
    // Doubled mid-ranks are integers, so the null distribution of 2W+ is a
    // subset-sum count over them.
    std::vector<int> doubled(n);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<int>(std::lround(2 * ranks[i]));
      total += doubled[i];
    }
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1;
    for (int w : doubled)
      for (int s = total; s >= w; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - w)];
    const int observed = static_cast<int>(std::lround(2 * w_plus));
    const int tail = std::min(observed, total - observed);
    double at_most = 0;
    for (int s = 0; s <= tail; ++s) at_most += ways[static_cast<std::size_t>(s)];
    result.p_value = std::min(1.0, 2.0 * at_most / std::ldexp(1.0, static_cast<int>(n)));
    result.method = TestMethod::exact;
    return result;
  }

  const auto nd = static_cast<double>(n);
  double tie_term = 0;
  {
    std::vector<double> sorted = magnitudes;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const auto t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
  }
  const double mu = nd * (nd + 1) / 4;
  const double var = nd * (nd + 1) * (2 * nd + 1) / 24 - tie_term / 48;
  const double z = std::max(0.0, std::abs(w_plus - mu) - 0.5) / std::sqrt(var);
  result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  result.method = TestMethod::normal_approx;
  return result;
}

TestResult spearman(std::span<const double> x, std::span<const double> y, std::size_t n_perm,
                    std::uint64_t seed) {
  require(x.size() == y.size(), "spearman: x and y differ in length");
  require(x.size() >= 3, "spearman: need at least 3 observations");
  if (is_constant(x) || is_constant(y)) fail(ErrorKind::degenerate, "spearman: constant input");

  const auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  const double rho = pearson(rx, ry);

  auto rng = make_rng(seed, 0);
  std::size_t extreme = 0;
  constexpr double kTol = 1e-12;
  for (std::size_t i = 0; i < n_perm; ++i) {
    std::shuffle(ry.begin(), ry.end(), rng);
    if (std::abs(pearson(rx, ry)) >= std::abs(rho) - kTol) ++extreme;
  }
  TestResult result;
  result.statistic = rho;
  result.n = x.size();
  result.p_value = static_cast<double>(extreme + 1) / static_cast<double>(n_perm + 1);
  result.method = TestMethod::permutation;
  return result;
}

}  // namespace fpx

#include "fpx/csv.hpp"

namespace fpx {

void write_rank_summary_csv(const std::string& path, std::span<const RankSummary> rows) {
  auto out = csv::open_out(path);
  out << "rank,n_dyads,mean_k,median_k,q25,q75\n";
  for (const auto& r : rows)
    out << r.rank << ',' << r.n_dyads << ',' << csv::fmt(r.mean_k) << ',' << csv::fmt(r.median_k) << ','
        << csv::fmt(r.q25) << ',' << csv::fmt(r.q75) << '\n';
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

void write_decile_curves_csv(const std::string& path, std::span<const DecileCurve> curves) {
  auto out = csv::open_out(path);
  out << "decile,bin,mean_volume,mean_k,n\n";
  for (const auto& c : curves)
    for (std::size_t b = 0; b < c.points.size(); ++b) {
      const auto& p = c.points[b];
      out << c.decile << ',' << b + 1 << ',' << csv::fmt(p.mean_contact_volume) << ','
          << csv::fmt(p.mean_alter_k) << ',' << p.n << '\n';
    }
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

void write_zipf_csv(const std::string& path, const ZipfFit& fit) {
  auto out = csv::open_out(path);
  out << "exponent,log_prefactor,r_squared,ranks_used\n"
      << csv::fmt(fit.exponent) << ',' << csv::fmt(fit.log_prefactor) << ',' << csv::fmt(fit.r_squared) << ','
      << fit.ranks_used << '\n';
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

}  // namespace fpx

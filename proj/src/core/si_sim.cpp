#include "fpx/si_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fpx/csv.hpp"
#include "fpx/error.hpp"
#include "fpx/parallel.hpp"

namespace fpx {

double harmonic(std::size_t n) {
  double h = 0;
  for (std::size_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);  // small terms first
  return h;
}

double rank_beta(std::size_t n_alters, std::size_t rank, double beta, bool clip) {
  if (rank < 1 || rank > n_alters)
    fail(ErrorKind::invalid_argument,
         "rank " + std::to_string(rank) + " outside 1.." + std::to_string(n_alters));
  const double c = static_cast<double>(n_alters) * beta / harmonic(n_alters);
  const double p = c / static_cast<double>(rank);
  return clip ? std::min(1.0, p) : p;
}

namespace {

std::vector<std::uint32_t> ranks_of(const Graph& graph, Node u) {
  const auto nbrs = graph.neighbors(u);
  std::vector<std::uint32_t> order(nbrs.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto da = graph.degree(nbrs[a]), db = graph.degree(nbrs[b]);
    return da != db ? da < db : nbrs[a] < nbrs[b];
  });
  std::vector<std::uint32_t> ranks(nbrs.size());
  for (std::uint32_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = pos + 1;
  return ranks;
}

double rank_coefficient(std::size_t n_alters, double beta) {
  return n_alters ? static_cast<double>(n_alters) * beta / harmonic(n_alters) : 0.0;
}

/// One transmission attempt: regime draw, then Bernoulli. `coef` is the
/// source's rank coefficient.
bool attempt(double coef, std::uint32_t rank, const OutbreakConfig& config, Rng& rng, std::uint64_t& clipped) {
  bool rank_regime = config.p_mix >= 1;
  if (config.p_mix > 0 && config.p_mix < 1) rank_regime = uniform01(rng) < config.p_mix;
  double p = config.beta;
  if (rank_regime) {
    p = coef / rank;
    if (p > 1) {
      ++clipped;
      if (config.clip) p = 1;
    }
  }
  return uniform01(rng) < p;
}

}  // namespace

NeighborRanks neighbor_ranks(const Graph& graph) {
  NeighborRanks ranks(graph.n_nodes());
  for (Node u = 0; u < graph.n_nodes(); ++u) ranks[u] = ranks_of(graph, u);
  return ranks;
}

void validate_config(const OutbreakConfig& c) {
  require(c.beta >= 0 && c.beta <= 1, "beta must be in [0, 1]");
  require(c.p_mix >= 0 && c.p_mix <= 1, "p_mix must be in [0, 1]");
  require(c.steps >= 1, "steps must be >= 1");
  require(c.replicates >= 1, "replicates must be >= 1");
}

OutbreakResult run_outbreak(const Graph& graph, const NeighborRanks& ranks, const OutbreakConfig& config,
                            std::uint64_t replicate_index) {
  validate_config(config);
  const std::size_t n = graph.n_nodes();
  require(n > 0, "graph has no nodes");
  require(ranks.size() == n, "neighbour ranks do not match the graph");
  auto rng = make_rng(config.master_seed, replicate_index);

  Node seed = 0;
  if (config.seed_node) {
    if (*config.seed_node >= n)
      fail(ErrorKind::invalid_argument, "seed node " + std::to_string(*config.seed_node) + " not in graph");
    seed = *config.seed_node;
  } else {
    seed = static_cast<Node>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  }

  enum : std::uint8_t { kSusceptible = 0, kInfected = 1, kPending = 2 };
  std::vector<std::uint8_t> state(n, kSusceptible);
  std::vector<std::size_t> open(n);  // susceptible neighbours left, to skip saturated infectors
  for (Node u = 0; u < n; ++u) open[u] = graph.degree(u);
  std::vector<Node> infected;
  auto infect = [&](Node v) {
    state[v] = kInfected;
    infected.push_back(v);
    for (const Node w : graph.neighbors(v)) --open[w];
  };
  infect(seed);

  OutbreakResult result;
  result.seed_node = seed;
  auto& curve = result.curve;
  curve.total_infected.assign(1, 1);
  curve.new_infected.assign(1, 1);

  std::vector<double> coef(n);
  for (Node u = 0; u < n; ++u) coef[u] = rank_coefficient(graph.degree(u), config.beta);
  std::uint64_t clipped = 0;
  std::vector<Node> fresh;
  for (std::size_t t = 1; t <= config.steps; ++t) {
    fresh.clear();
    const std::size_t active = infected.size();
    for (std::size_t i = 0; i < active; ++i) {
      const Node src = infected[i];
      if (open[src] == 0) continue;
      const auto nbrs = graph.neighbors(src);
      const auto& nbr_ranks = ranks[src];
      for (std::size_t j = 0; j < nbrs.size(); ++j) {
        const Node dst = nbrs[j];
        if (state[dst] == kInfected) continue;
        if (attempt(coef[src], nbr_ranks[j], config, rng, clipped) && state[dst] == kSusceptible) {
          state[dst] = kPending;
          fresh.push_back(dst);
        }
      }
    }
    for (const Node v : fresh) infect(v);
    curve.total_infected.push_back(infected.size());
    curve.new_infected.push_back(fresh.size());
  }
  result.clipped_attempts = clipped;
  return result;
}

OutbreakResult run_outbreak(const Graph& graph, const OutbreakConfig& config, std::uint64_t replicate_index) {
  return run_outbreak(graph, neighbor_ranks(graph), config, replicate_index);
}

EnsembleResult run_ensemble(const Graph& graph, const OutbreakConfig& config, unsigned threads) {
  validate_config(config);
  const auto ranks = neighbor_ranks(graph);
  std::vector<OutbreakResult> runs(config.replicates);
  parallel_for(config.replicates, threads,
               [&](std::size_t r) { runs[r] = run_outbreak(graph, ranks, config, r); });

  EnsembleResult ensemble;
  ensemble.p_mix = config.p_mix;
  const auto reps = static_cast<double>(config.replicates);
  auto summarize = [&](auto pick, double& mean, double& lo, double& hi) {
    double sum = 0;
    for (const auto& run : runs) sum += static_cast<double>(pick(run));
    mean = sum / reps;
    double ss = 0;
    for (const auto& run : runs) {
      const double d = static_cast<double>(pick(run)) - mean;
      ss += d * d;
    }
    const double sd = config.replicates > 1 ? std::sqrt(ss / (reps - 1)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(reps);
    lo = mean - half;
    hi = mean + half;
  };
  for (std::size_t t = 0; t <= config.steps; ++t) {
    EnsembleStep s;
    summarize([t](const OutbreakResult& r) { return r.curve.total_infected[t]; }, s.mean_total, s.total_ci_lo,
              s.total_ci_hi);
    summarize([t](const OutbreakResult& r) { return r.curve.new_infected[t]; }, s.mean_new, s.new_ci_lo,
              s.new_ci_hi);
    ensemble.steps.push_back(s);
  }
  for (const auto& run : runs) ensemble.clipped_attempts += run.clipped_attempts;
  return ensemble;
}

double expected_secondary(const Graph& graph, Node node, Regime regime, double beta,
                          const std::vector<bool>& susceptible) {
  require(node < graph.n_nodes(), "node not in graph");
  require(susceptible.size() == graph.n_nodes(), "susceptible mask does not match the graph");
  const auto nbrs = graph.neighbors(node);
  const auto ranks = ranks_of(graph, node);
  double expected = 0;
  for (std::size_t j = 0; j < nbrs.size(); ++j) {
    if (!susceptible[nbrs[j]]) continue;
    expected += regime == Regime::uniform ? beta : rank_beta(nbrs.size(), ranks[j], beta, false);
  }
  return expected;
}

std::size_t sample_secondary(const Graph& graph, const NeighborRanks& ranks, Node node,
                             const OutbreakConfig& config, Rng& rng) {
  require(node < graph.n_nodes(), "node not in graph");
  const double coef = rank_coefficient(graph.degree(node), config.beta);
  std::uint64_t clipped = 0;
  std::size_t infected = 0;
  for (const auto rank : ranks[node])
    if (attempt(coef, rank, config, rng, clipped)) ++infected;
  return infected;
}

void write_epidemic_csv(const std::string& path, std::span<const EnsembleResult> results) {
  auto out = csv::open_out(path);
  out << "p_mix,step,mean_total,total_ci_lo,total_ci_hi,mean_new,new_ci_lo,new_ci_hi,clipped_attempts\n";
  for (const auto& res : results)
    for (std::size_t t = 0; t < res.steps.size(); ++t) {
      const auto& s = res.steps[t];
      out << csv::fmt(res.p_mix) << ',' << t << ',' << csv::fmt(s.mean_total) << ',' << csv::fmt(s.total_ci_lo)
          << ',' << csv::fmt(s.total_ci_hi) << ',' << csv::fmt(s.mean_new) << ',' << csv::fmt(s.new_ci_lo) << ','
          << csv::fmt(s.new_ci_hi) << ',' << res.clipped_attempts << '\n';
    }
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

}  // namespace fpx

#include "fpx/generators.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "fpx/csv.hpp"
#include "fpx/error.hpp"
#include "fpx/rng.hpp"

namespace fpx {

LognormalDegrees LognormalDegrees::from_mode(double mode, double sigma) {
  require(mode > 0 && sigma > 0, "lognormal mode and sigma must be positive");
  return {std::log(mode) + sigma * sigma, sigma};
}

LognormalDegrees LognormalDegrees::from_mode_and_mean(double mode, double mean) {
  require(mode > 0 && mean > mode, "lognormal needs 0 < mode < mean");
  const double sigma = std::sqrt(std::log(mean / mode) / 1.5);
  return from_mode(mode, sigma);
}

DegreeHistogram parse_degree_histogram(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || csv::chomp(line) != "degree,probability")
    throw ParseError(1, "expected header 'degree,probability'");
  DegreeHistogram hist;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = csv::chomp(line);
    if (row.empty()) continue;
    const auto fields = csv::split(row);
    if (fields.size() != 2) throw ParseError(line_no, "expected 2 columns");
    const auto degree = csv::to_int(fields[0]);
    const auto prob = csv::to_double(fields[1]);
    if (!degree || *degree < 0) throw ParseError(line_no, "degree must be a non-negative integer");
    if (!prob || !(*prob >= 0) || !std::isfinite(*prob)) throw ParseError(line_no, "bad probability");
    hist.bins.emplace_back(*degree, *prob);
  }
  return hist;
}

DegreeHistogram read_degree_histogram(const std::string& path) {
  auto in = csv::open_in(path);
  return parse_degree_histogram(in);
}

namespace {

struct DegreeSampler {
  DegreeSampler(const DegreeSpec& spec, Count min_degree) : min_degree_(min_degree) {
    require(min_degree >= 0, "min_degree must be >= 0");
    if (const auto* ln = std::get_if<LognormalDegrees>(&spec)) {
      require(std::isfinite(ln->mu), "lognormal mu must be finite");
      require(ln->sigma > 0 && std::isfinite(ln->sigma), "lognormal sigma must be > 0");
      lognormal_ = std::lognormal_distribution<double>(ln->mu, ln->sigma);
      return;
    }
    const auto& hist = std::get<DegreeHistogram>(spec);
    std::vector<double> weights;
    double usable = 0;
    for (const auto& [degree, weight] : hist.bins) {
      require(degree >= 0, "histogram degree must be >= 0");
      require(weight >= 0 && std::isfinite(weight), "histogram weight must be finite and >= 0");
      values_.push_back(degree);
      weights.push_back(weight);
      if (degree >= min_degree) usable += weight;
    }
    require(usable > 0, "degree histogram has no mass at or above min_degree");
    discrete_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }

  Count operator()(Rng& rng) {
    constexpr int kMaxAttempts = 1'000'000;
    for (int i = 0; i < kMaxAttempts; ++i) {
      const Count k = values_.empty() ? static_cast<Count>(std::llround(lognormal_(rng)))
                                      : values_[discrete_(rng)];
      if (k >= min_degree_) return k;
    }
    fail(ErrorKind::invalid_argument, "degree distribution almost never reaches min_degree");
  }

 private:
  Count min_degree_;
  std::lognormal_distribution<double> lognormal_;
  std::vector<Count> values_;
  std::discrete_distribution<std::size_t> discrete_;
};

}  // namespace

DegreeSequence sample_degree_sequence(const DegreeSpec& spec, std::size_t n, Count min_degree,
                                      std::uint64_t seed) {
  require(n >= 2, "degree sequence needs n >= 2");
  DegreeSampler draw(spec, min_degree);
  auto rng = make_rng(seed, 0);
  DegreeSequence degrees(n);
  Count total = 0;
  for (auto& k : degrees) {
    k = draw(rng);
    total += k;
  }
  if (total % 2 != 0) ++degrees[0];
  return degrees;
}

void Graph::add_edge(Node u, Node v) {
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  ++n_edges_;
}

void Graph::finalize() {
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

Graph configuration_graph(std::span<const Count> degrees, std::uint64_t seed, bool simplify) {
  Count total = 0;
  for (const auto k : degrees) {
    require(k >= 0, "degrees must be non-negative");
    total += k;
  }
  if (total % 2 != 0) fail(ErrorKind::invalid_argument, "degree sum is odd");
  require(degrees.size() <= std::numeric_limits<Node>::max(), "too many nodes");

  std::vector<Node> stubs;
  stubs.reserve(static_cast<std::size_t>(total));
  for (std::size_t u = 0; u < degrees.size(); ++u) stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[u]), static_cast<Node>(u));
  auto rng = make_rng(seed, 0);
  std::shuffle(stubs.begin(), stubs.end(), rng);

  Graph graph(degrees.size());
  if (!simplify) {
    for (std::size_t i = 0; i < stubs.size(); i += 2) graph.add_edge(stubs[i], stubs[i + 1]);
    graph.finalize();
    return graph;
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i < stubs.size(); i += 2) {
    const Node u = std::min(stubs[i], stubs[i + 1]), v = std::max(stubs[i], stubs[i + 1]);
    if (u != v) keys.push_back((std::uint64_t{u} << 32) | v);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (const auto key : keys) graph.add_edge(static_cast<Node>(key >> 32), static_cast<Node>(key & 0xffffffffu));
  graph.finalize();
  return graph;
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << "# nodes " << graph.n_nodes() << '\n';
  for (Node u = 0; u < graph.n_nodes(); ++u) {
    bool skip_loop_twin = false;
    for (const Node v : graph.neighbors(u)) {
      if (v < u) continue;
      if (v == u) {
        // a self-loop is stored twice in u's own list
        skip_loop_twin = !skip_loop_twin;
        if (!skip_loop_twin) continue;
      }
      out << u << ' ' << v << '\n';
    }
  }
}

void write_edge_list(const std::string& path, const Graph& graph) {
  auto out = csv::open_out(path);
  write_edge_list(out, graph);
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

Graph parse_edge_list(std::istream& in) {
  std::vector<std::pair<Node, Node>> edges;
  std::size_t n_nodes = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = csv::chomp(line);
    if (row.empty()) continue;
    if (row.front() == '#') {
      constexpr std::string_view kNodes = "# nodes ";
      if (row.starts_with(kNodes)) {
        const auto n = csv::to_int(row.substr(kNodes.size()));
        if (!n || *n < 0) throw ParseError(line_no, "bad node count");
        n_nodes = std::max(n_nodes, static_cast<std::size_t>(*n));
      }
      continue;
    }
    const auto fields = csv::split(row, ' ');
    if (fields.size() != 2) throw ParseError(line_no, "expected 'u v'");
    const auto u = csv::to_int(fields[0]), v = csv::to_int(fields[1]);
    constexpr auto kMax = static_cast<std::int64_t>(std::numeric_limits<Node>::max()) - 1;
    if (!u || !v || *u < 0 || *v < 0 || *u > kMax || *v > kMax)
      throw ParseError(line_no, "node indices must be non-negative integers");
    edges.emplace_back(static_cast<Node>(*u), static_cast<Node>(*v));
    n_nodes = std::max<std::size_t>(n_nodes, std::max(*u, *v) + 1);
  }
  Graph graph(n_nodes);
  for (const auto& [u, v] : edges) graph.add_edge(u, v);
  graph.finalize();
  return graph;
}

Graph read_edge_list(const std::string& path) {
  auto in = csv::open_in(path);
  return parse_edge_list(in);
}

GraphPreset paper_scale_preset() {
  constexpr std::size_t kNodes = 88'137;
  constexpr std::size_t kEdges = 8'774'126;
  const double mean_degree = 2.0 * static_cast<double>(kEdges) / static_cast<double>(kNodes);
  return {LognormalDegrees::from_mode_and_mean(100.0, mean_degree), kNodes, 1, kEdges};
}

void validate_params(const SynthParams& p) {
  require(p.n_egos >= 1, "n_egos must be >= 1");
  require(p.alters_per_ego >= 1, "alters_per_ego must be >= 1");
  require(p.zipf_exponent > 0 && std::isfinite(p.zipf_exponent), "zipf_exponent must be > 0");
  require(p.base_volume > 0 && std::isfinite(p.base_volume), "base_volume must be > 0");
  require(p.coupling >= 0 && p.coupling <= 1, "coupling must be in [0, 1]");
  require(p.fraction_unavailable >= 0 && p.fraction_unavailable < 1, "fraction_unavailable must be in [0, 1)");
}

EgoDataset synth_ego_dataset(const SynthParams& params, std::uint64_t seed) {
  validate_params(params);
  DegreeSampler draw(params.degree_spec, params.min_degree);
  auto rng = make_rng(seed, 0);

  std::vector<Count> volumes(params.alters_per_ego);
  for (std::size_t r = 0; r < volumes.size(); ++r) {
    const double v = params.base_volume * std::pow(static_cast<double>(r + 1), -params.zipf_exponent);
    volumes[r] = std::max<Count>(1, std::llround(v));
  }
  const int id_width = static_cast<int>(std::to_string(params.alters_per_ego).size());

  EgoDataset dataset;
  dataset.egos.reserve(params.n_egos);
  std::vector<Count> degrees(params.alters_per_ego);
  for (std::size_t e = 0; e < params.n_egos; ++e) {
    EgoRecord ego;
    ego.ego_id = "e" + std::to_string(e + 1);
    ego.outdegree = draw(rng);
    for (auto& k : degrees) k = draw(rng);
    if (uniform01(rng) < params.coupling) std::sort(degrees.begin(), degrees.end());
    ego.alters.reserve(params.alters_per_ego);
    for (std::size_t r = 0; r < params.alters_per_ego; ++r) {
      std::string rank_tag = std::to_string(r + 1);
      rank_tag.insert(0, static_cast<std::size_t>(id_width) - rank_tag.size(), '0');
      AlterRecord alter{ego.ego_id + "_a" + rank_tag, static_cast<int>(r + 1), volumes[r], degrees[r]};
      if (uniform01(rng) < params.fraction_unavailable) alter.outdegree.reset();
      ego.alters.push_back(std::move(alter));
    }
    dataset.egos.push_back(std::move(ego));
  }
  return dataset;
}

}  // namespace fpx

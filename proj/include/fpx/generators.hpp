#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fpx/ego_model.hpp"

namespace fpx {

using Node = std::uint32_t;
using DegreeSequence = std::vector<Count>;

/// Degrees are round(X), X ~ LogNormal(mu, sigma).
struct LognormalDegrees {
  double mu = 0;
  double sigma = 1;

  /// Parameters whose continuous density peaks at `mode`.
  static LognormalDegrees from_mode(double mode, double sigma);
  /// Parameters with the given continuous mode and mean.
  static LognormalDegrees from_mode_and_mean(double mode, double mean);
};

struct DegreeHistogram {
  std::vector<std::pair<Count, double>> bins;  // (degree, probability weight)
};

using DegreeSpec = std::variant<LognormalDegrees, DegreeHistogram>;

/// CSV with header `degree,probability`. Weights need not sum to one.
DegreeHistogram parse_degree_histogram(std::istream& in);
DegreeHistogram read_degree_histogram(const std::string& path);

/// n degrees, each resampled until >= min_degree. An odd total is made even
/// by incrementing node 0.
DegreeSequence sample_degree_sequence(const DegreeSpec& spec, std::size_t n, Count min_degree,
                                      std::uint64_t seed);

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n_nodes) : adjacency_(n_nodes) {}

  std::size_t n_nodes() const { return adjacency_.size(); }
  std::size_t n_edges() const { return n_edges_; }
  std::size_t degree(Node u) const { return adjacency_[u].size(); }
  std::span<const Node> neighbors(Node u) const { return adjacency_[u]; }

  /// A self-loop appears twice in its node's list and counts as one edge.
  void add_edge(Node u, Node v);
  /// Sorts every neighbour list; call once after the last add_edge.
  void finalize();

 private:
  std::vector<std::vector<Node>> adjacency_;
  std::size_t n_edges_ = 0;
};

/// Uniform stub matching. With `simplify`, self-loops are dropped and
/// parallel edges merged, so realized degrees can fall below the request.
Graph configuration_graph(std::span<const Count> degrees, std::uint64_t seed, bool simplify = true);

/// One `u v` line per edge with u <= v, lines sorted, preceded by a
/// `# nodes N` comment so isolated trailing nodes survive a round trip.
void write_edge_list(std::ostream& out, const Graph& graph);
void write_edge_list(const std::string& path, const Graph& graph);
Graph parse_edge_list(std::istream& in);
Graph read_edge_list(const std::string& path);

/// Degree model for the 88,137-node phone-network surrogate: lognormal with
/// its peak at degree 100 and a mean that puts the stub count at 2 * 8,774,126.
struct GraphPreset {
  DegreeSpec spec;
  std::size_t n_nodes = 0;
  Count min_degree = 1;
  std::size_t target_edges = 0;
};
GraphPreset paper_scale_preset();

struct SynthParams {
  std::size_t n_egos = 1000;
  std::size_t alters_per_ego = 15;
  double zipf_exponent = 1.2;
  double base_volume = 100;
  double coupling = 0;  // per-ego probability of degree-sorted alters
  DegreeSpec degree_spec = LognormalDegrees::from_mode(100, 0.8);
  Count min_degree = 1;
  double fraction_unavailable = 0;
};

void validate_params(const SynthParams& params);

/// Synthetic egocentric dataset: Zipf contact volumes over ranks, alter
/// outdegrees sorted ascending across ranks with probability `coupling`,
/// each alter outdegree masked with probability `fraction_unavailable`.
EgoDataset synth_ego_dataset(const SynthParams& params, std::uint64_t seed);

}  // namespace fpx

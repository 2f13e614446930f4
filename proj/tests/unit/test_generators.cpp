#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "fpx/ego_model.hpp"
#include "fpx/error.hpp"
#include "fpx/generators.hpp"
#include "fpx/paradox_stats.hpp"

using namespace fpx;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected fpx::Error");
  return ErrorKind::io;
}

Count sum(const DegreeSequence& d) { return std::accumulate(d.begin(), d.end(), Count{0}); }

}  // namespace

TEST_CASE("single-valued histogram and the parity fix") {
  const DegreeSpec three = DegreeHistogram{{{3, 1.0}}};
  auto d = sample_degree_sequence(three, 5, 0, 1);
  CHECK(d == DegreeSequence{4, 3, 3, 3, 3});
  d = sample_degree_sequence(three, 4, 0, 1);
  CHECK(d == DegreeSequence{3, 3, 3, 3});
  CHECK(sample_degree_sequence(DegreeHistogram{{{1, 1.0}}}, 2, 0, 9) == DegreeSequence{1, 1});
}

TEST_CASE("degree sequences respect the floor and are even") {
  const DegreeSpec spec = LognormalDegrees::from_mode(3, 1.2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = sample_degree_sequence(spec, 101, 2, seed);
    CHECK(d.size() == 101);
    CHECK(sum(d) % 2 == 0);
    CHECK(*std::min_element(d.begin(), d.end()) >= 2);
    CHECK(sample_degree_sequence(spec, 101, 2, seed) == d);
  }
}

TEST_CASE("lognormal from mode peaks near the mode") {
  const auto d = sample_degree_sequence(LognormalDegrees::from_mode(100, 0.8), 100000, 1, 42);
  // a raw integer mode is too noisy on a flat peak; count in bins of 5
  std::map<Count, int> bins;
  for (auto k : d) ++bins[k / 5];
  const auto peak = std::max_element(bins.begin(), bins.end(), [](auto& a, auto& b) { return a.second < b.second; });
  const Count mode = peak->first * 5 + 2;
  CHECK(mode >= 70);
  CHECK(mode <= 140);
}

TEST_CASE("lognormal parameterisations") {
  const auto a = LognormalDegrees::from_mode(100, 0.8);
  CHECK(std::exp(a.mu - a.sigma * a.sigma) == doctest::Approx(100));
  const auto b = LognormalDegrees::from_mode_and_mean(100, 200);
  CHECK(std::exp(b.mu - b.sigma * b.sigma) == doctest::Approx(100));
  CHECK(std::exp(b.mu + b.sigma * b.sigma / 2) == doctest::Approx(200));
  CHECK(kind_of([] { LognormalDegrees::from_mode_and_mean(100, 50); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { LognormalDegrees::from_mode(0, 1); }) == ErrorKind::invalid_argument);
}

TEST_CASE("degree spec errors") {
  CHECK(kind_of([] { sample_degree_sequence(DegreeHistogram{{{3, 1.0}}}, 1, 0, 1); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { sample_degree_sequence(LognormalDegrees{0, 0}, 4, 0, 1); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { sample_degree_sequence(DegreeHistogram{{{3, 1.0}}}, 4, 5, 1); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { sample_degree_sequence(DegreeHistogram{{{3, -1.0}}}, 4, 0, 1); }) == ErrorKind::invalid_argument);
}

TEST_CASE("degree histogram parsing") {
  std::istringstream in("degree,probability\n1,0.5\n4,0.5\n");
  const auto h = parse_degree_histogram(in);
  REQUIRE(h.bins.size() == 2);
  CHECK(h.bins[1] == std::pair<Count, double>{4, 0.5});
  for (auto k : sample_degree_sequence(h, 50, 0, 3)) CHECK((k == 1 || k == 4 || k == 2 || k == 5));

  std::istringstream bad("degree,probability\n1,x\n");
  try {
    parse_degree_histogram(bad);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("configuration model small cases") {
  const DegreeSequence pair{1, 1};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = configuration_graph(pair, seed);
    CHECK(g.n_edges() == 1);
    REQUIRE(g.degree(0) == 1);
    CHECK(g.neighbors(0)[0] == 1);
  }
  const DegreeSequence triangle{2, 2, 2};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = configuration_graph(triangle, seed, false);
    for (Node u = 0; u < 3; ++u) CHECK(g.degree(u) == 2);
    CHECK(g.n_edges() == 3);
  }
  const DegreeSequence odd{1, 2};
  CHECK(kind_of([&] { configuration_graph(odd, 1); }) == ErrorKind::invalid_argument);
}

TEST_CASE("configuration model stub conservation and simplification") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = sample_degree_sequence(LognormalDegrees::from_mode(4, 1.0), 300, 1, seed);
    const auto raw = configuration_graph(d, seed, false);
    CHECK(raw.n_nodes() == d.size());
    for (Node u = 0; u < raw.n_nodes(); ++u) CHECK(static_cast<Count>(raw.degree(u)) == d[u]);
    CHECK(static_cast<Count>(raw.n_edges()) == sum(d) / 2);

    const auto simple = configuration_graph(d, seed, true);
    CHECK(static_cast<Count>(simple.n_edges()) <= sum(d) / 2);
    for (Node u = 0; u < simple.n_nodes(); ++u) {
      CHECK(static_cast<Count>(simple.degree(u)) <= d[u]);
      const auto nb = simple.neighbors(u);
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      CHECK(std::find(nb.begin(), nb.end(), u) == nb.end());
      for (auto v : nb) {
        const auto back = simple.neighbors(v);
        CHECK(std::binary_search(back.begin(), back.end(), u));
      }
    }
  }
}

TEST_CASE("edge list round trip") {
  const auto d = sample_degree_sequence(LognormalDegrees::from_mode(3, 1.0), 60, 0, 8);
  for (bool simplify : {true, false}) {
    auto g = configuration_graph(d, 2, simplify);
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    const auto back = parse_edge_list(in);
    REQUIRE(back.n_nodes() == g.n_nodes());
    CHECK(back.n_edges() == g.n_edges());
    for (Node u = 0; u < g.n_nodes(); ++u) {
      const auto a = g.neighbors(u), b = back.neighbors(u);
      CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
    std::ostringstream again;
    write_edge_list(again, back);
    CHECK(again.str() == out.str());
  }
  std::istringstream isolated("# nodes 5\n0 1\n");
  CHECK(parse_edge_list(isolated).n_nodes() == 5);
  std::istringstream bad("0 1\n2\n");
  CHECK_THROWS_AS(parse_edge_list(bad), ParseError);
}

TEST_CASE("paper-scale preset") {
  const auto preset = paper_scale_preset();
  CHECK(preset.n_nodes == 88137);
  CHECK(preset.target_edges == 8774126);
  const auto d = sample_degree_sequence(preset.spec, preset.n_nodes, preset.min_degree, 1);
  const double edges = static_cast<double>(sum(d)) / 2;
  CHECK(edges == doctest::Approx(8774126.0).epsilon(0.02));
  const auto g = configuration_graph(d, 1);
  CHECK(g.n_nodes() == 88137);
  CHECK(static_cast<double>(g.n_edges()) == doctest::Approx(8774126.0).epsilon(0.03));
}

TEST_CASE("synthetic datasets validate and round-trip their parameters") {
  SynthParams p;
  p.n_egos = 200;
  p.fraction_unavailable = 0.25;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto d = synth_ego_dataset(p, seed);
    CHECK(validate(d).ok());
    CHECK(d.egos.size() == 200);
    CHECK(d.dyad_count() == 200 * 15);
    CHECK(synth_ego_dataset(p, seed) == d);
    for (const auto& e : d.egos)
      for (const auto& a : e.alters)
        CHECK(a.contact_volume == std::max<Count>(1, std::llround(100 * std::pow(a.rank, -1.2))));
  }
}

TEST_CASE("full coupling orders alter degrees by rank") {
  SynthParams p;
  p.n_egos = 300;
  p.coupling = 1;
  const auto d = synth_ego_dataset(p, 4);
  for (const auto& e : d.egos)
    for (std::size_t i = 1; i < e.alters.size(); ++i) CHECK(*e.alters[i - 1].outdegree <= *e.alters[i].outdegree);
}

TEST_CASE("masking rate matches fraction_unavailable") {
  SynthParams p;
  p.n_egos = 2000;
  p.fraction_unavailable = 0.3;
  const auto d = synth_ego_dataset(p, 5);
  std::size_t masked = 0;
  for (const auto& e : d.egos) masked += e.alters.size() - e.available_count();
  const double rate = static_cast<double>(masked) / static_cast<double>(d.dyad_count());
  CHECK(rate == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("synth recovers the zipf exponent") {
  SynthParams p;
  p.n_egos = 5000;
  CHECK(std::abs(zipf_fit(synth_ego_dataset(p, 7), 1).exponent - 1.2) < 0.05);
}

TEST_CASE("synth parameter errors") {
  auto with = [](auto edit) {
    SynthParams p;
    edit(p);
    return kind_of([&] { synth_ego_dataset(p, 1); });
  };
  CHECK(with([](SynthParams& p) { p.n_egos = 0; }) == ErrorKind::invalid_argument);
  CHECK(with([](SynthParams& p) { p.alters_per_ego = 0; }) == ErrorKind::invalid_argument);
  CHECK(with([](SynthParams& p) { p.zipf_exponent = 0; }) == ErrorKind::invalid_argument);
  CHECK(with([](SynthParams& p) { p.base_volume = -1; }) == ErrorKind::invalid_argument);
  CHECK(with([](SynthParams& p) { p.coupling = 1.5; }) == ErrorKind::invalid_argument);
  CHECK(with([](SynthParams& p) { p.fraction_unavailable = 1; }) == ErrorKind::invalid_argument);
}

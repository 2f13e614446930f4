#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "fpx/fparadox.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fpx_capi_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fpx_dataset* parse(const std::string& text) {
  fpx_dataset* d = nullptr;
  REQUIRE(fpx_dataset_parse_csv(text.data(), text.size(), &d) == FPX_OK);
  return d;
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::strlen(fpx_version()) > 0);
  fpx_dataset* d = nullptr;
  CHECK(fpx_dataset_read_csv("/nonexistent/file.csv", &d) == FPX_ERR_IO);
  CHECK(d == nullptr);
  CHECK(std::string(fpx_last_error()).find("/nonexistent/file.csv") != std::string::npos);
  CHECK(fpx_dataset_read_csv(nullptr, &d) == FPX_ERR_INVALID_ARGUMENT);
  fpx_dataset_free(nullptr);
  fpx_graph_free(nullptr);
}

TEST_CASE("parse errors carry line numbers") {
  const std::string bad = "ego_id,ego_outdegree,alter_id,contact_volume,alter_outdegree\ne,1,a,x,3\n";
  fpx_dataset* d = nullptr;
  CHECK(fpx_dataset_parse_csv(bad.data(), bad.size(), &d) == FPX_ERR_PARSE);
  CHECK(std::string(fpx_last_error()).find("line 2") != std::string::npos);
}

TEST_CASE("dataset statistics through the C interface") {
  auto* d = parse(
      "ego_id,ego_outdegree,alter_id,contact_volume,alter_outdegree\n"
      "c,2,l0,5,1\nc,2,l1,4,1\nl0,1,c,3,2\nl1,1,c,3,2\n");
  fpx_validation_summary v{};
  REQUIRE(fpx_dataset_validation(d, &v) == FPX_OK);
  CHECK(v.n_egos == 3);
  CHECK(v.n_dyads == 4);
  CHECK(v.n_violations == 0);

  double prevalence = 0;
  REQUIRE(fpx_paradox_prevalence(d, FPX_AGG_MEAN, &prevalence) == FPX_OK);
  CHECK(prevalence == doctest::Approx(2.0 / 3.0));

  size_t n_ranks = 0;
  REQUIRE(fpx_dataset_dyads_per_rank(d, 0, nullptr, 0, &n_ranks) == FPX_OK);
  REQUIRE(n_ranks == 2);
  std::vector<size_t> counts(n_ranks);
  REQUIRE(fpx_dataset_dyads_per_rank(d, 0, counts.data(), counts.size(), &n_ranks) == FPX_OK);
  CHECK(counts == std::vector<size_t>{3, 1});

  fpx_rank1_comparison r1{};
  REQUIRE(fpx_rank1_comparison_compute(d, &r1) == FPX_OK);
  CHECK(r1.n_pairs == 3);
  CHECK(r1.has_wilcoxon == 1);
  fpx_dataset_free(d);
}

TEST_CASE("validation violations are exposed") {
  auto* d = parse(
      "ego_id,ego_outdegree,alter_id,contact_volume,alter_outdegree\n"
      "e,1,a,0,3\ne,1,b,2,\n");
  fpx_validation_summary v{};
  REQUIRE(fpx_dataset_validation(d, &v) == FPX_OK);
  REQUIRE(v.n_violations >= 1);
  const char* ego = nullptr;
  const char* what = nullptr;
  REQUIRE(fpx_dataset_violation(d, 0, &ego, &what) == FPX_OK);
  CHECK(std::string(ego) == "e");
  CHECK(std::strlen(what) > 0);
  CHECK(fpx_dataset_violation(d, v.n_violations, &ego, &what) == FPX_ERR_INVALID_ARGUMENT);
  fpx_dataset_free(d);
}

TEST_CASE("tests on raw arrays") {
  const double x[] = {2, 4, 7, 11, 16}, y[] = {1, 1, 1, 1, 1};
  fpx_test_result r{};
  REQUIRE(fpx_wilcoxon_signed_rank(x, y, 5, &r) == FPX_OK);
  CHECK(r.p_value == 0.0625);
  CHECK(r.method == FPX_TEST_EXACT);
  CHECK(fpx_wilcoxon_signed_rank(y, y, 5, &r) == FPX_ERR_DEGENERATE);

  const double a[] = {1, 2, 3, 4}, b[] = {1, 3, 2, 4};
  REQUIRE(fpx_spearman(a, b, 4, 100, 1, &r) == FPX_OK);
  CHECK(r.statistic == doctest::Approx(0.8));
  CHECK(r.method == FPX_TEST_PERMUTATION);
}

TEST_CASE("synthetic pipeline through the C interface") {
  TempDir tmp;
  fpx_synth_params p;
  fpx_synth_params_default(&p);
  p.n_egos = 300;
  p.coupling = 0.5;
  p.fraction_unavailable = 0.2;
  fpx_dataset* d = nullptr;
  REQUIRE(fpx_synth_dataset(&p, 4, &d) == FPX_OK);

  fpx_zipf_fit fit{};
  REQUIRE(fpx_zipf_fit_compute(d, 1, &fit) == FPX_OK);
  CHECK(fit.exponent == doctest::Approx(1.2).epsilon(0.05));
  CHECK(fpx_write_zipf_csv(&fit, tmp.file("zipf.csv").c_str()) == FPX_OK);
  CHECK(fpx_write_rank_summary_csv(d, 15, tmp.file("ranks.csv").c_str()) == FPX_OK);
  CHECK(fpx_write_decile_curves_csv(d, 1, 5, tmp.file("deciles.csv").c_str()) == FPX_OK);

  fpx_hub_options opt;
  fpx_hub_options_default(&opt);
  CHECK(opt.n_perm == 1000);
  CHECK(opt.min_available == 5);
  opt.n_perm = 200;
  opt.seed = 3;
  fpx_hub_analysis* hub = nullptr;
  REQUIRE(fpx_hub_analyze(d, &opt, &hub) == FPX_OK);
  CHECK(fpx_hub_rank_count(hub) == 15);
  CHECK(fpx_hub_eligible_egos(hub) > 0);
  fpx_hub_row row{};
  REQUIRE(fpx_hub_row_get(hub, 0, &row) == FPX_OK);
  CHECK(row.rank == 1);
  CHECK(row.null_lo <= row.null_hi);
  CHECK(fpx_hub_row_get(hub, 15, &row) == FPX_ERR_INVALID_ARGUMENT);
  fpx_test_result trend{};
  CHECK(fpx_hub_trend_test(hub, 100, 1, &trend) == FPX_OK);
  CHECK(fpx_hub_write_csv(hub, tmp.file("hub.csv").c_str()) == FPX_OK);
  CHECK(slurp(tmp.file("hub.csv")).starts_with("rank,n_dyads,n_hub,proportion,null_mean,null_lo,null_hi\n"));
  fpx_hub_free(hub);

  REQUIRE(fpx_dataset_write_csv(d, tmp.file("d.csv").c_str()) == FPX_OK);
  fpx_dataset* back = nullptr;
  REQUIRE(fpx_dataset_read_csv(tmp.file("d.csv").c_str(), &back) == FPX_OK);
  fpx_validation_summary a{}, b{};
  fpx_dataset_validation(d, &a);
  fpx_dataset_validation(back, &b);
  CHECK(a.n_dyads == b.n_dyads);
  CHECK(a.n_dyads_with_degree == b.n_dyads_with_degree);
  fpx_dataset_free(back);

  const std::string zipf = tmp.file("zipf.csv"), hubcsv = tmp.file("hub.csv");
  const char* inputs[] = {zipf.c_str(), hubcsv.c_str()};
  REQUIRE(fpx_write_report(inputs, 2, tmp.file("report.csv").c_str()) == FPX_OK);
  CHECK(slurp(tmp.file("report.csv")).starts_with("source,row,column,value\n"));

  p.coupling = 2;
  fpx_dataset* bad = nullptr;
  CHECK(fpx_synth_dataset(&p, 4, &bad) == FPX_ERR_INVALID_ARGUMENT);
  fpx_dataset_free(d);
}

TEST_CASE("graphs and outbreaks through the C interface") {
  TempDir tmp;
  fpx_degree_spec* spec = nullptr;
  REQUIRE(fpx_degree_spec_lognormal_mode(4, 0.8, &spec) == FPX_OK);
  std::vector<int64_t> degrees(500);
  REQUIRE(fpx_sample_degree_sequence(spec, degrees.size(), 1, 2, degrees.data()) == FPX_OK);
  fpx_degree_spec_free(spec);

  fpx_graph* g = nullptr;
  REQUIRE(fpx_graph_configuration(degrees.data(), degrees.size(), 2, 0, &g) == FPX_OK);
  CHECK(fpx_graph_node_count(g) == 500);
  size_t k = 0;
  REQUIRE(fpx_graph_degree(g, 17, &k) == FPX_OK);
  CHECK(static_cast<int64_t>(k) == degrees[17]);
  CHECK(fpx_graph_degree(g, 500, &k) == FPX_ERR_INVALID_ARGUMENT);

  REQUIRE(fpx_graph_write_edge_list(g, tmp.file("g.edges").c_str()) == FPX_OK);
  fpx_graph* g2 = nullptr;
  REQUIRE(fpx_graph_read_edge_list(tmp.file("g.edges").c_str(), &g2) == FPX_OK);
  CHECK(fpx_graph_edge_count(g2) == fpx_graph_edge_count(g));

  degrees[0] += 1;
  fpx_graph* odd = nullptr;
  CHECK(fpx_graph_configuration(degrees.data(), degrees.size(), 2, 1, &odd) == FPX_ERR_INVALID_ARGUMENT);

  double beta = 0;
  REQUIRE(fpx_rank_beta(3, 2, 0.01, 0, &beta) == FPX_OK);
  CHECK(beta == doctest::Approx(0.0081818181818));
  CHECK(fpx_rank_beta(3, 4, 0.01, 0, &beta) == FPX_ERR_INVALID_ARGUMENT);

  fpx_outbreak_config c;
  fpx_outbreak_config_default(&c);
  CHECK(c.beta == 0.01);
  CHECK(c.steps == 20);
  CHECK(c.replicates == 100);
  CHECK(c.seed_node < 0);
  c.beta = 0.2;
  c.replicates = 10;
  std::vector<size_t> total(c.steps + 1), fresh(c.steps + 1);
  uint64_t clipped = 0;
  REQUIRE(fpx_run_outbreak(g2, &c, 0, total.data(), fresh.data(), &clipped) == FPX_OK);
  CHECK(total[0] == 1);

  fpx_ensemble* e0 = nullptr;
  fpx_ensemble* e1 = nullptr;
  REQUIRE(fpx_run_ensemble(g2, &c, 1, &e0) == FPX_OK);
  c.p_mix = 1;
  REQUIRE(fpx_run_ensemble(g2, &c, 4, &e1) == FPX_OK);
  CHECK(fpx_ensemble_step_count(e0) == c.steps + 1);
  fpx_ensemble_step s{};
  REQUIRE(fpx_ensemble_step_get(e0, 0, &s) == FPX_OK);
  CHECK(s.mean_total == 1.0);
  CHECK(fpx_ensemble_step_get(e0, c.steps + 1, &s) == FPX_ERR_INVALID_ARGUMENT);
  const fpx_ensemble* both[] = {e0, e1};
  REQUIRE(fpx_write_epidemic_csv(both, 2, tmp.file("epi.csv").c_str()) == FPX_OK);
  const auto csv = slurp(tmp.file("epi.csv"));
  CHECK(csv.starts_with("p_mix,step,mean_total,total_ci_lo,total_ci_hi,mean_new,new_ci_lo,new_ci_hi,clipped_attempts\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 21);

  c.seed_node = 500;
  CHECK(fpx_run_outbreak(g2, &c, 0, total.data(), fresh.data(), nullptr) == FPX_ERR_INVALID_ARGUMENT);

  fpx_ensemble_free(e0);
  fpx_ensemble_free(e1);
  fpx_graph_free(g);
  fpx_graph_free(g2);
}

TEST_CASE("paper-scale preset values") {
  size_t nodes = 0, edges = 0;
  int64_t min_degree = 0;
  fpx_degree_spec* spec = nullptr;
  REQUIRE(fpx_degree_spec_paper_scale(&spec, &nodes, &min_degree, &edges) == FPX_OK);
  CHECK(nodes == 88137);
  CHECK(edges == 8774126);
  CHECK(min_degree == 1);
  fpx_degree_spec_free(spec);
}

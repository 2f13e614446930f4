#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / ("fpx_cli_" + std::to_string(::getpid()));

std::string at(const std::string& name) { return (kDir / name).string(); }

int run(const std::string& args) {
  const std::string cmd = std::string(FPX_CLI) + " " + args + " >" + at("stdout.txt") + " 2>" + at("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Re-run a command from its manifest and compare the output bytes.
void check_replay(const std::string& out, const std::string& manifest) {
  const auto before = slurp(out);
  fs::remove(out);
  REQUIRE(run("replay " + manifest) == 0);
  CHECK(slurp(out) == before);
}

struct Workspace {
  Workspace() { fs::create_directories(kDir); }
  ~Workspace() { fs::remove_all(kDir); }
} workspace;

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") != 0);
  CHECK(run("frobnicate") == 2);
  CHECK(run("synth --egos 10 --out " + at("x.csv")) == 2);  // no --seed
  CHECK(run("synth --egos ten --seed 1 --out " + at("x.csv")) == 2);
  CHECK(run("validate --in " + at("missing.csv")) == 2);
}

TEST_CASE("domain errors exit with 1") {
  CHECK(run("synth --egos 10 --coupling 3 --seed 1 --out " + at("x.csv")) == 1);
  std::ofstream(at("bad.csv")) << "ego_id,ego_outdegree,alter_id,contact_volume,alter_outdegree\ne,1,a,x,2\n";
  CHECK(run("validate --in " + at("bad.csv")) == 1);
  CHECK(slurp(at("stderr.txt")).find("line 2") != std::string::npos);
}

TEST_CASE("synth output validates, analyses run, and every run replays") {
  const auto data = at("d.csv");
  REQUIRE(run("synth --egos 600 --alters 15 --zipf 1.2 --coupling 0.8 --unavailable 0.2 --seed 7 --out " + data) == 0);
  REQUIRE(fs::exists(data + ".manifest"));
  const auto manifest = slurp(data + ".manifest");
  CHECK(manifest.find("command=synth") != std::string::npos);
  CHECK(manifest.find("master_seed=7") != std::string::npos);
  check_replay(data, data + ".manifest");

  CHECK(run("validate --in " + data + " --out " + at("violations.csv")) == 0);
  CHECK(slurp(at("violations.csv")) == "ego_id,description\n");

  REQUIRE(run("stats --in " + data + " --out-dir " + at("stats")) == 0);
  for (const char* f : {"rank_summary.csv", "decile_curves.csv", "dyads_per_rank.csv", "paradox.csv"})
    CHECK(fs::exists(kDir / "stats" / f));
  CHECK(slurp(at("stats/rank_summary.csv")).starts_with("rank,n_dyads,mean_k,median_k,q25,q75\n"));
  check_replay(at("stats/rank_summary.csv"), at("stats/stats.manifest"));

  REQUIRE(run("zipf --in " + data + " --out " + at("zipf.csv")) == 0);
  CHECK(slurp(at("zipf.csv")).starts_with("exponent,log_prefactor,r_squared,ranks_used\n"));

  REQUIRE(run("hub --in " + data + " --perms 300 --seed 11 --threads 1 --out " + at("hub1.csv")) == 0);
  REQUIRE(run("hub --in " + data + " --perms 300 --seed 11 --threads 4 --out " + at("hub4.csv")) == 0);
  CHECK(slurp(at("hub1.csv")) == slurp(at("hub4.csv")));
  check_replay(at("hub4.csv"), at("hub4.csv.manifest"));

  REQUIRE(run("report --in " + at("zipf.csv") + " --in " + at("hub1.csv") + " --out " + at("report.csv")) == 0);
  CHECK(slurp(at("report.csv")).find("zipf.csv,1,exponent,") != std::string::npos);
}

TEST_CASE("replay refuses changed inputs") {
  const auto data = at("r.csv");
  REQUIRE(run("synth --egos 50 --seed 2 --out " + data) == 0);
  REQUIRE(run("zipf --in " + data + " --out " + at("rz.csv")) == 0);
  std::ofstream(data, std::ios::app) << "extra,1,x,1,1\n";
  CHECK(run("replay " + at("rz.csv.manifest")) == 1);
}

TEST_CASE("graph and simulate") {
  const auto g = at("g.edges");
  REQUIRE(run("graph --nodes 800 --degree-mode 5 --degree-sigma 0.8 --seed 3 --out " + g) == 0);
  CHECK(slurp(g).starts_with("# nodes 800\n"));
  check_replay(g, g + ".manifest");

  const auto epi = at("epi.csv");
  REQUIRE(run("simulate --graph " + g + " --beta 0.05 --p 0 --p 0.75 --p 1 --steps 10 --replicates 20 --seed 3 --threads 1 --out " + epi) == 0);
  const auto serial = slurp(epi);
  CHECK(serial.starts_with("p_mix,step,mean_total,total_ci_lo,total_ci_hi,mean_new,new_ci_lo,new_ci_hi,clipped_attempts\n"));
  CHECK(std::count(serial.begin(), serial.end(), '\n') == 1 + 3 * 11);
  REQUIRE(run("simulate --graph " + g + " --beta 0.05 --p 0 --p 0.75 --p 1 --steps 10 --replicates 20 --seed 3 --threads 4 --out " + epi) == 0);
  CHECK(slurp(epi) == serial);
  check_replay(epi, epi + ".manifest");

  CHECK(run("simulate --graph " + g + " --p 0 --seed-node 800 --seed 1 --out " + epi) == 1);
  CHECK(run("graph --preset small --seed 1 --out " + g) == 2);
  CHECK(run("graph --nodes 10 --preset paper-scale --seed 1 --out " + g) == 2);
}

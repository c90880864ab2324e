// End-to-end checks of the command-line surface: exit codes, determinism,
// and the simulate -> estimate -> evaluate pipeline.
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <doctest.h>

#include "corrfuse/csv_io.hpp"

#ifndef CORRFUSE_CLI_PATH
#error "CORRFUSE_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("corrfuse_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(CORRFUSE_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("simulate is deterministic and rejects unknown presets") {
  TempDir tmp;
  REQUIRE(run_cli("simulate --preset exp2 --seed 1 --out-dir " + tmp.file("a")) == 0);
  REQUIRE(run_cli("simulate --preset exp2 --seed 1 --out-dir " + tmp.file("b")) == 0);
  CHECK(slurp(tmp.file("a") + "/imu.csv") == slurp(tmp.file("b") + "/imu.csv"));
  CHECK(slurp(tmp.file("a") + "/truth.csv") == slurp(tmp.file("b") + "/truth.csv"));

  CHECK(run_cli("simulate --preset exp9 --out-dir " + tmp.file("c")) == 2);
  CHECK(run_cli("simulate --out-dir " + tmp.file("c")) == 2);  // missing --preset

  const auto rows = corrfuse::load_imu_csv(tmp.file("a") + "/imu.csv");
  CHECK(rows.size() == 24001);
}

TEST_CASE("estimate runs each algorithm and the pipeline evaluates") {
  TempDir tmp;
  REQUIRE(run_cli("simulate --preset exp2 --seed 3 --out-dir " + tmp.path.string()) == 0);
  const std::string imu = tmp.file("imu.csv");
  const std::string truth = tmp.file("truth.csv");

  for (const std::string algo : {"gd", "cgd", "doe", "cdoe"}) {
    CHECK(run_cli("estimate --algo " + algo + " --input " + imu + " --out " +
                  tmp.file(algo + ".csv")) == 0);
  }
  CHECK(run_cli("evaluate --est " + tmp.file("gd.csv") + " --est " + tmp.file("cdoe.csv") +
                " --truth " + truth + " --skip-initial 1 --csv " + tmp.file("report.csv")) ==
        0);
  const std::string report = slurp(tmp.file("report.csv"));
  CHECK(report.find("algorithm,axis,rmse_deg,me_deg") == 0);
  CHECK(report.find("gd,yaw,") != std::string::npos);

  // Repeated estimate runs are bit-identical.
  CHECK(run_cli("estimate --algo gd --input " + imu + " --out " + tmp.file("gd2.csv")) == 0);
  CHECK(slurp(tmp.file("gd.csv")) == slurp(tmp.file("gd2.csv")));
}

TEST_CASE("gd and cgd agree at huge bandwidths through the CLI") {
  TempDir tmp;
  REQUIRE(run_cli("simulate --preset exp2 --seed 5 --out-dir " + tmp.path.string()) == 0);
  spit(tmp.file("cfg"), "sigma_a = 1e6\nsigma_m = 1e6\n");
  REQUIRE(run_cli("estimate --algo gd --input " + tmp.file("imu.csv") + " --config " +
                  tmp.file("cfg") + " --out " + tmp.file("gd.csv")) == 0);
  REQUIRE(run_cli("estimate --algo cgd --input " + tmp.file("imu.csv") + " --config " +
                  tmp.file("cfg") + " --out " + tmp.file("cgd.csv")) == 0);
  const auto a = corrfuse::load_trajectory_csv(tmp.file("gd.csv"));
  const auto b = corrfuse::load_trajectory_csv(tmp.file("cgd.csv"));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::abs(a[k].q.w - b[k].q.w) <= 1e-8);
    CHECK(std::abs(a[k].q.x - b[k].q.x) <= 1e-8);
    CHECK(std::abs(a[k].q.y - b[k].q.y) <= 1e-8);
    CHECK(std::abs(a[k].q.z - b[k].q.z) <= 1e-8);
  }
}

TEST_CASE("data-format failures exit with code 4") {
  TempDir tmp;
  spit(tmp.file("nonmono.csv"),
       "t,gx,gy,gz,ax,ay,az,mx,my,mz\n"
       "0,0,0,0,0,0,9.81,25,0,43\n"
       "0.01,0,0,0,0,0,9.81,25,0,43\n"
       "0.005,0,0,0,0,0,9.81,25,0,43\n");
  CHECK(run_cli("estimate --algo gd --input " + tmp.file("nonmono.csv") + " --out " +
                tmp.file("x.csv")) == 4);

  spit(tmp.file("empty.csv"), "");
  CHECK(run_cli("estimate --algo gd --input " + tmp.file("empty.csv") + " --out " +
                tmp.file("x.csv")) == 4);

  // Mismatched lengths between estimate and truth.
  spit(tmp.file("est.csv"), "t,qw,qx,qy,qz\n0,1,0,0,0\n0.01,1,0,0,0\n");
  spit(tmp.file("tru.csv"), "t,qw,qx,qy,qz\n0,1,0,0,0\n");
  CHECK(run_cli("evaluate --est " + tmp.file("est.csv") + " --truth " + tmp.file("tru.csv")) ==
        4);
}

TEST_CASE("io and usage failures use their own exit codes") {
  TempDir tmp;
  CHECK(run_cli("estimate --algo gd --input " + tmp.file("missing.csv") + " --out " +
                tmp.file("x.csv")) == 3);
  CHECK(run_cli("bench --algo gd --steps 0") == 2);
  CHECK(run_cli("bench") == 2);
  CHECK(run_cli("estimate --algo nope --input x --out y") == 2);
  CHECK(run_cli("") == 2);  // a subcommand is required

  // Config violations are usage errors.
  spit(tmp.file("cfg"), "lambda = -2\n");
  REQUIRE(run_cli("simulate --preset exp2 --seed 1 --out-dir " + tmp.path.string()) == 0);
  CHECK(run_cli("estimate --algo gd --input " + tmp.file("imu.csv") + " --config " +
                tmp.file("cfg") + " --out " + tmp.file("x.csv")) == 2);
  spit(tmp.file("cfg2"), "mystery = 1\n");
  CHECK(run_cli("estimate --algo gd --input " + tmp.file("imu.csv") + " --config " +
                tmp.file("cfg2") + " --out " + tmp.file("x.csv")) == 2);
}

TEST_CASE("tune prints a bandwidth pair") {
  TempDir tmp;
  REQUIRE(run_cli("simulate --preset exp2 --seed 7 --out-dir " + tmp.path.string()) == 0);
  const std::string out = tmp.file("tune.txt");
  const std::string cmd = std::string(CORRFUSE_CLI_PATH) + " tune --algo gd --input " +
                          tmp.file("imu.csv") + " --truth " + tmp.file("truth.csv") +
                          " --hist-out " + tmp.file("hist.csv") + " > " + out + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("sigma_a = ") != std::string::npos);
  CHECK(text.find("sigma_m = ") != std::string::npos);
  CHECK(slurp(tmp.file("hist.csv")).find("sensor,bin_lo,bin_hi,count") == 0);

  // The decoupled family tunes too, against its own run.
  CHECK(run_cli("tune --algo cdoe --input " + tmp.file("imu.csv")) == 0);
}

TEST_CASE("analyze-likelihood emits the sweep csv") {
  TempDir tmp;
  const std::string out = tmp.file("sweep.csv");
  REQUIRE(run_cli("analyze-likelihood --p-grid 0,0.2 --sigma-grid 1,5 --n 20000 --seed 2 "
                  "--out " +
                  out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("p,sigma,logl_cl,logl_ls") == 0);
  // Header plus 2x2 grid rows.
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("bench reports the timing line") {
  TempDir tmp;
  const std::string out = tmp.file("bench.txt");
  const std::string cmd = std::string(CORRFUSE_CLI_PATH) +
                          " bench --algo doe --steps 2000 --repeats 2 > " + out +
                          " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(slurp(out).find("ns/step") != std::string::npos);
}

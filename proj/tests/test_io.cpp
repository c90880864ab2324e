#include "corrfuse/csv_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "corrfuse/config.hpp"

using namespace corrfuse;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("corrfuse_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<ImuSample> sample_stream(std::size_t n) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ImuSample> out;
  for (std::size_t k = 0; k < n; ++k) {
    ImuSample s;
    s.t = static_cast<double>(k) * 0.0025;
    s.gyro = {g(rng), g(rng), g(rng)};
    s.accel = {g(rng) * 3, g(rng) * 3, 9.81 + g(rng)};
    s.mag = {25 + g(rng), g(rng), 43 + g(rng)};
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("imu csv load-save round trip is byte-stable") {
  TempDir tmp;
  const auto stream = sample_stream(200);
  const std::string a = tmp.file("a.csv");
  const std::string b = tmp.file("b.csv");
  save_imu_csv(a, stream);
  const auto loaded = load_imu_csv(a);
  REQUIRE(loaded.size() == stream.size());
  save_imu_csv(b, loaded);
  CHECK(slurp(a) == slurp(b));
  // Values survive the 9-significant-digit format.
  for (std::size_t k = 0; k < stream.size(); k += 37) {
    CHECK(loaded[k].gyro.x == doctest::Approx(stream[k].gyro.x).epsilon(1e-8));
    CHECK(loaded[k].mag.z == doctest::Approx(stream[k].mag.z).epsilon(1e-8));
  }
}

TEST_CASE("imu csv rejects malformed input with line numbers") {
  TempDir tmp;
  const std::string p = tmp.file("bad.csv");

  spit(p, "wrong,header\n1,2,3,4,5,6,7,8,9,10\n");
  CHECK_THROWS_AS(load_imu_csv(p), DataFormatError);

  spit(p, "t,gx,gy,gz,ax,ay,az,mx,my,mz\n0,1,2,3,4,5,6,7,8\n");
  try {
    load_imu_csv(p);
    FAIL("expected DataFormatError");
  } catch (const DataFormatError& e) {
    CHECK(e.line == 2);
  }

  spit(p, "t,gx,gy,gz,ax,ay,az,mx,my,mz\n0,1,2,3,4,5,6,7,8,oops\n");
  CHECK_THROWS_AS(load_imu_csv(p), DataFormatError);

  // Non-monotone timestamps name the offending line.
  spit(p,
       "t,gx,gy,gz,ax,ay,az,mx,my,mz\n"
       "0,0,0,0,0,0,9.81,25,0,43\n"
       "0.01,0,0,0,0,0,9.81,25,0,43\n"
       "0.005,0,0,0,0,0,9.81,25,0,43\n");
  try {
    load_imu_csv(p);
    FAIL("expected DataFormatError");
  } catch (const DataFormatError& e) {
    CHECK(e.line == 4);
  }

  spit(p, "");
  CHECK_THROWS_AS(load_imu_csv(p), DataFormatError);

  CHECK_THROWS_AS(load_imu_csv(tmp.file("missing.csv")), IoError);
}

TEST_CASE("trajectory csv round trip and norm policing") {
  TempDir tmp;
  const std::string p = tmp.file("traj.csv");
  std::vector<TimedQuaternion> rows;
  rows.push_back({0.0, UnitQuaternion::identity()});
  rows.push_back({0.01, UnitQuaternion(0.7, 0.7, 0.1, 0.1)});
  save_trajectory_csv(p, rows);
  const auto loaded = load_trajectory_csv(p);
  REQUIRE(loaded.size() == 2);
  CHECK(std::abs(loaded[1].q.norm() - 1.0) < 1e-12);

  // A mildly off-unit row is renormalized, a badly off-unit one rejected.
  spit(p, "t,qw,qx,qy,qz\n0,1.0005,0,0,0\n");
  CHECK(load_trajectory_csv(p)[0].q.w == doctest::Approx(1.0));
  spit(p, "t,qw,qx,qy,qz\n0,1.5,0,0,0\n");
  CHECK_THROWS_AS(load_trajectory_csv(p), DataFormatError);
}

TEST_CASE("config parsing applies defaults and rejects junk") {
  const ConfigFile cfg = ConfigFile::parse_text(
      "# gains\n"
      "lambda = 0.002\n"
      "sigma_a = 0.04\n"
      "rate = 200\n"
      "m_x = 0.6\n"
      "m_z = 0.8\n");
  const GdConfig gd = cfg.make_gd_config();
  CHECK(gd.lambda == doctest::Approx(0.002));
  CHECK(gd.sigma_a == doctest::Approx(0.04));
  CHECK(gd.sigma_m == doctest::Approx(0.01));  // family default
  CHECK(gd.dt == doctest::Approx(1.0 / 200.0));
  CHECK(gd.earth.m_x == doctest::Approx(0.6));

  const DoeConfig doe = cfg.make_doe_config();
  CHECK(doe.sigma_a == doctest::Approx(0.04));
  CHECK(doe.sigma_m == doctest::Approx(0.04));  // family default
  CHECK(doe.k_a == doctest::Approx(0.005));

  CHECK_THROWS_AS(ConfigFile::parse_text("unknown_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_text("lambda\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_text("lambda = abc\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_text("normalize_by = sometimes\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_text("rate = -5\n"), ConfigError);
}

TEST_CASE("config values are validated against filter invariants") {
  CHECK_THROWS_AS(ConfigFile::parse_text("lambda = -1\n").make_gd_config(), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_text("k_a = 1.5\n").make_doe_config(), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_text("sigma_a = 0\n").make_gd_config(), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_text("m_x = -0.5\n").make_gd_config(), ConfigError);

  // The loaded field reference is renormalized onto the unit circle.
  const ConfigFile cfg = ConfigFile::parse_text("m_x = 3\nm_z = 4\n");
  const EarthField e = cfg.make_earth();
  CHECK(std::sqrt(e.m_x * e.m_x + e.m_z * e.m_z) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(ConfigFile::parse_file("/nonexistent/path/cfg"), ConfigError);
}

TEST_CASE("format_double uses nine significant digits") {
  CHECK(format_double(0.123456789123) == "0.123456789");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-42.5) == "-42.5");
}

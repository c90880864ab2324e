#include "corrfuse/simulator.hpp"

#include <cmath>

#include <doctest.h>

#include "corrfuse/doe_filter.hpp"
#include "corrfuse/gd_filter.hpp"

using namespace corrfuse;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

double excess_kurtosis(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(v.size());
  m4 /= static_cast<double>(v.size());
  return m4 / (m2 * m2) - 3.0;
}
}  // namespace

TEST_CASE("generation is deterministic per seed") {
  const PresetExperiment p = preset_by_name("exp5");
  const SimulatedData a = generate(p.trajectory, p.disturbance, EarthField{}, 7);
  const SimulatedData b = generate(p.trajectory, p.disturbance, EarthField{}, 7);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); k += 97) {
    CHECK(a.samples[k].gyro.x == b.samples[k].gyro.x);
    CHECK(a.samples[k].accel.y == b.samples[k].accel.y);
    CHECK(a.samples[k].mag.z == b.samples[k].mag.z);
    CHECK(a.truth[k].w == b.truth[k].w);
  }
  const SimulatedData c = generate(p.trajectory, p.disturbance, EarthField{}, 8);
  CHECK(a.samples[1].gyro.x != c.samples[1].gyro.x);
}

TEST_CASE("static noise-free accel is exactly the rotated gravity direction") {
  const UnitQuaternion q0 = UnitQuaternion::from_euler(0.7, -0.2, 0.1);
  auto spec = TrajectorySpec::static_pose(q0, 1.0, 100.0);
  DisturbanceSpec dist;
  dist.noise_std = {0.0, 0.0, 0.0};
  const SimulatedData data = generate(spec, dist, EarthField{}, 1);
  const Vec3 expected = quat_to_matrix(q0) * Vec3{0, 0, 1};
  for (const auto& s : data.samples) {
    const Vec3 u = s.accel.normalized();
    CHECK(std::abs(u.x - expected.x) < 1e-15);
    CHECK(std::abs(u.y - expected.y) < 1e-15);
    CHECK(std::abs(u.z - expected.z) < 1e-15);
  }
}

TEST_CASE("constant rate integrates to the analytic yaw") {
  const double omega = 0.5;
  const double T = 10.0;
  auto spec = TrajectorySpec::constant_rate({0, 0, omega}, T, 400.0);
  DisturbanceSpec dist;
  dist.noise_std = {0.0, 0.0, 0.0};
  const SimulatedData data = generate(spec, dist, EarthField{}, 1);
  const EulerAngles e = quat_to_euler(data.truth.back());
  const double expected = std::fmod(omega * T, 2.0 * kPi);
  const double wrapped = expected > kPi ? expected - 2.0 * kPi : expected;
  CHECK(e.yaw == doctest::Approx(wrapped).epsilon(1e-9));
}

TEST_CASE("truth is consistent with the scripted angular velocity") {
  auto spec = TrajectorySpec::sinusoidal(0.5, 40.0 * kDeg, {1, 0, 0}, 5.0, 400.0);
  DisturbanceSpec dist;
  dist.noise_std = {0.0, 0.0, 0.0};
  const SimulatedData data = generate(spec, dist, EarthField{}, 1);
  const double dt = 1.0 / 400.0;
  for (std::size_t k = 1; k < data.truth.size(); ++k) {
    // Finite-difference rate from consecutive truth quaternions.
    const UnitQuaternion delta =
        quat_multiply(quat_conjugate(data.truth[k - 1]), data.truth[k]);
    const double angle = 2.0 * std::asin(std::min(1.0, delta.vec().norm()));
    const double sign = delta.w >= 0 ? 1.0 : -1.0;
    const Vec3 omega_fd = angle > 1e-12
                              ? delta.vec().normalized() * (sign * angle / dt)
                              : Vec3{};
    const double t_mid = (static_cast<double>(k) - 0.5) * dt;
    const Vec3 omega_script =
        Vec3{1, 0, 0} * (40.0 * kDeg * 2.0 * kPi * 0.5 * std::cos(2.0 * kPi * 0.5 * t_mid));
    CHECK((omega_fd - omega_script).norm() < 1e-3);
  }
}

TEST_CASE("gyro readings match the scripted rate when noise-free") {
  auto spec = TrajectorySpec::constant_rate({0.1, -0.2, 0.3}, 1.0, 400.0);
  DisturbanceSpec dist;
  dist.noise_std = {0.0, 0.0, 0.0};
  dist.gyro_bias = {0.01, 0.0, -0.02};
  const SimulatedData data = generate(spec, dist, EarthField{}, 1);
  for (const auto& s : data.samples) {
    CHECK(s.gyro.x == doctest::Approx(0.1 + 0.01));
    CHECK(s.gyro.y == doctest::Approx(-0.2));
    CHECK(s.gyro.z == doctest::Approx(0.3 - 0.02));
  }
}

TEST_CASE("spike windows make the accel residual heavy-tailed") {
  const PresetExperiment p = preset_by_name("exp1");
  const SimulatedData data = generate(p.trajectory, p.disturbance, EarthField{}, 3);
  std::vector<double> residual;
  for (std::size_t k = 0; k < data.samples.size(); ++k) {
    const Vec3 gravity = quat_to_matrix(data.truth[k]) * Vec3{0, 0, 9.81};
    const Vec3 r = data.samples[k].accel - gravity;
    residual.push_back(r.x);
    residual.push_back(r.y);
    residual.push_back(r.z);
  }
  CHECK(excess_kurtosis(residual) > 1.0);

  // The same scene without spikes is Gaussian.
  DisturbanceSpec clean = p.disturbance;
  clean.accel_spikes.clear();
  const SimulatedData base = generate(p.trajectory, clean, EarthField{}, 3);
  std::vector<double> base_residual;
  for (std::size_t k = 0; k < base.samples.size(); ++k) {
    const Vec3 gravity = quat_to_matrix(base.truth[k]) * Vec3{0, 0, 9.81};
    base_residual.push_back((base.samples[k].accel - gravity).x);
  }
  CHECK(std::abs(excess_kurtosis(base_residual)) < 0.2);
}

TEST_CASE("mixture contamination also fattens the tails") {
  auto spec = TrajectorySpec::static_pose(UnitQuaternion::identity(), 30.0, 400.0);
  DisturbanceSpec dist;
  dist.mixture_p = 0.05;
  dist.mixture_scale = 0.5;
  const SimulatedData data = generate(spec, dist, EarthField{}, 9);
  std::vector<double> residual;
  for (const auto& s : data.samples) residual.push_back(s.accel.x);
  CHECK(excess_kurtosis(residual) > 1.0);
}

TEST_CASE("presets cover the disturbance grid") {
  const auto presets = preset_experiments();
  REQUIRE(presets.size() == 5);
  CHECK(presets[1].name == "exp2");
  CHECK(presets[1].disturbance.accel_spikes.empty());
  CHECK(presets[1].disturbance.mag_segments.empty());
  CHECK_FALSE(presets[4].disturbance.accel_spikes.empty());
  CHECK_FALSE(presets[4].disturbance.mag_segments.empty());
  for (const auto& p : presets) {
    CHECK(p.trajectory.duration_s == 60.0);
    CHECK(p.trajectory.rate_hz == 400.0);
    const SimulatedData d = generate(p.trajectory, p.disturbance, EarthField{}, 1);
    CHECK(d.samples.size() == 24001);  // duration * rate + 1
    CHECK(d.truth.size() == d.samples.size());
    for (const auto& q : d.truth) CHECK(std::abs(q.norm() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(preset_by_name("exp9"), SpecValidation);
}

TEST_CASE("noise-free generation plus any filter stays within 0.1 degree") {
  PresetExperiment p = preset_by_name("exp2");
  p.trajectory.duration_s = 20.0;  // shortened, same dynamics
  p.disturbance.noise_std = {0.0, 0.0, 0.0};
  const SimulatedData data = generate(p.trajectory, p.disturbance, EarthField{}, 1);

  auto check_error = [&](const std::vector<UnitQuaternion>& traj) {
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
      worst = std::max(worst, quat_angle_between(traj[k], data.truth[k]));
    CHECK(worst < 0.1 * kDeg);
  };
  GdConfig gd_cfg;
  DoeConfig doe_cfg;
  check_error(run_gd(data.samples, gd_cfg));
  check_error(run_cgd(data.samples, gd_cfg));
  check_error(run_doe(data.samples, doe_cfg).trajectory);
  check_error(run_cdoe(data.samples, doe_cfg).trajectory);
}

TEST_CASE("disturbance windows are validated") {
  auto spec = TrajectorySpec::static_pose(UnitQuaternion::identity(), 10.0, 100.0);
  DisturbanceSpec dist;
  dist.accel_spikes.push_back({5.0, 15.0, {1, 0, 0}});  // past the end
  CHECK_THROWS_AS(generate(spec, dist, EarthField{}, 1), SpecValidation);
}

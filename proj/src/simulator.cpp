#include "corrfuse/simulator.hpp"

#include <cmath>
#include <random>

namespace corrfuse {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Vec3 window_sum(const std::vector<DisturbanceWindow>& windows, double t) {
  Vec3 sum;
  for (const auto& w : windows)
    if (t >= w.t_start && t < w.t_end) sum += w.value;
  return sum;
}

UnitQuaternion exp_increment(const Vec3& omega, double dt) {
  const double angle = omega.norm() * dt;
  if (angle < 1e-14) return UnitQuaternion::identity();
  return UnitQuaternion::from_axis_angle(angle, omega);
}

}  // namespace

TrajectorySpec TrajectorySpec::static_pose(const UnitQuaternion& q, double duration,
                                           double rate) {
  TrajectorySpec s;
  s.kind = Kind::kStatic;
  s.q0 = q;
  s.duration_s = duration;
  s.rate_hz = rate;
  return s;
}

TrajectorySpec TrajectorySpec::constant_rate(const Vec3& omega, double duration,
                                             double rate) {
  TrajectorySpec s;
  s.kind = Kind::kConstantRate;
  s.omega = omega;
  s.duration_s = duration;
  s.rate_hz = rate;
  return s;
}

TrajectorySpec TrajectorySpec::sinusoidal(double freq_hz, double amplitude_rad,
                                          const Vec3& axis, double duration, double rate) {
  TrajectorySpec s;
  s.kind = Kind::kSinusoidal;
  s.freq_hz = freq_hz;
  s.amplitude_rad = amplitude_rad;
  s.axis = axis.normalized();
  s.duration_s = duration;
  s.rate_hz = rate;
  return s;
}

TrajectorySpec TrajectorySpec::scripted(std::vector<Keyframe> keys, double duration,
                                        double rate) {
  TrajectorySpec s;
  s.kind = Kind::kScripted;
  s.keyframes = std::move(keys);
  s.duration_s = duration;
  s.rate_hz = rate;
  return s;
}

void TrajectorySpec::validate() const {
  if (!(rate_hz > 0.0)) throw SpecValidation("TrajectorySpec: rate must be positive");
  if (!(duration_s > 0.0)) throw SpecValidation("TrajectorySpec: duration must be positive");
  if (kind == Kind::kSinusoidal && !(freq_hz > 0.0))
    throw SpecValidation("TrajectorySpec: sinusoidal frequency must be positive");
  if (kind == Kind::kScripted) {
    if (keyframes.empty()) throw SpecValidation("TrajectorySpec: scripted needs keyframes");
    for (std::size_t i = 1; i < keyframes.size(); ++i)
      if (!(keyframes[i].t > keyframes[i - 1].t))
        throw SpecValidation("TrajectorySpec: keyframe times must increase");
  }
}

Vec3 TrajectorySpec::mean_omega(double t0, double t1) const {
  const double dt = t1 - t0;
  switch (kind) {
    case Kind::kStatic:
      return {};
    case Kind::kConstantRate:
      return omega;
    case Kind::kSinusoidal: {
      // angle(t) = A sin(2 pi f t) about a fixed axis, so the average rate
      // over the interval is the exact angle increment divided by dt.
      const double a0 = amplitude_rad * std::sin(kTwoPi * freq_hz * t0);
      const double a1 = amplitude_rad * std::sin(kTwoPi * freq_hz * t1);
      return axis * ((a1 - a0) / dt);
    }
    case Kind::kScripted: {
      // Piecewise-constant rate sampled at the interval midpoint.
      const double tm = 0.5 * (t0 + t1);
      Vec3 w = keyframes.front().omega;
      for (const auto& k : keyframes) {
        if (k.t <= tm) w = k.omega;
        else break;
      }
      return w;
    }
  }
  return {};
}

void DisturbanceSpec::validate(double duration_s) const {
  auto check_windows = [&](const std::vector<DisturbanceWindow>& ws, const char* what) {
    for (const auto& w : ws) {
      if (!(w.t_end > w.t_start) || w.t_start < 0.0 || w.t_end > duration_s)
        throw SpecValidation(std::string("DisturbanceSpec: bad ") + what + " window");
    }
  };
  check_windows(accel_spikes, "accel spike");
  check_windows(mag_segments, "mag segment");
  if (noise_std.gyro < 0.0 || noise_std.accel < 0.0 || noise_std.mag < 0.0)
    throw SpecValidation("DisturbanceSpec: noise stds must be nonnegative");
  if (!(mixture_p >= 0.0 && mixture_p < 0.5))
    throw SpecValidation("DisturbanceSpec: mixture_p must lie in [0, 0.5)");
}

SimulatedData generate(const TrajectorySpec& spec, const DisturbanceSpec& dist,
                       const EarthField& earth, std::uint64_t seed) {
  spec.validate();
  dist.validate(spec.duration_s);

  const double dt = 1.0 / spec.rate_hz;
  const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.rate_hz)) + 1;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-20.0, 20.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto noise = [&](double std_dev) { return std_dev > 0.0 ? std_dev * gauss(rng) : 0.0; };

  SimulatedData out;
  out.samples.reserve(n);
  out.truth.reserve(n);

  UnitQuaternion q = spec.q0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    Vec3 omega_bar;
    if (k == 0) {
      omega_bar = spec.mean_omega(0.0, dt);  // rate entering the first interval
    } else {
      omega_bar = spec.mean_omega(t - dt, t);
      q = quat_multiply(q, exp_increment(omega_bar, dt));
    }
    out.truth.push_back(q);

    const RotationMatrix R = quat_to_matrix(q);
    ImuSample s;
    s.t = t;
    s.gyro = omega_bar + dist.gyro_bias +
             Vec3{noise(dist.noise_std.gyro), noise(dist.noise_std.gyro),
                  noise(dist.noise_std.gyro)};
    s.accel = R * Vec3{0, 0, earth.gravity_mag} + window_sum(dist.accel_spikes, t) +
              Vec3{noise(dist.noise_std.accel), noise(dist.noise_std.accel),
                   noise(dist.noise_std.accel)};
    if (dist.mixture_p > 0.0 && dist.mixture_scale != 0.0) {
      for (double* a : {&s.accel.x, &s.accel.y, &s.accel.z})
        if (coin(rng) < dist.mixture_p) *a += dist.mixture_scale * uniform(rng);
    }
    s.mag = R * (earth.mag_ref() * kMagFieldScale) + window_sum(dist.mag_segments, t) +
            Vec3{noise(dist.noise_std.mag), noise(dist.noise_std.mag),
                 noise(dist.noise_std.mag)};
    out.samples.push_back(s);
  }
  return out;
}

std::vector<PresetExperiment> preset_experiments() {
  constexpr double kDuration = 60.0;
  constexpr double kRate = 400.0;
  constexpr double kDeg = 0.017453292519943295;

  const std::vector<DisturbanceWindow> spikes = {
      {5.0, 6.0, {4.0, -3.0, 2.5}},  {15.0, 16.0, {-3.5, 4.0, 2.0}},
      {25.0, 26.0, {4.0, 2.5, -3.0}}, {35.0, 36.0, {-2.5, -4.0, 3.0}},
      {45.0, 46.0, {3.0, 4.0, 2.0}},  {55.0, 56.0, {4.0, -2.0, -3.5}}};
  const std::vector<DisturbanceWindow> field_offsets = {
      {10.0, 13.0, {35.0, -30.0, 20.0}}, {20.0, 23.0, {-30.0, 35.0, -15.0}},
      {30.0, 33.0, {25.0, 30.0, -20.0}}, {40.0, 43.0, {-35.0, -25.0, 15.0}},
      {50.0, 53.0, {30.0, -35.0, 25.0}}};

  std::vector<PresetExperiment> presets;

  {
    PresetExperiment e;
    e.name = "exp1";
    e.trajectory = TrajectorySpec::static_pose(
        UnitQuaternion::from_euler(30.0 * kDeg, 0.0, 5.0 * kDeg), kDuration, kRate);
    e.disturbance.accel_spikes = spikes;
    e.disturbance.mag_segments = field_offsets;
    presets.push_back(std::move(e));
  }
  {
    PresetExperiment e;
    e.name = "exp2";
    e.trajectory =
        TrajectorySpec::sinusoidal(0.1, 60.0 * kDeg, {0, 0, 1}, kDuration, kRate);
    presets.push_back(std::move(e));
  }
  {
    PresetExperiment e;
    e.name = "exp3";
    e.trajectory =
        TrajectorySpec::sinusoidal(0.5, 40.0 * kDeg, {1, 0, 0}, kDuration, kRate);
    e.disturbance.accel_spikes = spikes;
    presets.push_back(std::move(e));
  }
  {
    PresetExperiment e;
    e.name = "exp4";
    e.trajectory =
        TrajectorySpec::sinusoidal(0.1, 60.0 * kDeg, {0, 0, 1}, kDuration, kRate);
    e.disturbance.mag_segments = field_offsets;
    presets.push_back(std::move(e));
  }
  {
    PresetExperiment e;
    e.name = "exp5";
    e.trajectory =
        TrajectorySpec::sinusoidal(0.5, 40.0 * kDeg, {1, 0, 0}, kDuration, kRate);
    e.disturbance.accel_spikes = spikes;
    e.disturbance.mag_segments = field_offsets;
    presets.push_back(std::move(e));
  }
  return presets;
}

PresetExperiment preset_by_name(const std::string& name) {
  for (auto& p : preset_experiments())
    if (p.name == name) return p;
  throw SpecValidation("unknown preset '" + name + "' (expected exp1..exp5)");
}

}  // namespace corrfuse

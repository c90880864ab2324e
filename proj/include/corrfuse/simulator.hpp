// Synthetic ground-truth trajectories and IMU measurement synthesis with
// Gaussian noise, gyro bias, external-acceleration spikes, and magnetic
// disturbance segments. Truth is integrated by exact per-step axis-angle
// exponentials so simulator error never masks filter error.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrfuse/quat.hpp"
#include "corrfuse/sensor_models.hpp"

namespace corrfuse {

struct TrajectorySpec {
  enum class Kind { kStatic, kConstantRate, kSinusoidal, kScripted };

  struct Keyframe {
    double t{0.0};
    Vec3 omega;  // rad/s, held until the next keyframe
  };

  Kind kind{Kind::kStatic};
  double duration_s{60.0};
  double rate_hz{400.0};
  UnitQuaternion q0;

  Vec3 omega;           // kConstantRate
  double freq_hz{0.0};  // kSinusoidal
  double amplitude_rad{0.0};
  Vec3 axis{0, 0, 1};
  std::vector<Keyframe> keyframes;  // kScripted

  static TrajectorySpec static_pose(const UnitQuaternion& q, double duration, double rate);
  static TrajectorySpec constant_rate(const Vec3& omega, double duration, double rate);
  static TrajectorySpec sinusoidal(double freq_hz, double amplitude_rad, const Vec3& axis,
                                   double duration, double rate);
  static TrajectorySpec scripted(std::vector<Keyframe> keys, double duration, double rate);

  void validate() const;
  /// Angular velocity averaged over (t0, t1]; the exact per-step rotation
  /// increment is this value times the interval length.
  Vec3 mean_omega(double t0, double t1) const;
};

struct DisturbanceWindow {
  double t_start{0.0};
  double t_end{0.0};
  Vec3 value;  // additive, sensor frame
};

struct NoiseStd {
  double gyro{0.005};  // rad/s
  double accel{0.05};  // m/s^2
  double mag{0.3};     // a.u.
};

struct DisturbanceSpec {
  std::vector<DisturbanceWindow> accel_spikes;  // m/s^2
  std::vector<DisturbanceWindow> mag_segments;  // a.u.
  Vec3 gyro_bias;                               // rad/s, constant
  NoiseStd noise_std;
  // Optional contaminated accel noise: with probability mixture_p each accel
  // axis also draws mixture_scale * U(-20,20).
  double mixture_p{0.0};
  double mixture_scale{0.0};

  void validate(double duration_s) const;
};

struct SimulatedData {
  std::vector<ImuSample> samples;
  std::vector<UnitQuaternion> truth;
};

/// duration*rate + 1 samples on a uniform grid, deterministic per seed.
SimulatedData generate(const TrajectorySpec& spec, const DisturbanceSpec& dist,
                       const EarthField& earth, std::uint64_t seed);

struct PresetExperiment {
  std::string name;
  TrajectorySpec trajectory;
  DisturbanceSpec disturbance;
};

/// Five desk-scale disturbance regimes: exp1 static with alternating spike
/// and field windows, exp2 slow rotation with no disturbance, exp3 fast
/// rotation with spikes, exp4 slow rotation with field offsets, exp5 fast
/// rotation with both.
std::vector<PresetExperiment> preset_experiments();

/// Lookup by name ("exp1".."exp5"); throws SpecValidation on unknown names.
PresetExperiment preset_by_name(const std::string& name);

constexpr double kMagFieldScale = 50.0;  // a.u.; filters normalize anyway

struct SpecValidation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace corrfuse

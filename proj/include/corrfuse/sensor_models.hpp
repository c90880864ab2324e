// Sensor sample types, frame conventions, earth-field references, and the
// ecompass initial-orientation solve.
//
// Frame convention used everywhere in this library: quat_to_matrix(q) rotates
// earth-frame vectors into the sensor frame, and a resting sensor at the
// identity orientation reads a normalized accelerometer vector of [0, 0, 1].
#pragma once

#include <stdexcept>

#include "corrfuse/quat.hpp"

namespace corrfuse {

/// One timestamped IMU record: gyro rad/s, accel m/s^2, mag in arbitrary units.
struct ImuSample {
  double t{0.0};
  Vec3 gyro;
  Vec3 accel;
  Vec3 mag;
};

/// Earth-frame reference fields. The magnetic reference [m_x, 0, m_z] is a
/// unit vector tilted by the local dip angle, m_x > 0.
struct EarthField {
  double gravity_mag{9.81};
  double m_x{0.5};
  double m_z{0.8660254037844386};

  EarthField() = default;
  EarthField(double gravity, double mx, double mz);

  static EarthField from_dip_angle(double dip_rad, double gravity = 9.81);
  Vec3 mag_ref() const { return {m_x, 0.0, m_z}; }
};

struct NormalizedMeasurements {
  Vec3 acc_unit;
  Vec3 mag_unit;
  bool valid_acc{false};
  bool valid_mag{false};
};

/// Unit-normalizes accel and mag; a norm below 1e-8 marks the vector invalid
/// instead of throwing.
NormalizedMeasurements normalize_measurements(const ImuSample& s);

/// Closed-form initial orientation from one accel/mag pair: builds the
/// earth-to-sensor matrix column-wise from the measured vertical and the
/// horizontal field direction, re-orthonormalizes, and converts to a
/// quaternion. Throws DegenerateField when the two vectors are near-parallel.
UnitQuaternion ecompass_init(const Vec3& acc_unit, const Vec3& mag_unit);

struct DegenerateField : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace corrfuse

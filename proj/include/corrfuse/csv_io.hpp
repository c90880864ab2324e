// CSV ingestion and serialization for IMU logs and quaternion trajectories.
//
// imu log:    header "t,gx,gy,gz,ax,ay,az,mx,my,mz", t seconds strictly
//             increasing, gyro rad/s, accel m/s^2, mag a.u.
// trajectory: header "t,qw,qx,qy,qz", unit quaternions (renormalized on load,
//             rejected when the row norm strays past 1e-3).
// Floats are written with 9 significant digits, LF line endings.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrfuse/quat.hpp"
#include "corrfuse/sensor_models.hpp"

namespace corrfuse {

struct TimedQuaternion {
  double t{0.0};
  UnitQuaternion q;
};

std::vector<ImuSample> load_imu_csv(const std::string& path);
void save_imu_csv(const std::string& path, std::span<const ImuSample> samples);

std::vector<TimedQuaternion> load_trajectory_csv(const std::string& path);
void save_trajectory_csv(const std::string& path, std::span<const TimedQuaternion> rows);

/// Formats one double with 9 significant digits.
std::string format_double(double v);

/// File missing/unreadable/unwritable.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally bad content; message names the offending 1-based line.
struct DataFormatError : std::runtime_error {
  std::size_t line;
  DataFormatError(const std::string& what, std::size_t line_no)
      : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"),
        line(line_no) {}
};

}  // namespace corrfuse

// Per-axis orientation error statistics against ground truth.
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrfuse/quat.hpp"

namespace corrfuse {

/// Wrapped per-axis Euler differences in degrees, plus the total rotation
/// angle between the two orientations as an Euler-free supplement.
struct EulerErrorStreams {
  std::vector<double> yaw_deg;
  std::vector<double> roll_deg;
  std::vector<double> pitch_deg;
  std::vector<double> total_deg;
};

struct AxisStats {
  double rmse_deg{0.0};
  double max_err_deg{0.0};
};

struct ErrorReport {
  std::string algorithm;
  AxisStats yaw, roll, pitch;
  AxisStats total;  // rotation-angle metric
  std::size_t sample_count{0};
};

/// Difference of intrinsic Z-Y-X angles per axis, each wrapped to
/// (-180, 180]. Throws LengthMismatch on unequal stream lengths.
EulerErrorStreams euler_errors(std::span<const UnitQuaternion> est,
                               std::span<const UnitQuaternion> truth);

/// RMSE and maximum absolute error per axis over the streams.
ErrorReport summarize(const EulerErrorStreams& errors, const std::string& algorithm = "");

/// Wraps an angle difference in degrees to (-180, 180].
double wrap_degrees(double deg);

struct MetricsLengthMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MetricsEmptyInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace corrfuse

// Decoupled orientation estimation: analytic angle-axis corrections where the
// magnetometer rotates the estimate only about the estimated gravity axis,
// plus gyro-bias tracking. The correntropy variant shrinks the correction
// angles by Gaussian kernel weights before applying them.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "corrfuse/gd_filter.hpp"
#include "corrfuse/quat.hpp"
#include "corrfuse/sensor_models.hpp"

namespace corrfuse {

struct DoeConfig {
  double k_a{0.005};      // accel correction weight, (0,1)
  double k_m{0.005};      // mag correction weight, (0,1)
  double k_ba{0.001};     // bias gain fed by the accel correction, [0,1)
  double k_bm{0.001};     // bias gain fed by the mag correction, [0,1)
  double sigma_a{0.05};   // kernel bandwidth on the accel correction angle, rad
  double sigma_m{0.04};   // kernel bandwidth on the mag correction angle, rad
  EarthField earth;
  double dt{1.0 / 400.0};

  void validate() const;
};

struct DoeState {
  UnitQuaternion q;
  Vec3 bias;  // gyroscope bias estimate, rad/s
};

/// Correction as a rotation angle about a unit axis in the sensor frame.
/// Aligned or anti-aligned vector pairs leave the axis undefined: valid is
/// false and the correction is skipped.
struct AngleAxisCorrection {
  double angle{0.0};  // rad, [0, pi]
  Vec3 axis;          // unit when valid; oriented so the rotation moves the
                      // predicted direction toward the measured one
  bool valid{false};
};

/// Angle between the predicted gravity direction R(q-)*ez and the measured
/// accel direction, with the axis that rotates prediction onto measurement.
AngleAxisCorrection accel_correction(const UnitQuaternion& q_minus, const Vec3& acc_unit);

/// Heading-only correction: the measured mag direction is projected onto the
/// plane orthogonal to the estimated gravity axis before comparing against
/// the predicted horizontal reference R(q_ga)*ex, so the resulting axis is
/// parallel to the estimated gravity axis.
AngleAxisCorrection mag_correction(const UnitQuaternion& q_ga, const Vec3& mag_unit);

DoeState doe_step(const DoeState& state, const ImuSample& sample, const DoeConfig& cfg);
DoeState cdoe_step(const DoeState& state, const ImuSample& sample, const DoeConfig& cfg);

struct DoeRun {
  std::vector<UnitQuaternion> trajectory;
  std::vector<Vec3> bias;
};

DoeRun run_doe(std::span<const ImuSample> samples, const DoeConfig& cfg,
               std::optional<UnitQuaternion> init = std::nullopt);
DoeRun run_cdoe(std::span<const ImuSample> samples, const DoeConfig& cfg,
                std::optional<UnitQuaternion> init = std::nullopt);

}  // namespace corrfuse

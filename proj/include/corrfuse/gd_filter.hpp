// Gradient-descent orientation filter and its correntropy-weighted variant.
//
// Both share the gyro propagation, the stacked accel/mag error vector and its
// analytic Jacobian; the weighted variant attenuates each error channel by a
// Gaussian kernel before forming the gradient.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "corrfuse/quat.hpp"
#include "corrfuse/sensor_models.hpp"

namespace corrfuse {

enum class GradientNorm { kUnweighted, kWeighted };

struct GdConfig {
  // The normalized-gradient update moves by up to ~2*lambda rad every step,
  // noise or not, so lambda bounds both the pull-in rate and the steady
  // jitter floor.
  double lambda{5e-4};
  double sigma_a{0.02};   // kernel bandwidth, accel error channels
  double sigma_m{0.01};   // kernel bandwidth, mag error channels
  EarthField earth;
  double dt{1.0 / 400.0};
  GradientNorm normalize_by{GradientNorm::kUnweighted};

  void validate() const;
};

struct GdState {
  UnitQuaternion q;
  long step_count{0};
};

/// Stacked error vector [E_g; E_m]; entries 0 and 4 are identically zero
/// (scalar parts of the two error quaternions).
using ErrorVector8 = std::array<double, 8>;

/// 8x4 Jacobian of the error vector with respect to the quaternion
/// components, rows matching ErrorVector8.
using ErrorJacobian = std::array<std::array<double, 4>, 8>;

/// One explicit-Euler gyro integration step, renormalized.
UnitQuaternion propagate_gyro(const UnitQuaternion& q_prev, const Vec3& gyro, double dt);

/// Predicted-minus-measured gravity and magnetic directions as quadratic
/// polynomials in the quaternion components. Invalid accel or mag zeroes the
/// corresponding four channels.
ErrorVector8 measurement_error(const UnitQuaternion& q_minus,
                               const NormalizedMeasurements& m, const EarthField& earth);

ErrorJacobian error_jacobian(const UnitQuaternion& q_minus, const EarthField& earth);

GdState gd_step(const GdState& state, const ImuSample& sample, const GdConfig& cfg);

/// Same update with a diagonal kernel-weight matrix on the error channels;
/// the step direction is weighted but, by default, scaled by the unweighted
/// gradient norm.
GdState cgd_step(const GdState& state, const ImuSample& sample, const GdConfig& cfg);

std::vector<UnitQuaternion> run_gd(std::span<const ImuSample> samples, const GdConfig& cfg,
                                   std::optional<UnitQuaternion> init = std::nullopt);
std::vector<UnitQuaternion> run_cgd(std::span<const ImuSample> samples, const GdConfig& cfg,
                                    std::optional<UnitQuaternion> init = std::nullopt);

struct EmptyStream : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonMonotoneTime : std::runtime_error {
  std::size_t index;  // offending sample position
  NonMonotoneTime(const std::string& what, std::size_t idx)
      : std::runtime_error(what), index(idx) {}
};

/// Throws EmptyStream / NonMonotoneTime; shared by every run_* driver.
void validate_stream(std::span<const ImuSample> samples);

/// Initial orientation: the caller's override, else ecompass on the first
/// sample, else identity when that sample is degenerate.
UnitQuaternion initial_orientation(std::span<const ImuSample> samples,
                                   std::optional<UnitQuaternion> init);

}  // namespace corrfuse

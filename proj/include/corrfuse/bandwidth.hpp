// Kernel bandwidth selection from the residual spread of a disturbance-free
// run: sigma = 2 * residual standard deviation, so nominal residuals stay in
// the near-quadratic region of the loss and anything past 3 sigma has
// negligible influence.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "corrfuse/quat.hpp"
#include "corrfuse/sensor_models.hpp"

namespace corrfuse {

enum class FilterFamily { kGradientDescent, kDecoupled };

struct ResidualStats {
  double d_a{0.0};       // pooled accel residual std
  double d_m{0.0};       // pooled mag residual std
  std::size_t n{0};      // samples inspected
};

struct BandwidthSuggestion {
  double sigma_a{0.0};
  double sigma_m{0.0};
  bool ok_a{false};  // false when the accel residuals were all zero
  bool ok_m{false};
};

struct ResidualOptions {
  // Median-absolute-deviation estimate (x1.4826) instead of the plain
  // second moment, for when the reference run is not perfectly clean.
  bool robust{false};
};

/// Residuals per family: error-vector channels for the gradient-descent
/// filters, correction angles for the decoupled ones. Spread is the second
/// moment about zero, pooled per sensor across channels and samples.
ResidualStats collect_residuals(std::span<const UnitQuaternion> trajectory,
                                std::span<const ImuSample> samples,
                                const EarthField& earth, FilterFamily family,
                                const ResidualOptions& opts = {});

/// The 2x rule. Zero spread cannot be scaled into a bandwidth; the matching
/// ok flag is cleared and the caller must choose manually.
BandwidthSuggestion suggest_bandwidths(const ResidualStats& stats);

/// Histogram of residual values, for inspection output.
struct ResidualHistogram {
  double lo{0.0}, hi{0.0};
  std::vector<std::size_t> counts;
};

ResidualHistogram histogram(std::span<const double> values, int bins);

/// Raw per-sensor residual streams (same definitions as collect_residuals).
struct ResidualStreams {
  std::vector<double> accel;
  std::vector<double> mag;
};
ResidualStreams residual_streams(std::span<const UnitQuaternion> trajectory,
                                 std::span<const ImuSample> samples,
                                 const EarthField& earth, FilterFamily family);

struct InsufficientData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct LengthMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace corrfuse

#include "corrfuse/bandwidth.hpp"

#include <algorithm>
#include <cmath>

#include "corrfuse/doe_filter.hpp"
#include "corrfuse/gd_filter.hpp"

namespace corrfuse {

namespace {

constexpr std::size_t kMinSamples = 30;

double second_moment_spread(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

double mad_spread(std::vector<double> v) {
  if (v.empty()) return 0.0;
  for (double& x : v) x = std::abs(x);
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return 1.4826 * v[mid];
}

}  // namespace

ResidualStreams residual_streams(std::span<const UnitQuaternion> trajectory,
                                 std::span<const ImuSample> samples,
                                 const EarthField& earth, FilterFamily family) {
  if (trajectory.size() != samples.size())
    throw LengthMismatch("residual_streams: trajectory and samples differ in length");
  ResidualStreams out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const NormalizedMeasurements m = normalize_measurements(samples[k]);
    if (family == FilterFamily::kGradientDescent) {
      const ErrorVector8 E = measurement_error(trajectory[k], m, earth);
      if (m.valid_acc) {
        out.accel.push_back(E[1]);
        out.accel.push_back(E[2]);
        out.accel.push_back(E[3]);
      }
      if (m.valid_mag) {
        out.mag.push_back(E[5]);
        out.mag.push_back(E[6]);
        out.mag.push_back(E[7]);
      }
    } else {
      if (m.valid_acc) out.accel.push_back(accel_correction(trajectory[k], m.acc_unit).angle);
      if (m.valid_mag) out.mag.push_back(mag_correction(trajectory[k], m.mag_unit).angle);
    }
  }
  return out;
}

ResidualStats collect_residuals(std::span<const UnitQuaternion> trajectory,
                                std::span<const ImuSample> samples,
                                const EarthField& earth, FilterFamily family,
                                const ResidualOptions& opts) {
  if (samples.size() < kMinSamples)
    throw InsufficientData("collect_residuals: need at least 30 samples");
  const ResidualStreams streams = residual_streams(trajectory, samples, earth, family);
  ResidualStats stats;
  stats.n = samples.size();
  if (opts.robust) {
    stats.d_a = mad_spread(streams.accel);
    stats.d_m = mad_spread(streams.mag);
  } else {
    stats.d_a = second_moment_spread(streams.accel);
    stats.d_m = second_moment_spread(streams.mag);
  }
  return stats;
}

BandwidthSuggestion suggest_bandwidths(const ResidualStats& stats) {
  if (stats.n < kMinSamples)
    throw InsufficientData("suggest_bandwidths: statistics from too few samples");
  BandwidthSuggestion s;
  if (stats.d_a > 0.0) {
    s.sigma_a = 2.0 * stats.d_a;
    s.ok_a = true;
  }
  if (stats.d_m > 0.0) {
    s.sigma_m = 2.0 * stats.d_m;
    s.ok_m = true;
  }
  return s;
}

ResidualHistogram histogram(std::span<const double> values, int bins) {
  ResidualHistogram h;
  if (values.empty() || bins < 1) return h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  h.lo = *lo_it;
  h.hi = *hi_it;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = h.hi - h.lo;
  for (double v : values) {
    int idx = width > 0.0 ? static_cast<int>((v - h.lo) / width * bins) : 0;
    idx = std::clamp(idx, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

}  // namespace corrfuse

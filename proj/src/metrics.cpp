#include "corrfuse/metrics.hpp"

#include <cmath>

namespace corrfuse {

namespace {
constexpr double kRadToDeg = 57.29577951308232;

AxisStats axis_stats(const std::vector<double>& e) {
  AxisStats s;
  double sum_sq = 0.0;
  for (double v : e) {
    sum_sq += v * v;
    s.max_err_deg = std::max(s.max_err_deg, std::abs(v));
  }
  s.rmse_deg = std::sqrt(sum_sq / static_cast<double>(e.size()));
  return s;
}
}  // namespace

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w > 180.0) w -= 360.0;
  if (w <= -180.0) w += 360.0;
  return w;
}

EulerErrorStreams euler_errors(std::span<const UnitQuaternion> est,
                               std::span<const UnitQuaternion> truth) {
  if (est.size() != truth.size())
    throw MetricsLengthMismatch("euler_errors: stream lengths differ");
  EulerErrorStreams out;
  out.yaw_deg.reserve(est.size());
  out.roll_deg.reserve(est.size());
  out.pitch_deg.reserve(est.size());
  out.total_deg.reserve(est.size());
  for (std::size_t k = 0; k < est.size(); ++k) {
    const EulerAngles a = quat_to_euler(est[k]);
    const EulerAngles b = quat_to_euler(truth[k]);
    out.yaw_deg.push_back(wrap_degrees((a.yaw - b.yaw) * kRadToDeg));
    out.roll_deg.push_back(wrap_degrees((a.roll - b.roll) * kRadToDeg));
    out.pitch_deg.push_back(wrap_degrees((a.pitch - b.pitch) * kRadToDeg));
    out.total_deg.push_back(quat_angle_between(est[k], truth[k]) * kRadToDeg);
  }
  return out;
}

ErrorReport summarize(const EulerErrorStreams& errors, const std::string& algorithm) {
  if (errors.yaw_deg.empty()) throw MetricsEmptyInput("summarize: empty error streams");
  ErrorReport r;
  r.algorithm = algorithm;
  r.sample_count = errors.yaw_deg.size();
  r.yaw = axis_stats(errors.yaw_deg);
  r.roll = axis_stats(errors.roll_deg);
  r.pitch = axis_stats(errors.pitch_deg);
  r.total = axis_stats(errors.total_deg);
  return r;
}

}  // namespace corrfuse

#include "corrfuse/doe_filter.hpp"

#include <algorithm>
#include <cmath>

#include "corrfuse/correntropy.hpp"
#include "corrfuse/log.hpp"

namespace corrfuse {

namespace {

constexpr double kAxisFloor = 1e-8;

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0))
    throw std::invalid_argument(std::string("DoeConfig: ") + name + " must lie in (0,1)");
}

AngleAxisCorrection correction_between(const Vec3& measured, const Vec3& predicted) {
  AngleAxisCorrection c;
  const double d = std::clamp(predicted.dot(measured), -1.0, 1.0);
  c.angle = std::acos(d);
  const Vec3 axis_raw = measured.cross(predicted);
  const double n = axis_raw.norm();
  if (n < kAxisFloor) {
    // Aligned: nothing to correct. Anti-aligned: the axis is undefined and a
    // half-turn guess is unrecoverable, so the step is skipped instead.
    if (c.angle > 3.0) log_debug("anti-aligned correction skipped");
    return c;
  }
  c.axis = axis_raw * (1.0 / n);
  c.valid = true;
  return c;
}

UnitQuaternion apply_correction(const UnitQuaternion& q, double angle, const Vec3& axis) {
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return quat_multiply(q, UnitQuaternion(std::cos(h), s * axis.x, s * axis.y, s * axis.z));
}

DoeState stepped(const DoeState& state, const ImuSample& sample, const DoeConfig& cfg,
                 bool weighted) {
  const Vec3 gyro_corrected = sample.gyro - state.bias;
  const UnitQuaternion q_minus = propagate_gyro(state.q, gyro_corrected, cfg.dt);
  const NormalizedMeasurements m = normalize_measurements(sample);

  UnitQuaternion q_ga = q_minus;
  Vec3 bias = state.bias;

  if (m.valid_acc) {
    const AngleAxisCorrection ca = accel_correction(q_minus, m.acc_unit);
    if (ca.valid) {
      const double angle_a =
          weighted ? cfg.k_a * gaussian_kernel(ca.angle, cfg.sigma_a) * ca.angle
                   : cfg.k_a * ca.angle;
      q_ga = apply_correction(q_minus, angle_a, ca.axis);
      bias -= cfg.k_ba * (weighted ? angle_a : ca.angle) * ca.axis;
    }
  }

  UnitQuaternion q_new = q_ga;
  if (m.valid_mag) {
    const AngleAxisCorrection cm = mag_correction(q_ga, m.mag_unit);
    if (cm.valid) {
      const double angle_m =
          weighted ? cfg.k_m * gaussian_kernel(cm.angle, cfg.sigma_m) * cm.angle
                   : cfg.k_m * cm.angle;
      q_new = apply_correction(q_ga, angle_m, cm.axis);
      bias -= cfg.k_bm * (weighted ? angle_m : cm.angle) * cm.axis;
    }
  }

  return {q_new, bias};
}

template <typename Step>
DoeRun run_filter(std::span<const ImuSample> samples, const DoeConfig& cfg,
                  std::optional<UnitQuaternion> init, Step step) {
  cfg.validate();
  validate_stream(samples);
  DoeRun out;
  out.trajectory.reserve(samples.size());
  out.bias.reserve(samples.size());
  DoeState state{initial_orientation(samples, init), Vec3{}};
  out.trajectory.push_back(state.q);
  out.bias.push_back(state.bias);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    state = step(state, samples[k], cfg);
    out.trajectory.push_back(state.q);
    out.bias.push_back(state.bias);
  }
  return out;
}

}  // namespace

void DoeConfig::validate() const {
  require_open_unit(k_a, "k_a");
  require_open_unit(k_m, "k_m");
  if (!(k_ba >= 0.0 && k_ba < 1.0) || !(k_bm >= 0.0 && k_bm < 1.0))
    throw std::invalid_argument("DoeConfig: bias gains must lie in [0,1)");
  if (!(sigma_a > 0.0) || !(sigma_m > 0.0))
    throw std::invalid_argument("DoeConfig: bandwidths must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("DoeConfig: dt must be positive");
}

AngleAxisCorrection accel_correction(const UnitQuaternion& q_minus, const Vec3& acc_unit) {
  const Vec3 r_a = quat_to_matrix(q_minus) * Vec3{0, 0, 1};
  return correction_between(acc_unit, r_a);
}

AngleAxisCorrection mag_correction(const UnitQuaternion& q_ga, const Vec3& mag_unit) {
  const RotationMatrix R = quat_to_matrix(q_ga);
  const Vec3 r_a = R * Vec3{0, 0, 1};
  const Vec3 m_horiz = mag_unit - mag_unit.dot(r_a) * r_a;
  const double hn = m_horiz.norm();
  if (hn < kAxisFloor) return {};  // field parallel to gravity: heading unobservable
  const Vec3 r_m = R * Vec3{1, 0, 0};
  return correction_between(m_horiz * (1.0 / hn), r_m);
}

DoeState doe_step(const DoeState& state, const ImuSample& sample, const DoeConfig& cfg) {
  return stepped(state, sample, cfg, false);
}

DoeState cdoe_step(const DoeState& state, const ImuSample& sample, const DoeConfig& cfg) {
  return stepped(state, sample, cfg, true);
}

DoeRun run_doe(std::span<const ImuSample> samples, const DoeConfig& cfg,
               std::optional<UnitQuaternion> init) {
  return run_filter(samples, cfg, init, doe_step);
}

DoeRun run_cdoe(std::span<const ImuSample> samples, const DoeConfig& cfg,
                std::optional<UnitQuaternion> init) {
  return run_filter(samples, cfg, init, cdoe_step);
}

}  // namespace corrfuse

#include "corrfuse/gd_filter.hpp"

#include <cmath>

#include "corrfuse/correntropy.hpp"
#include "corrfuse/log.hpp"

namespace corrfuse {

namespace {

constexpr double kGradientFloor = 1e-12;

std::array<double, 4> gradient(const ErrorJacobian& J, const ErrorVector8& E) {
  std::array<double, 4> g{0, 0, 0, 0};
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 4; ++c) g[c] += J[r][c] * E[r];
  return g;
}

double norm4(const std::array<double, 4>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

GdState descend(const GdState& state, const ImuSample& sample, const GdConfig& cfg,
                bool weighted) {
  const UnitQuaternion q_minus = propagate_gyro(state.q, sample.gyro, cfg.dt);
  const NormalizedMeasurements m = normalize_measurements(sample);
  const ErrorVector8 E = measurement_error(q_minus, m, cfg.earth);
  const ErrorJacobian J = error_jacobian(q_minus, cfg.earth);

  const std::array<double, 4> grad_plain = gradient(J, E);
  const double plain_norm = norm4(grad_plain);
  if (plain_norm < kGradientFloor) return {q_minus, state.step_count + 1};

  std::array<double, 4> step_dir = grad_plain;
  double denom = plain_norm;
  if (weighted) {
    ErrorVector8 weighted_error = E;
    for (int i = 1; i <= 3; ++i) weighted_error[i] *= gaussian_kernel(E[i], cfg.sigma_a);
    for (int i = 5; i <= 7; ++i) weighted_error[i] *= gaussian_kernel(E[i], cfg.sigma_m);
    step_dir = gradient(J, weighted_error);
    if (cfg.normalize_by == GradientNorm::kWeighted) {
      const double wn = norm4(step_dir);
      if (wn < kGradientFloor) return {q_minus, state.step_count + 1};
      denom = wn;
    }
  }

  const double scale = cfg.lambda / denom;
  UnitQuaternion q = UnitQuaternion(q_minus.w - scale * step_dir[0],
                                    q_minus.x - scale * step_dir[1],
                                    q_minus.y - scale * step_dir[2],
                                    q_minus.z - scale * step_dir[3]);
  return {q, state.step_count + 1};
}

template <typename Step>
std::vector<UnitQuaternion> run_filter(std::span<const ImuSample> samples,
                                       const GdConfig& cfg,
                                       std::optional<UnitQuaternion> init, Step step) {
  cfg.validate();
  validate_stream(samples);
  std::vector<UnitQuaternion> traj;
  traj.reserve(samples.size());
  GdState state{initial_orientation(samples, init), 0};
  traj.push_back(state.q);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    state = step(state, samples[k], cfg);
    traj.push_back(state.q);
  }
  return traj;
}

}  // namespace

void GdConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("GdConfig: lambda must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("GdConfig: dt must be positive");
  if (!(sigma_a > 0.0) || !(sigma_m > 0.0))
    throw std::invalid_argument("GdConfig: bandwidths must be positive");
}

UnitQuaternion propagate_gyro(const UnitQuaternion& q_prev, const Vec3& gyro, double dt) {
  const auto dq = quat_multiply_raw({q_prev.w, q_prev.x, q_prev.y, q_prev.z},
                                    {0.0, gyro.x, gyro.y, gyro.z});
  return UnitQuaternion(q_prev.w + 0.5 * dq[0] * dt, q_prev.x + 0.5 * dq[1] * dt,
                        q_prev.y + 0.5 * dq[2] * dt, q_prev.z + 0.5 * dq[3] * dt);
}

ErrorVector8 measurement_error(const UnitQuaternion& q_minus,
                               const NormalizedMeasurements& m, const EarthField& earth) {
  const double q1 = q_minus.w, q2 = q_minus.x, q3 = q_minus.y, q4 = q_minus.z;
  const double mx = earth.m_x, mz = earth.m_z;
  ErrorVector8 E{0, 0, 0, 0, 0, 0, 0, 0};
  if (m.valid_acc) {
    E[1] = 2.0 * (q2 * q4 - q1 * q3) - m.acc_unit.x;
    E[2] = 2.0 * (q1 * q2 + q3 * q4) - m.acc_unit.y;
    E[3] = 2.0 * (0.5 - q2 * q2 - q3 * q3) - m.acc_unit.z;
  }
  if (m.valid_mag) {
    E[5] = 2.0 * mx * (0.5 - q3 * q3 - q4 * q4) + 2.0 * mz * (q2 * q4 - q1 * q3) -
           m.mag_unit.x;
    E[6] = 2.0 * mx * (q2 * q3 - q1 * q4) + 2.0 * mz * (q1 * q2 + q3 * q4) - m.mag_unit.y;
    E[7] = 2.0 * mx * (q2 * q4 + q1 * q3) + 2.0 * mz * (0.5 - q2 * q2 - q3 * q3) -
           m.mag_unit.z;
  }
  return E;
}

ErrorJacobian error_jacobian(const UnitQuaternion& q_minus, const EarthField& earth) {
  const double q1 = q_minus.w, q2 = q_minus.x, q3 = q_minus.y, q4 = q_minus.z;
  const double mx = earth.m_x, mz = earth.m_z;
  ErrorJacobian J{};
  J[1] = {-2 * q3, 2 * q4, -2 * q1, 2 * q2};
  J[2] = {2 * q2, 2 * q1, 2 * q4, 2 * q3};
  J[3] = {0, -4 * q2, -4 * q3, 0};
  J[5] = {-2 * mz * q3, 2 * mz * q4, -4 * mx * q3 - 2 * mz * q1, -4 * mx * q4 + 2 * mz * q2};
  J[6] = {-2 * mx * q4 + 2 * mz * q2, 2 * mx * q3 + 2 * mz * q1, 2 * mx * q2 + 2 * mz * q4,
          -2 * mx * q1 + 2 * mz * q3};
  J[7] = {2 * mx * q3, 2 * mx * q4 - 4 * mz * q2, 2 * mx * q1 - 4 * mz * q3, 2 * mx * q2};
  return J;
}

GdState gd_step(const GdState& state, const ImuSample& sample, const GdConfig& cfg) {
  return descend(state, sample, cfg, false);
}

GdState cgd_step(const GdState& state, const ImuSample& sample, const GdConfig& cfg) {
  return descend(state, sample, cfg, true);
}

std::vector<UnitQuaternion> run_gd(std::span<const ImuSample> samples, const GdConfig& cfg,
                                   std::optional<UnitQuaternion> init) {
  return run_filter(samples, cfg, init, gd_step);
}

std::vector<UnitQuaternion> run_cgd(std::span<const ImuSample> samples, const GdConfig& cfg,
                                    std::optional<UnitQuaternion> init) {
  return run_filter(samples, cfg, init, cgd_step);
}

void validate_stream(std::span<const ImuSample> samples) {
  if (samples.empty()) throw EmptyStream("sample stream is empty");
  for (std::size_t k = 1; k < samples.size(); ++k) {
    if (!(samples[k].t > samples[k - 1].t))
      throw NonMonotoneTime("timestamps must be strictly increasing at sample " +
                                std::to_string(k),
                            k);
  }
}

UnitQuaternion initial_orientation(std::span<const ImuSample> samples,
                                   std::optional<UnitQuaternion> init) {
  if (init) return *init;
  const NormalizedMeasurements m = normalize_measurements(samples.front());
  if (m.valid_acc && m.valid_mag) {
    try {
      return ecompass_init(m.acc_unit, m.mag_unit);
    } catch (const DegenerateField&) {
      log_info("initial sample has parallel accel/mag, starting from identity");
    }
  } else {
    log_info("initial sample degenerate, starting from identity");
  }
  return UnitQuaternion::identity();
}

}  // namespace corrfuse

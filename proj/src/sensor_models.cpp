#include "corrfuse/sensor_models.hpp"

#include <cmath>

namespace corrfuse {

EarthField::EarthField(double gravity, double mx, double mz)
    : gravity_mag(gravity), m_x(mx), m_z(mz) {
  if (!(gravity > 0.0)) throw std::invalid_argument("EarthField: gravity must be positive");
  if (!(m_x > 0.0)) throw std::invalid_argument("EarthField: m_x must be positive");
  const double n = std::sqrt(m_x * m_x + m_z * m_z);
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::invalid_argument("EarthField: invalid magnetic reference");
  m_x /= n;
  m_z /= n;
}

EarthField EarthField::from_dip_angle(double dip_rad, double gravity) {
  return EarthField(gravity, std::cos(dip_rad), std::sin(dip_rad));
}

NormalizedMeasurements normalize_measurements(const ImuSample& s) {
  NormalizedMeasurements out;
  const double an = s.accel.norm();
  if (an >= 1e-8 && s.accel.finite()) {
    out.acc_unit = s.accel * (1.0 / an);
    out.valid_acc = true;
  }
  const double mn = s.mag.norm();
  if (mn >= 1e-8 && s.mag.finite()) {
    out.mag_unit = s.mag * (1.0 / mn);
    out.valid_mag = true;
  }
  return out;
}

UnitQuaternion ecompass_init(const Vec3& acc_unit, const Vec3& mag_unit) {
  if (std::abs(acc_unit.dot(mag_unit)) > 1.0 - 1e-6)
    throw DegenerateField("ecompass_init: accel and mag directions are parallel");

  // Columns of the earth-to-sensor matrix: the measured vertical is R*ez and
  // the horizontal field component fixes R*ex, R*ey.
  const Vec3 col3 = acc_unit.normalized();
  Vec3 col2 = acc_unit.cross(mag_unit);
  const double c2n = col2.norm();
  if (c2n < 1e-8) throw DegenerateField("ecompass_init: degenerate horizontal direction");
  col2 = col2 * (1.0 / c2n);
  const Vec3 col1 = col2.cross(col3);  // unit by construction, completes det +1

  RotationMatrix R;
  R.m = {col1.x, col2.x, col3.x,
         col1.y, col2.y, col3.y,
         col1.z, col2.z, col3.z};
  return matrix_to_quat(R);
}

}  // namespace corrfuse

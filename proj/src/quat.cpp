#include "corrfuse/quat.hpp"

#include <algorithm>

namespace corrfuse {

void UnitQuaternion::renormalize() {
  const double n = norm();
  if (n < 1e-12) throw std::invalid_argument("UnitQuaternion: near-zero norm");
  w /= n; x /= n; y /= n; z /= n;
}

UnitQuaternion UnitQuaternion::from_axis_angle(double angle, const Vec3& axis) {
  const Vec3 u = axis.normalized();
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return make_raw(std::cos(h), s * u.x, s * u.y, s * u.z);
}

UnitQuaternion UnitQuaternion::from_euler(double yaw, double pitch, double roll) {
  const UnitQuaternion qz = from_axis_angle(yaw, {0, 0, 1});
  const UnitQuaternion qy = from_axis_angle(pitch, {0, 1, 0});
  const UnitQuaternion qx = from_axis_angle(roll, {1, 0, 0});
  return quat_multiply(quat_multiply(qz, qy), qx);
}

std::array<double, 4> quat_multiply_raw(const std::array<double, 4>& p,
                                        const std::array<double, 4>& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

UnitQuaternion quat_multiply(const UnitQuaternion& p, const UnitQuaternion& q) {
  const auto r = quat_multiply_raw({p.w, p.x, p.y, p.z}, {q.w, q.x, q.y, q.z});
  UnitQuaternion out = UnitQuaternion::make_raw(r[0], r[1], r[2], r[3]);
  out.renormalize();
  return out;
}

UnitQuaternion quat_conjugate(const UnitQuaternion& q) { return q.conjugate(); }

RotationMatrix quat_to_matrix(const UnitQuaternion& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  RotationMatrix R;
  R.m = {1 - 2 * (y * y + z * z), 2 * (x * y + w * z),     2 * (x * z - w * y),
         2 * (x * y - w * z),     1 - 2 * (x * x + z * z), 2 * (y * z + w * x),
         2 * (x * z + w * y),     2 * (y * z - w * x),     1 - 2 * (x * x + y * y)};
  return R;
}

RotationMatrix RotationMatrix::transposed() const {
  RotationMatrix t;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
  return t;
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& o) const {
  RotationMatrix out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(r, k) * o(k, c);
      out(r, c) = s;
    }
  return out;
}

double RotationMatrix::orthonormality_error() const {
  const RotationMatrix g = transposed() * (*this);
  double sum = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const double d = g(r, c) - (r == c ? 1.0 : 0.0);
      sum += d * d;
    }
  return std::sqrt(sum);
}

double RotationMatrix::determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

UnitQuaternion matrix_to_quat(const RotationMatrix& R) {
  if (R.orthonormality_error() > 1e-3)
    throw NonOrthonormalInput("matrix_to_quat: input is not a rotation matrix");

  // Shepperd's method on the transpose (quat_to_matrix convention), picking
  // the largest diagonal pivot for numerical stability.
  const double r00 = R(0, 0), r11 = R(1, 1), r22 = R(2, 2);
  const double tr = r00 + r11 + r22;
  double w, x, y, z;
  if (tr > 0.0) {
    double s = std::sqrt(tr + 1.0) * 2.0;
    w = 0.25 * s;
    x = (R(1, 2) - R(2, 1)) / s;
    y = (R(2, 0) - R(0, 2)) / s;
    z = (R(0, 1) - R(1, 0)) / s;
  } else if (r00 >= r11 && r00 >= r22) {
    double s = std::sqrt(1.0 + r00 - r11 - r22) * 2.0;
    w = (R(1, 2) - R(2, 1)) / s;
    x = 0.25 * s;
    y = (R(1, 0) + R(0, 1)) / s;
    z = (R(2, 0) + R(0, 2)) / s;
  } else if (r11 >= r22) {
    double s = std::sqrt(1.0 + r11 - r00 - r22) * 2.0;
    w = (R(2, 0) - R(0, 2)) / s;
    x = (R(1, 0) + R(0, 1)) / s;
    y = 0.25 * s;
    z = (R(2, 1) + R(1, 2)) / s;
  } else {
    double s = std::sqrt(1.0 + r22 - r00 - r11) * 2.0;
    w = (R(0, 1) - R(1, 0)) / s;
    x = (R(2, 0) + R(0, 2)) / s;
    y = (R(2, 1) + R(1, 2)) / s;
    z = 0.25 * s;
  }
  return UnitQuaternion(w, x, y, z).canonical();
}

EulerAngles quat_to_euler(const UnitQuaternion& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  EulerAngles e;
  const double sp = 2.0 * (w * y - x * z);
  // Flag when |pitch| is within 1e-6 rad of pi/2, i.e. |sin(pitch)| >= cos(1e-6).
  const double lock_threshold = std::cos(1e-6);
  if (std::abs(sp) >= lock_threshold) {
    // Yaw and roll are no longer separable; put the whole twist into yaw.
    e.gimbal_lock = true;
    e.pitch = std::asin(std::clamp(sp, -1.0, 1.0));
    e.roll = 0.0;
    // Sensor-to-earth matrix entries -R12, R22 survive at the singularity.
    e.yaw = std::atan2(-2.0 * (x * y - w * z), 1.0 - 2.0 * (x * x + z * z));
    return e;
  }
  e.yaw = std::atan2(2.0 * (x * y + w * z), 1.0 - 2.0 * (y * y + z * z));
  e.pitch = std::asin(sp);
  e.roll = std::atan2(2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y));
  return e;
}

double quat_angle_between(const UnitQuaternion& p, const UnitQuaternion& q) {
  // atan2 form stays accurate near zero where acos(dot) loses half the digits.
  const auto r = quat_multiply_raw({p.w, -p.x, -p.y, -p.z}, {q.w, q.x, q.y, q.z});
  const double vec_norm = std::sqrt(r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
  return 2.0 * std::atan2(vec_norm, std::abs(r[0]));
}

}  // namespace corrfuse

// Quaternion and small-vector arithmetic shared by all estimators.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace corrfuse {

struct Vec3 {
  double x{0.0}, y{0.0}, z{0.0};

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    if (n <= 0.0) throw std::invalid_argument("Vec3::normalized: zero vector");
    return {x / n, y / n, z / n};
  }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Orientation quaternion, scalar-first [w, x, y, z], Hamilton convention.
/// Kept unit-norm by every public constructor and operation.
struct UnitQuaternion {
  double w{1.0}, x{0.0}, y{0.0}, z{0.0};

  UnitQuaternion() = default;
  UnitQuaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {
    renormalize();
  }

  static UnitQuaternion identity() { return {}; }

  /// Rotation by `angle` radians about `axis` (need not be unit length).
  static UnitQuaternion from_axis_angle(double angle, const Vec3& axis);

  /// Intrinsic Z-Y-X composition of yaw, pitch, roll (radians).
  static UnitQuaternion from_euler(double yaw, double pitch, double roll);

  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  void renormalize();

  UnitQuaternion conjugate() const { return make_raw(w, -x, -y, -z); }

  /// q and -q encode the same rotation; use at comparison boundaries only.
  UnitQuaternion canonical() const { return w < 0.0 ? make_raw(-w, -x, -y, -z) : *this; }

  // Internal: trusts the caller to pass unit components.
  static UnitQuaternion make_raw(double w_, double x_, double y_, double z_) {
    UnitQuaternion q;
    q.w = w_; q.x = x_; q.y = y_; q.z = z_;
    return q;
  }
};

/// 3x3 rotation matrix, row-major.
struct RotationMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  RotationMatrix transposed() const;
  RotationMatrix operator*(const RotationMatrix& o) const;

  /// Frobenius norm of R^T R - I; zero for a perfect rotation.
  double orthonormality_error() const;
  double determinant() const;
};

struct EulerAngles {
  double yaw{0.0};    // rad, (-pi, pi]
  double pitch{0.0};  // rad, [-pi/2, pi/2]
  double roll{0.0};   // rad, (-pi, pi]
  bool gimbal_lock{false};
};

/// Hamilton product p (x) q, renormalized.
UnitQuaternion quat_multiply(const UnitQuaternion& p, const UnitQuaternion& q);

UnitQuaternion quat_conjugate(const UnitQuaternion& q);

/// Matrix form of v_sensor = q* (x) [0, v_earth] (x) q: rotates earth-frame
/// vectors into the sensor frame. Composition rule under this convention:
/// quat_to_matrix(p (x) q) = quat_to_matrix(q) * quat_to_matrix(p).
RotationMatrix quat_to_matrix(const UnitQuaternion& q);

/// Inverse of quat_to_matrix up to sign; returned with w >= 0.
/// Throws NonOrthonormalInput when ||R^T R - I||_F > 1e-3.
UnitQuaternion matrix_to_quat(const RotationMatrix& R);

/// Intrinsic Z-Y-X (yaw-pitch-roll) angles of the orientation. Near
/// |pitch| = pi/2 the split between yaw and roll degenerates; the returned
/// angles then use the roll = 0 convention and gimbal_lock is set.
EulerAngles quat_to_euler(const UnitQuaternion& q);

/// Hamilton product of raw component quadruples, no renormalization.
/// Needed where the right factor is not unit (gyro propagation increment).
std::array<double, 4> quat_multiply_raw(const std::array<double, 4>& p,
                                        const std::array<double, 4>& q);

/// Rotation angle (radians, [0, pi]) separating two orientations.
double quat_angle_between(const UnitQuaternion& p, const UnitQuaternion& q);

struct NonOrthonormalInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace corrfuse

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>

namespace amsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Rotation-vector exponential map.
inline Quat quat_exp(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z());
    q.normalize();
    return q;
  }
  const Vec3 axis = rotvec / angle;
  return Quat(Eigen::AngleAxisd(angle, axis));
}

// Log map; returns the rotation vector of the shortest rotation.
inline Vec3 quat_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const double vnorm = q.vec().norm();
  if (vnorm < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(vnorm, q.w());
  return (angle / vnorm) * q.vec();
}

inline Quat quat_from_yaw(double yaw) {
  return Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()));
}

// R = Rz(yaw) * Ry(pitch) * Rx(roll)
inline Quat quat_from_rpy(double roll, double pitch, double yaw) {
  return Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
              Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
              Eigen::AngleAxisd(roll, Vec3::UnitX()));
}

// ZYX extraction matching quat_from_rpy.
inline Vec3 rpy_from_quat(const Quat& q) {
  const Mat3 r = q.normalized().toRotationMatrix();
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  double roll, yaw;
  if (std::abs(r(2, 0)) < 1.0 - 1e-9) {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  } else {
    // Gimbal lock: fold everything into roll.
    roll = std::atan2(-r(1, 2), r(1, 1));
    yaw = 0.0;
  }
  return {roll, pitch, yaw};
}

// Rigid transform: position + unit quaternion. Acts on points as q*p + t.
struct Pose {
  Vec3 position{Vec3::Zero()};
  Quat orientation{Quat::Identity()};

  static Pose Identity() { return Pose{}; }

  Mat3 rotation() const { return orientation.toRotationMatrix(); }

  Vec3 transform(const Vec3& p) const { return orientation * p + position; }
  Vec3 rotate(const Vec3& v) const { return orientation * v; }

  Pose inverse() const {
    const Quat qi = orientation.conjugate();
    return Pose{qi * (-position), qi};
  }

  void normalize() { orientation.normalize(); }
};

inline Pose operator*(const Pose& a, const Pose& b) {
  Pose out{a.position + a.orientation * b.position,
           (a.orientation * b.orientation).normalized()};
  return out;
}

inline double position_distance(const Pose& a, const Pose& b) {
  return (a.position - b.position).norm();
}

inline double orientation_distance(const Pose& a, const Pose& b) {
  return quat_log(a.orientation.conjugate() * b.orientation).norm();
}

}  // namespace amsim

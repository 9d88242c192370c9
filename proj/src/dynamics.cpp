#include "amsim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace amsim {

namespace {

// 4x8 mixing matrix: total thrust, roll, pitch, yaw per unit rotor thrust.
Eigen::Matrix<double, 4, 8> mixing_matrix(const VehicleParams& p) {
  Eigen::Matrix<double, 4, 8> b;
  for (int i = 0; i < 8; ++i) {
    b(0, i) = 1.0;
    b(1, i) = p.rotor_positions[i].y();
    b(2, i) = -p.rotor_positions[i].x();
    b(3, i) = p.rotor_spin[i] * p.torque_thrust_ratio;
  }
  return b;
}

}  // namespace

std::optional<RigidBodyState> step_dynamics(const RigidBodyState& state, const WrenchCommand& cmd,
                                            const VehicleParams& params, double dt,
                                            const BodyWrench& disturbance) {
  const double thrust = std::max(cmd.thrust, 0.0);

  const Vec3 body_force(disturbance.force.x(), disturbance.force.y(),
                        disturbance.force.z() + thrust);
  const Vec3 accel = state.pose.rotate(body_force) / params.mass +
                     Vec3(0.0, 0.0, -params.gravity);

  const Vec3 ang_mom = params.inertia * state.angular_rate;
  const Vec3 torque = cmd.moments + disturbance.moment - state.angular_rate.cross(ang_mom);
  const Vec3 ang_accel = params.inertia.ldlt().solve(torque);

  RigidBodyState next = state;
  next.velocity += accel * dt;
  next.angular_rate += ang_accel * dt;
  next.pose.position += next.velocity * dt;
  next.pose.orientation =
      (state.pose.orientation * quat_exp(next.angular_rate * dt)).normalized();

  if (!next.finite()) return std::nullopt;
  return next;
}

WrenchCommand wrench_from_rotors(const std::array<double, 8>& thrusts,
                                 const VehicleParams& params) {
  const auto b = mixing_matrix(params);
  Eigen::Matrix<double, 8, 1> f;
  for (int i = 0; i < 8; ++i) f(i) = thrusts[i];
  const Eigen::Vector4d w = b * f;
  WrenchCommand out;
  out.thrust = w(0);
  out.moments = w.tail<3>();
  return out;
}

RotorAllocation allocate_rotors(const WrenchCommand& cmd, const VehicleParams& params) {
  const auto b = mixing_matrix(params);
  Eigen::Vector4d w;
  w << cmd.thrust, cmd.moments.x(), cmd.moments.y(), cmd.moments.z();

  // minimum-norm solution f = B^T (B B^T)^-1 w
  const Eigen::Matrix4d gram = b * b.transpose();
  const Eigen::Matrix<double, 8, 1> f = b.transpose() * gram.ldlt().solve(w);

  RotorAllocation out;
  for (int i = 0; i < 8; ++i) {
    const double clamped = std::clamp(f(i), 0.0, params.rotor_thrust_limit);
    if (std::abs(clamped - f(i)) > 1e-12) out.saturated = true;
    out.thrusts[i] = clamped;
  }
  return out;
}

Quat attitude_from_thrust_dir(const Vec3& thrust_dir_world, double yaw) {
  Vec3 zb = thrust_dir_world;
  if (zb.norm() < 1e-9 || zb.z() <= 0.0) zb = Vec3::UnitZ();
  zb.normalize();
  const Vec3 xc(std::cos(yaw), std::sin(yaw), 0.0);
  Vec3 yb = zb.cross(xc);
  if (yb.norm() < 1e-6) return quat_from_yaw(yaw);  // unreachable under tilt limit
  yb.normalize();
  const Vec3 xb = yb.cross(zb);
  Mat3 r;
  r.col(0) = xb;
  r.col(1) = yb;
  r.col(2) = zb;
  return Quat(r).normalized();
}

WrenchCommand cascade_pid_step(const PositionSetpoint& setpoint, const RigidBodyState& state,
                               const ControlGains& gains, const VehicleParams& params, double dt,
                               CascadePidState& pid) {
  // outer loop: position -> desired acceleration
  const Vec3 pos_err = setpoint.position - state.pose.position;
  pid.pos_integral += pos_err * dt;
  pid.pos_integral = pid.pos_integral.cwiseMax(-gains.pos_i_clamp).cwiseMin(gains.pos_i_clamp);
  const Vec3 vel_err = setpoint.velocity - state.velocity;

  Vec3 accel_des = gains.pos_kp.cwiseProduct(pos_err) + gains.pos_ki.cwiseProduct(pid.pos_integral) +
                   gains.pos_kd.cwiseProduct(vel_err) + Vec3(0.0, 0.0, params.gravity);

  // tilt limit: keep the horizontal component within tan(tilt_max) of vertical
  if (accel_des.z() < 0.2 * params.gravity) accel_des.z() = 0.2 * params.gravity;
  const double max_horiz = std::tan(gains.tilt_max) * accel_des.z();
  const double horiz = accel_des.head<2>().norm();
  if (horiz > max_horiz) accel_des.head<2>() *= max_horiz / horiz;

  const Vec3 force_des = params.mass * accel_des;
  const Vec3 body_z = state.pose.rotate(Vec3::UnitZ());
  const double thrust = std::max(force_des.dot(body_z), 0.0);

  // inner loop: attitude P -> rate setpoint, then rate PID -> moments
  const Quat q_des = attitude_from_thrust_dir(force_des, setpoint.yaw);
  const Mat3 r = state.pose.rotation();
  const Mat3 rd = q_des.toRotationMatrix();
  const Mat3 e_skew = 0.5 * (rd.transpose() * r - r.transpose() * rd);
  const Vec3 att_err(e_skew(2, 1), e_skew(0, 2), e_skew(1, 0));

  Vec3 rate_sp = -gains.att_kp * att_err;
  rate_sp.z() = std::clamp(rate_sp.z(), -gains.yaw_rate_max, gains.yaw_rate_max);

  const Vec3 rate_err = rate_sp - state.angular_rate;
  pid.rate_integral += rate_err * dt;
  pid.rate_integral =
      pid.rate_integral.cwiseMax(-gains.rate_i_clamp).cwiseMin(gains.rate_i_clamp);
  Vec3 rate_deriv = Vec3::Zero();
  if (pid.has_prev_rate_error && dt > 0.0) rate_deriv = (rate_err - pid.prev_rate_error) / dt;
  pid.prev_rate_error = rate_err;
  pid.has_prev_rate_error = true;

  const Vec3 alpha_cmd = gains.rate_kp * rate_err + gains.rate_ki * pid.rate_integral +
                         gains.rate_kd * rate_deriv;

  WrenchCommand cmd;
  cmd.thrust = thrust;
  cmd.moments = params.inertia * alpha_cmd +
                state.angular_rate.cross(params.inertia * state.angular_rate);
  return cmd;
}

}  // namespace amsim

#pragma once

#include <array>
#include <optional>

#include "amsim/geometry.hpp"
#include "amsim/scenario.hpp"

namespace amsim {

struct RigidBodyState {
  Pose pose;
  Vec3 velocity{Vec3::Zero()};       // m/s, world frame
  Vec3 angular_rate{Vec3::Zero()};   // rad/s, body frame

  bool finite() const {
    return pose.position.allFinite() && pose.orientation.coeffs().allFinite() &&
           velocity.allFinite() && angular_rate.allFinite();
  }
};

// Collective thrust along body z plus body moments.
struct WrenchCommand {
  double thrust = 0.0;  // N, >= 0
  Vec3 moments{Vec3::Zero()};  // N*m, body frame
};

// General 6D disturbance applied to the base, body frame.
struct BodyWrench {
  Vec3 force{Vec3::Zero()};
  Vec3 moment{Vec3::Zero()};
};

// Semi-implicit Euler step of the rigid body under a wrench command and an
// optional body-frame disturbance. Returns nullopt when the state goes
// non-finite (episode-level fault).
std::optional<RigidBodyState> step_dynamics(const RigidBodyState& state, const WrenchCommand& cmd,
                                            const VehicleParams& params, double dt,
                                            const BodyWrench& disturbance = {});

struct RotorAllocation {
  std::array<double, 8> thrusts{};  // N, clamped to [0, limit]
  bool saturated = false;
};

// Minimum-norm solution of the 4x8 mixing system, then clamped per rotor.
RotorAllocation allocate_rotors(const WrenchCommand& cmd, const VehicleParams& params);

// Wrench actually produced by a set of rotor thrusts (mixing matrix forward).
WrenchCommand wrench_from_rotors(const std::array<double, 8>& thrusts,
                                 const VehicleParams& params);

struct PositionSetpoint {
  Vec3 position{Vec3::Zero()};
  double yaw = 0.0;
  Vec3 velocity{Vec3::Zero()};  // feedforward, world frame
};

// Integrator and derivative memory of the cascade controller.
struct CascadePidState {
  Vec3 pos_integral{Vec3::Zero()};
  Vec3 rate_integral{Vec3::Zero()};
  Vec3 prev_rate_error{Vec3::Zero()};
  bool has_prev_rate_error = false;
};

// Outer position PID -> desired acceleration -> thrust magnitude + attitude;
// inner attitude P + body-rate PID -> moments. Integrators are clamped.
WrenchCommand cascade_pid_step(const PositionSetpoint& setpoint, const RigidBodyState& state,
                               const ControlGains& gains, const VehicleParams& params, double dt,
                               CascadePidState& pid);

// Desired attitude for a thrust direction and yaw; exposed for tests.
Quat attitude_from_thrust_dir(const Vec3& thrust_dir_world, double yaw);

}  // namespace amsim

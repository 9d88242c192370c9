#pragma once

#include <array>

#include "amsim/dynamics.hpp"
#include "amsim/geometry.hpp"
#include "amsim/scenario.hpp"

namespace amsim {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

enum class GripperState { Open, Closed, Holding };

struct ManipulatorState {
  Vec6 q{Vec6::Zero()};
  Vec6 qdot{Vec6::Zero()};
  GripperState gripper = GripperState::Open;
};

// Single standard DH link transform at joint angle theta.
Pose dh_transform(const DhRow& row, double theta);

// End-effector pose in the arm base frame.
Pose forward_kinematics(const Vec6& q, const ArmParams& arm);

// Joint frame origins/z-axes needed by the geometric Jacobian; chain[0] is the
// arm base, chain[6] the end-effector.
struct FkChain {
  std::array<Vec3, 7> origin;
  std::array<Vec3, 7> z_axis;
  Pose ee;
};
FkChain fk_chain(const Vec6& q, const ArmParams& arm);

// Columns [z_i x (p_ee - p_i); z_i], base frame, linear rows first.
Mat6 geometric_jacobian(const Vec6& q, const ArmParams& arm);

// Conservative workspace radius: sum of DH link offsets.
double workspace_radius(const ArmParams& arm);

struct IkResult {
  bool success = false;
  Vec6 q{Vec6::Zero()};  // best iterate even on failure
  double pos_residual = 0.0;
  double ang_residual = 0.0;
  int iterations = 0;
};

// Damped least-squares IK on the 6D pose error with deterministic restarts.
IkResult inverse_kinematics(const Pose& target, const Vec6& seed, const ArmParams& arm,
                            double pos_tol = 1e-4, double ang_tol = 1e-3, int max_iters = 200);

struct JointServoState {
  Vec6 integral{Vec6::Zero()};
  Vec6 prev_error{Vec6::Zero()};
  bool has_prev_error = false;
};

// Per-joint PID -> commanded joint velocity, clamped to the rate limit, then
// integrated with angles clamped to the joint limits.
ManipulatorState joint_servo_step(const Vec6& q_des, const ManipulatorState& state,
                                  const ControlGains& gains, const ArmParams& arm, double dt,
                                  JointServoState& servo);

// Arm center of mass in the vehicle body frame (link masses lumped at the DH
// frame origins).
Vec3 arm_com_body(const Vec6& q, const ArmParams& arm);

double arm_total_mass(const ArmParams& arm);

// Quasi-static reaction of the arm on the base: force = -m*a at the center of
// mass, moment = r x F. All body frame.
BodyWrench coupling_wrench(const Vec3& com_pos_body, const Vec3& com_accel_body, double arm_mass);

// Finite-difference CoM acceleration tracker feeding coupling_wrench.
class CouplingTracker {
 public:
  BodyWrench update(const Vec3& com_body, double arm_mass, double dt);
  void reset() { samples_ = 0; }

 private:
  Vec3 prev_com_{Vec3::Zero()};
  Vec3 prev_vel_{Vec3::Zero()};
  int samples_ = 0;
};

}  // namespace amsim

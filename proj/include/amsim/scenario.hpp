#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "amsim/geometry.hpp"

namespace amsim {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorldBounds {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

struct BoxObstacle {
  Vec3 center{Vec3::Zero()};
  Vec3 half_extents{Vec3::Zero()};
  double yaw = 0.0;
};

struct Pedestrian {
  std::vector<Vec3> waypoints;
  double speed = 1.0;    // m/s
  double radius = 0.3;   // m
  double height = 1.7;   // m
  bool loop = true;      // closed polyline; otherwise clamp at the last waypoint
};

struct TargetObject {
  Pose pose;
  double radius = 0.04;           // cylinder radius, m
  double height = 0.25;           // cylinder height, m
  double marker_half_size = 0.05; // square marker on the forward (+x) face
};

struct Landmark {
  int id = 0;
  Vec3 position{Vec3::Zero()};
};

struct CameraIntrinsics {
  int width = 160;
  int height = 120;
  double fx = 120.0;
  double fy = 120.0;
  double cx = 80.0;
  double cy = 60.0;
  double min_range = 0.3;  // m, on camera-frame z
  double max_range = 8.0;  // m
  double rate_hz = 10.0;
};

struct SensorParams {
  CameraIntrinsics base_camera;
  CameraIntrinsics ee_camera{160, 120, 120.0, 120.0, 80.0, 60.0, 0.05, 4.0, 20.0};
  double sigma_depth = 0.01;     // m, per-pixel depth noise
  double sigma_landmark = 0.005; // m, per-axis camera-frame noise
  double sigma_pixel = 0.3;      // px, marker corner noise
  double detector_false_negative = 0.0; // chance a dynamic sample loses its flag
  int dynamic_obs_per_pedestrian = 6;   // spurious correspondences per visible pedestrian
  double dynamic_anchor_lag = 0.5;      // s; stale world anchor age for moving samples
  double marker_max_range = 2.5;        // m, detection range of the marker
  double marker_max_view_angle = 1.31;  // rad (~75 deg) grazing cutoff
};

// Denavit-Hartenberg row: rotZ(theta+offset) transZ(d) transX(a) rotX(alpha).
struct DhRow {
  double theta_offset = 0.0;
  double d = 0.0;
  double a = 0.0;
  double alpha = 0.0;
};

struct ArmParams {
  std::array<DhRow, 6> dh{};
  std::array<double, 6> joint_min{};
  std::array<double, 6> joint_max{};
  std::array<double, 6> rate_limit{};  // rad/s per joint
  std::array<double, 6> link_mass{};   // kg, lumped at each DH frame origin
  std::array<double, 6> stow_q{};
  Pose mount;            // arm base in vehicle body frame
  Pose camera_from_ee;   // eye-in-hand camera in end-effector frame
  Pose gripper_from_ee;  // gripper jaw center in end-effector frame
};

struct VehicleParams {
  double mass = 3.2;  // kg, base + arm
  Mat3 inertia = (Eigen::Vector3d(0.06, 0.06, 0.10)).asDiagonal();
  std::array<Vec3, 8> rotor_positions{};  // body frame, m
  std::array<int, 8> rotor_spin{};        // +1 CCW, -1 CW
  double rotor_thrust_limit = 12.0;       // N per rotor
  double torque_thrust_ratio = 0.016;     // m; reaction torque = ratio * thrust
  double gravity = 9.81;
  Pose base_camera_mount;  // forward-looking RGBD in body frame
  ArmParams arm;
};

struct ControlGains {
  Vec3 pos_kp{2.4, 2.4, 3.2};
  Vec3 pos_ki{0.12, 0.12, 0.2};
  Vec3 pos_kd{3.4, 3.4, 3.6};
  double pos_i_clamp = 1.0;    // m*s
  double att_kp = 6.0;         // attitude P -> rate setpoint
  double rate_kp = 20.0;
  double rate_ki = 1.0;
  double rate_kd = 0.02;
  double rate_i_clamp = 2.0;   // rad
  double tilt_max = 0.6;       // rad
  double yaw_rate_max = 1.8;   // rad/s
  // manipulator joint servo
  double joint_kp = 8.0;
  double joint_ki = 0.4;
  double joint_kd = 0.1;
  double joint_i_clamp = 0.5;
};

struct PerceptionParams {
  double z_threshold = 0.15;  // m, ground removal
  double eps = 0.3;           // m, DBSCAN radius
  int min_pts = 8;
  double max_range = 6.0;     // m, moving-point gate from the sensor
  double track_gate = 1.0;    // m, association distance
  double track_alpha = 0.5;   // EMA factor on velocity
  bool reject_dynamic = true;
};

struct PlannerParams {
  double step_size = 0.5;
  double goal_bias = 0.15;
  int max_iterations = 8000;
  double rewire_radius = 1.2;
  double d_safe = 0.35;
  double w_smooth = 1.0;
  double w_clear = 8.0;
  double repulse_trigger = 0.8;  // m, repulsion activation distance
  double k_att = 1.0;
  double k_rep = 0.6;
  double max_speed = 1.2;        // m/s
  double lookahead = 0.9;        // m along the path
  double densify_step = 0.25;    // m, max segment length
  double predict_horizon = 0.5;  // s, obstacle motion prediction
  double region_margin = 1.0;    // m beyond the region radius where -grad(f) takes over
  int opt_max_iters = 200;
  double opt_grad_tol = 1e-4;
};

struct ServoParams {
  double lambda = 0.8;
  double converge_eps = 0.01;     // sup-norm on normalized feature error
  double damping = 1e-3;          // mu on L*L^T
  double approach_standoff = 0.35; // first desired-feature standoff, m
  double trigger_standoff = 0.12;  // camera-to-target grasp trigger, m
  double hold_standoff = 0.55;     // MAV hold point in front of the marker, m
  bool use_constant_depth = false;
  double constant_depth = 0.3;
  double grasp_pos_tol = 0.04;   // m
  double grasp_ang_tol = 0.26;   // rad
};

struct MissionParams {
  double cruise_altitude = 1.2;
  double takeoff_tol = 0.1;
  double search_radius = 1.5;
  int search_points = 16;
  double search_altitude = 1.2;
  double sim_time_cap = 180.0;
  int control_divisor = 2;        // plant steps per control tick
  double est_fail_timeout = 1.0;  // s of persistent estimation failure -> abort
  double done_radius = 0.5;       // m around start to finish Transport
  int search_max_laps = 2;
};

struct Scenario {
  WorldBounds bounds;
  std::vector<BoxObstacle> boxes;
  std::vector<Pedestrian> pedestrians;
  std::vector<Landmark> landmarks;
  TargetObject target;
  Vec3 crude_center{Vec3::Zero()};
  double crude_radius = 1.5;
  VehicleParams vehicle;
  SensorParams sensors;
  ControlGains gains;
  PerceptionParams perception;
  PlannerParams planner;
  ServoParams servo;
  MissionParams mission;
  double dt = 0.005;
  std::uint64_t seed = 1;
};

// Parses and validates a scenario document; throws ScenarioError naming the
// offending field or invariant.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

std::string serialize_scenario(const Scenario& s);

// Checks every scenario invariant; throws ScenarioError on the first violation.
void validate_scenario(const Scenario& s);

// Coaxial X8 rotor layout: four arms at 45/135/-135/-45 deg, an upper and a
// lower rotor per arm with opposite spin.
void fill_default_rotor_layout(VehicleParams& v, double arm_length = 0.25);

// Default 6-DOF arm: anthropomorphic chain with a spherical-ish wrist, mounted
// under the base plate.
ArmParams default_arm_params();

}  // namespace amsim

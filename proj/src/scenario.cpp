#include "amsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace amsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg); }

const json& require(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) fail(ctx + ": missing required field '" + key + "'");
  return *it;
}

double num(const json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx + ": expected a number");
  return j.get<double>();
}

double num_or(const json& j, const char* key, double def, const std::string& ctx) {
  auto it = j.find(key);
  return it == j.end() ? def : num(*it, ctx + "." + key);
}

int int_or(const json& j, const char* key, int def, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return def;
  if (!it->is_number_integer()) fail(ctx + "." + key + ": expected an integer");
  return it->get<int>();
}

bool bool_or(const json& j, const char* key, bool def, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return def;
  if (!it->is_boolean()) fail(ctx + "." + key + ": expected a boolean");
  return it->get<bool>();
}

Vec3 vec3(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3) fail(ctx + ": expected an array of 3 numbers");
  return Vec3(num(j[0], ctx), num(j[1], ctx), num(j[2], ctx));
}

Vec3 vec3_or(const json& j, const char* key, const Vec3& def, const std::string& ctx) {
  auto it = j.find(key);
  return it == j.end() ? def : vec3(*it, ctx + "." + key);
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Quat quat(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 4) fail(ctx + ": expected [w, x, y, z]");
  Quat q(num(j[0], ctx), num(j[1], ctx), num(j[2], ctx), num(j[3], ctx));
  if (std::abs(q.norm() - 1.0) > 1e-6) fail(ctx + ": quaternion is not unit-norm");
  q.normalize();
  return q;
}

json to_json(const Quat& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

Pose pose(const json& j, const std::string& ctx) {
  Pose p;
  p.position = vec3(require(j, "position", ctx), ctx + ".position");
  auto it = j.find("orientation");
  p.orientation = it == j.end() ? Quat::Identity() : quat(*it, ctx + ".orientation");
  return p;
}

json to_json(const Pose& p) {
  return json{{"position", to_json(p.position)}, {"orientation", to_json(p.orientation)}};
}

Mat3 mat3(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3) fail(ctx + ": expected 3 rows of 3 numbers");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) fail(ctx + ": expected 3 rows of 3 numbers");
    for (int c = 0; c < 3; ++c) m(r, c) = num(j[r][c], ctx);
  }
  return m;
}

json to_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

CameraIntrinsics intrinsics(const json& j, const CameraIntrinsics& def, const std::string& ctx) {
  CameraIntrinsics c = def;
  c.width = int_or(j, "width", def.width, ctx);
  c.height = int_or(j, "height", def.height, ctx);
  c.fx = num_or(j, "fx", def.fx, ctx);
  c.fy = num_or(j, "fy", def.fy, ctx);
  c.cx = num_or(j, "cx", def.cx, ctx);
  c.cy = num_or(j, "cy", def.cy, ctx);
  c.min_range = num_or(j, "min_range", def.min_range, ctx);
  c.max_range = num_or(j, "max_range", def.max_range, ctx);
  c.rate_hz = num_or(j, "rate_hz", def.rate_hz, ctx);
  return c;
}

json to_json(const CameraIntrinsics& c) {
  return json{{"width", c.width},   {"height", c.height},       {"fx", c.fx},
              {"fy", c.fy},         {"cx", c.cx},               {"cy", c.cy},
              {"min_range", c.min_range}, {"max_range", c.max_range}, {"rate_hz", c.rate_hz}};
}

template <std::size_t N>
std::array<double, N> darray(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != N) fail(ctx + ": expected an array of " + std::to_string(N));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = num(j[i], ctx);
  return out;
}

template <std::size_t N>
json to_json(const std::array<double, N>& a) {
  json out = json::array();
  for (double v : a) out.push_back(v);
  return out;
}

ArmParams arm_params(const json& j, const std::string& ctx) {
  ArmParams a = default_arm_params();
  if (auto it = j.find("dh"); it != j.end()) {
    if (!it->is_array() || it->size() != 6) fail(ctx + ".dh: expected 6 rows");
    for (int i = 0; i < 6; ++i) {
      const json& row = (*it)[i];
      const std::string rc = ctx + ".dh[" + std::to_string(i) + "]";
      a.dh[i].theta_offset = num_or(row, "theta_offset", 0.0, rc);
      a.dh[i].d = num_or(row, "d", 0.0, rc);
      a.dh[i].a = num_or(row, "a", 0.0, rc);
      a.dh[i].alpha = num_or(row, "alpha", 0.0, rc);
    }
  }
  if (auto it = j.find("joint_min"); it != j.end()) a.joint_min = darray<6>(*it, ctx + ".joint_min");
  if (auto it = j.find("joint_max"); it != j.end()) a.joint_max = darray<6>(*it, ctx + ".joint_max");
  if (auto it = j.find("rate_limit"); it != j.end()) a.rate_limit = darray<6>(*it, ctx + ".rate_limit");
  if (auto it = j.find("link_mass"); it != j.end()) a.link_mass = darray<6>(*it, ctx + ".link_mass");
  if (auto it = j.find("stow_q"); it != j.end()) a.stow_q = darray<6>(*it, ctx + ".stow_q");
  if (auto it = j.find("mount"); it != j.end()) a.mount = pose(*it, ctx + ".mount");
  if (auto it = j.find("camera_from_ee"); it != j.end())
    a.camera_from_ee = pose(*it, ctx + ".camera_from_ee");
  if (auto it = j.find("gripper_from_ee"); it != j.end())
    a.gripper_from_ee = pose(*it, ctx + ".gripper_from_ee");
  return a;
}

json to_json(const ArmParams& a) {
  json dh = json::array();
  for (const DhRow& r : a.dh)
    dh.push_back(json{{"theta_offset", r.theta_offset}, {"d", r.d}, {"a", r.a}, {"alpha", r.alpha}});
  return json{{"dh", dh},
              {"joint_min", to_json(a.joint_min)},
              {"joint_max", to_json(a.joint_max)},
              {"rate_limit", to_json(a.rate_limit)},
              {"link_mass", to_json(a.link_mass)},
              {"stow_q", to_json(a.stow_q)},
              {"mount", to_json(a.mount)},
              {"camera_from_ee", to_json(a.camera_from_ee)},
              {"gripper_from_ee", to_json(a.gripper_from_ee)}};
}

VehicleParams vehicle_params(const json& j, const std::string& ctx) {
  VehicleParams v;
  fill_default_rotor_layout(v);
  v.arm = default_arm_params();
  v.mass = num_or(j, "mass", v.mass, ctx);
  if (auto it = j.find("inertia"); it != j.end()) v.inertia = mat3(*it, ctx + ".inertia");
  if (auto it = j.find("rotor_positions"); it != j.end()) {
    if (!it->is_array() || it->size() != 8) fail(ctx + ".rotor_positions: expected 8 entries");
    for (int i = 0; i < 8; ++i)
      v.rotor_positions[i] = vec3((*it)[i], ctx + ".rotor_positions[" + std::to_string(i) + "]");
  }
  if (auto it = j.find("rotor_spin"); it != j.end()) {
    if (!it->is_array() || it->size() != 8) fail(ctx + ".rotor_spin: expected 8 entries");
    for (int i = 0; i < 8; ++i) {
      const int s = (*it)[i].get<int>();
      if (s != 1 && s != -1) fail(ctx + ".rotor_spin: entries must be +1 or -1");
      v.rotor_spin[i] = s;
    }
  }
  v.rotor_thrust_limit = num_or(j, "rotor_thrust_limit", v.rotor_thrust_limit, ctx);
  v.torque_thrust_ratio = num_or(j, "torque_thrust_ratio", v.torque_thrust_ratio, ctx);
  v.gravity = num_or(j, "gravity", v.gravity, ctx);
  if (auto it = j.find("base_camera_mount"); it != j.end())
    v.base_camera_mount = pose(*it, ctx + ".base_camera_mount");
  if (auto it = j.find("arm"); it != j.end()) v.arm = arm_params(*it, ctx + ".arm");
  return v;
}

json to_json(const VehicleParams& v) {
  json rp = json::array();
  for (const Vec3& p : v.rotor_positions) rp.push_back(to_json(p));
  json rs = json::array();
  for (int s : v.rotor_spin) rs.push_back(s);
  return json{{"mass", v.mass},
              {"inertia", to_json(v.inertia)},
              {"rotor_positions", rp},
              {"rotor_spin", rs},
              {"rotor_thrust_limit", v.rotor_thrust_limit},
              {"torque_thrust_ratio", v.torque_thrust_ratio},
              {"gravity", v.gravity},
              {"base_camera_mount", to_json(v.base_camera_mount)},
              {"arm", to_json(v.arm)}};
}

SensorParams sensor_params(const json& j, const std::string& ctx) {
  SensorParams s;
  if (auto it = j.find("base_camera"); it != j.end())
    s.base_camera = intrinsics(*it, s.base_camera, ctx + ".base_camera");
  if (auto it = j.find("ee_camera"); it != j.end())
    s.ee_camera = intrinsics(*it, s.ee_camera, ctx + ".ee_camera");
  s.sigma_depth = num_or(j, "sigma_depth", s.sigma_depth, ctx);
  s.sigma_landmark = num_or(j, "sigma_landmark", s.sigma_landmark, ctx);
  s.sigma_pixel = num_or(j, "sigma_pixel", s.sigma_pixel, ctx);
  s.detector_false_negative = num_or(j, "detector_false_negative", s.detector_false_negative, ctx);
  s.dynamic_obs_per_pedestrian =
      int_or(j, "dynamic_obs_per_pedestrian", s.dynamic_obs_per_pedestrian, ctx);
  s.dynamic_anchor_lag = num_or(j, "dynamic_anchor_lag", s.dynamic_anchor_lag, ctx);
  s.marker_max_range = num_or(j, "marker_max_range", s.marker_max_range, ctx);
  s.marker_max_view_angle = num_or(j, "marker_max_view_angle", s.marker_max_view_angle, ctx);
  return s;
}

json to_json(const SensorParams& s) {
  return json{{"base_camera", to_json(s.base_camera)},
              {"ee_camera", to_json(s.ee_camera)},
              {"sigma_depth", s.sigma_depth},
              {"sigma_landmark", s.sigma_landmark},
              {"sigma_pixel", s.sigma_pixel},
              {"detector_false_negative", s.detector_false_negative},
              {"dynamic_obs_per_pedestrian", s.dynamic_obs_per_pedestrian},
              {"dynamic_anchor_lag", s.dynamic_anchor_lag},
              {"marker_max_range", s.marker_max_range},
              {"marker_max_view_angle", s.marker_max_view_angle}};
}

ControlGains gains_params(const json& j, const std::string& ctx) {
  ControlGains g;
  g.pos_kp = vec3_or(j, "pos_kp", g.pos_kp, ctx);
  g.pos_ki = vec3_or(j, "pos_ki", g.pos_ki, ctx);
  g.pos_kd = vec3_or(j, "pos_kd", g.pos_kd, ctx);
  g.pos_i_clamp = num_or(j, "pos_i_clamp", g.pos_i_clamp, ctx);
  g.att_kp = num_or(j, "att_kp", g.att_kp, ctx);
  g.rate_kp = num_or(j, "rate_kp", g.rate_kp, ctx);
  g.rate_ki = num_or(j, "rate_ki", g.rate_ki, ctx);
  g.rate_kd = num_or(j, "rate_kd", g.rate_kd, ctx);
  g.rate_i_clamp = num_or(j, "rate_i_clamp", g.rate_i_clamp, ctx);
  g.tilt_max = num_or(j, "tilt_max", g.tilt_max, ctx);
  g.yaw_rate_max = num_or(j, "yaw_rate_max", g.yaw_rate_max, ctx);
  g.joint_kp = num_or(j, "joint_kp", g.joint_kp, ctx);
  g.joint_ki = num_or(j, "joint_ki", g.joint_ki, ctx);
  g.joint_kd = num_or(j, "joint_kd", g.joint_kd, ctx);
  g.joint_i_clamp = num_or(j, "joint_i_clamp", g.joint_i_clamp, ctx);
  return g;
}

json to_json(const ControlGains& g) {
  return json{{"pos_kp", to_json(g.pos_kp)},
              {"pos_ki", to_json(g.pos_ki)},
              {"pos_kd", to_json(g.pos_kd)},
              {"pos_i_clamp", g.pos_i_clamp},
              {"att_kp", g.att_kp},
              {"rate_kp", g.rate_kp},
              {"rate_ki", g.rate_ki},
              {"rate_kd", g.rate_kd},
              {"rate_i_clamp", g.rate_i_clamp},
              {"tilt_max", g.tilt_max},
              {"yaw_rate_max", g.yaw_rate_max},
              {"joint_kp", g.joint_kp},
              {"joint_ki", g.joint_ki},
              {"joint_kd", g.joint_kd},
              {"joint_i_clamp", g.joint_i_clamp}};
}

PerceptionParams perception_params(const json& j, const std::string& ctx) {
  PerceptionParams p;
  p.z_threshold = num_or(j, "z_threshold", p.z_threshold, ctx);
  p.eps = num_or(j, "eps", p.eps, ctx);
  p.min_pts = int_or(j, "min_pts", p.min_pts, ctx);
  p.max_range = num_or(j, "max_range", p.max_range, ctx);
  p.track_gate = num_or(j, "track_gate", p.track_gate, ctx);
  p.track_alpha = num_or(j, "track_alpha", p.track_alpha, ctx);
  p.reject_dynamic = bool_or(j, "reject_dynamic", p.reject_dynamic, ctx);
  return p;
}

json to_json(const PerceptionParams& p) {
  return json{{"z_threshold", p.z_threshold}, {"eps", p.eps},
              {"min_pts", p.min_pts},         {"max_range", p.max_range},
              {"track_gate", p.track_gate},   {"track_alpha", p.track_alpha},
              {"reject_dynamic", p.reject_dynamic}};
}

PlannerParams planner_params(const json& j, const std::string& ctx) {
  PlannerParams p;
  p.step_size = num_or(j, "step_size", p.step_size, ctx);
  p.goal_bias = num_or(j, "goal_bias", p.goal_bias, ctx);
  p.max_iterations = int_or(j, "max_iterations", p.max_iterations, ctx);
  p.rewire_radius = num_or(j, "rewire_radius", p.rewire_radius, ctx);
  p.d_safe = num_or(j, "d_safe", p.d_safe, ctx);
  p.w_smooth = num_or(j, "w_smooth", p.w_smooth, ctx);
  p.w_clear = num_or(j, "w_clear", p.w_clear, ctx);
  p.repulse_trigger = num_or(j, "repulse_trigger", p.repulse_trigger, ctx);
  p.k_att = num_or(j, "k_att", p.k_att, ctx);
  p.k_rep = num_or(j, "k_rep", p.k_rep, ctx);
  p.max_speed = num_or(j, "max_speed", p.max_speed, ctx);
  p.lookahead = num_or(j, "lookahead", p.lookahead, ctx);
  p.densify_step = num_or(j, "densify_step", p.densify_step, ctx);
  p.predict_horizon = num_or(j, "predict_horizon", p.predict_horizon, ctx);
  p.region_margin = num_or(j, "region_margin", p.region_margin, ctx);
  p.opt_max_iters = int_or(j, "opt_max_iters", p.opt_max_iters, ctx);
  p.opt_grad_tol = num_or(j, "opt_grad_tol", p.opt_grad_tol, ctx);
  return p;
}

json to_json(const PlannerParams& p) {
  return json{{"step_size", p.step_size},
              {"goal_bias", p.goal_bias},
              {"max_iterations", p.max_iterations},
              {"rewire_radius", p.rewire_radius},
              {"d_safe", p.d_safe},
              {"w_smooth", p.w_smooth},
              {"w_clear", p.w_clear},
              {"repulse_trigger", p.repulse_trigger},
              {"k_att", p.k_att},
              {"k_rep", p.k_rep},
              {"max_speed", p.max_speed},
              {"lookahead", p.lookahead},
              {"densify_step", p.densify_step},
              {"predict_horizon", p.predict_horizon},
              {"region_margin", p.region_margin},
              {"opt_max_iters", p.opt_max_iters},
              {"opt_grad_tol", p.opt_grad_tol}};
}

ServoParams servo_params(const json& j, const std::string& ctx) {
  ServoParams s;
  s.lambda = num_or(j, "lambda", s.lambda, ctx);
  s.converge_eps = num_or(j, "converge_eps", s.converge_eps, ctx);
  s.damping = num_or(j, "damping", s.damping, ctx);
  s.approach_standoff = num_or(j, "approach_standoff", s.approach_standoff, ctx);
  s.trigger_standoff = num_or(j, "trigger_standoff", s.trigger_standoff, ctx);
  s.hold_standoff = num_or(j, "hold_standoff", s.hold_standoff, ctx);
  s.use_constant_depth = bool_or(j, "use_constant_depth", s.use_constant_depth, ctx);
  s.constant_depth = num_or(j, "constant_depth", s.constant_depth, ctx);
  s.grasp_pos_tol = num_or(j, "grasp_pos_tol", s.grasp_pos_tol, ctx);
  s.grasp_ang_tol = num_or(j, "grasp_ang_tol", s.grasp_ang_tol, ctx);
  return s;
}

json to_json(const ServoParams& s) {
  return json{{"lambda", s.lambda},
              {"converge_eps", s.converge_eps},
              {"damping", s.damping},
              {"approach_standoff", s.approach_standoff},
              {"trigger_standoff", s.trigger_standoff},
              {"hold_standoff", s.hold_standoff},
              {"use_constant_depth", s.use_constant_depth},
              {"constant_depth", s.constant_depth},
              {"grasp_pos_tol", s.grasp_pos_tol},
              {"grasp_ang_tol", s.grasp_ang_tol}};
}

MissionParams mission_params(const json& j, const std::string& ctx) {
  MissionParams m;
  m.cruise_altitude = num_or(j, "cruise_altitude", m.cruise_altitude, ctx);
  m.takeoff_tol = num_or(j, "takeoff_tol", m.takeoff_tol, ctx);
  m.search_radius = num_or(j, "search_radius", m.search_radius, ctx);
  m.search_points = int_or(j, "search_points", m.search_points, ctx);
  m.search_altitude = num_or(j, "search_altitude", m.search_altitude, ctx);
  m.sim_time_cap = num_or(j, "sim_time_cap", m.sim_time_cap, ctx);
  m.control_divisor = int_or(j, "control_divisor", m.control_divisor, ctx);
  m.est_fail_timeout = num_or(j, "est_fail_timeout", m.est_fail_timeout, ctx);
  m.done_radius = num_or(j, "done_radius", m.done_radius, ctx);
  m.search_max_laps = int_or(j, "search_max_laps", m.search_max_laps, ctx);
  return m;
}

json to_json(const MissionParams& m) {
  return json{{"cruise_altitude", m.cruise_altitude},
              {"takeoff_tol", m.takeoff_tol},
              {"search_radius", m.search_radius},
              {"search_points", m.search_points},
              {"search_altitude", m.search_altitude},
              {"sim_time_cap", m.sim_time_cap},
              {"control_divisor", m.control_divisor},
              {"est_fail_timeout", m.est_fail_timeout},
              {"done_radius", m.done_radius},
              {"search_max_laps", m.search_max_laps}};
}

}  // namespace

void fill_default_rotor_layout(VehicleParams& v, double arm_length) {
  const double angles[4] = {kPi / 4, 3 * kPi / 4, -3 * kPi / 4, -kPi / 4};
  for (int arm = 0; arm < 4; ++arm) {
    const Vec3 xy(arm_length * std::cos(angles[arm]), arm_length * std::sin(angles[arm]), 0.0);
    v.rotor_positions[2 * arm] = xy + Vec3(0, 0, 0.03);
    v.rotor_positions[2 * arm + 1] = xy + Vec3(0, 0, -0.03);
    const int upper = (arm % 2 == 0) ? 1 : -1;
    v.rotor_spin[2 * arm] = upper;
    v.rotor_spin[2 * arm + 1] = -upper;
  }
}

ArmParams default_arm_params() {
  ArmParams a;
  a.dh = {DhRow{0.0, 0.09, 0.0, kPi / 2}, DhRow{0.0, 0.0, 0.22, 0.0},
          DhRow{0.0, 0.0, 0.05, kPi / 2}, DhRow{0.0, 0.17, 0.0, -kPi / 2},
          DhRow{0.0, 0.0, 0.0, kPi / 2},  DhRow{0.0, 0.07, 0.0, 0.0}};
  a.joint_min = {-2.96, -2.0, -2.6, -2.96, -2.0, -2.96};
  a.joint_max = {2.96, 2.0, 2.6, 2.96, 2.0, 2.96};
  a.rate_limit = {2.0, 2.0, 2.0, 2.5, 2.5, 2.5};
  a.link_mass = {0.18, 0.22, 0.16, 0.10, 0.08, 0.06};
  a.stow_q = {0.0, -1.2, 1.9, 0.0, 0.9, 0.0};
  // Arm hangs under the base plate; joint-1 axis points down.
  a.mount.position = Vec3(0.0, 0.0, -0.08);
  a.mount.orientation = Quat(Eigen::AngleAxisd(kPi, Vec3::UnitX()));
  a.camera_from_ee.position = Vec3(0.0, 0.0, 0.02);
  a.gripper_from_ee.position = Vec3(0.0, 0.0, 0.10);
  return a;
}

void validate_scenario(const Scenario& s) {
  if (!((s.bounds.max.array() > s.bounds.min.array()).all()))
    fail("world_bounds: max must exceed min on every axis");
  for (std::size_t i = 0; i < s.boxes.size(); ++i) {
    if (!(s.boxes[i].half_extents.array() > 0.0).all())
      fail("boxes[" + std::to_string(i) + "]: half_extents must be positive");
  }
  for (std::size_t i = 0; i < s.pedestrians.size(); ++i) {
    const Pedestrian& p = s.pedestrians[i];
    const std::string ctx = "pedestrians[" + std::to_string(i) + "]";
    if (p.waypoints.size() < 2) fail(ctx + ": needs at least 2 waypoints");
    for (std::size_t k = 1; k < p.waypoints.size(); ++k)
      if ((p.waypoints[k] - p.waypoints[k - 1]).norm() < 1e-9)
        fail(ctx + ": consecutive waypoints must be distinct");
    if (p.speed <= 0.0) fail(ctx + ": speed must be positive");
    if (p.radius <= 0.0) fail(ctx + ": radius must be positive");
    if (p.height <= 0.0) fail(ctx + ": height must be positive");
  }
  if (std::abs(s.target.pose.orientation.norm() - 1.0) > 1e-9)
    fail("target.orientation: quaternion is not unit-norm");
  if (!s.bounds.contains(s.target.pose.position)) fail("target: pose outside world bounds");
  if (s.target.radius <= 0.0 || s.target.height <= 0.0 || s.target.marker_half_size <= 0.0)
    fail("target: radius, height and marker_half_size must be positive");
  if (s.crude_radius <= 0.0) fail("crude_region: radius must be positive");
  if (s.dt <= 0.0) fail("dt: must be positive");

  const auto check_cam = [](const CameraIntrinsics& c, const char* name) {
    if (c.fx <= 0.0 || c.fy <= 0.0) fail(std::string(name) + ": fx and fy must be positive");
    if (!(0.0 < c.min_range && c.min_range < c.max_range))
      fail(std::string(name) + ": requires 0 < min_range < max_range");
    if (c.width <= 0 || c.height <= 0) fail(std::string(name) + ": image size must be positive");
    if (c.rate_hz <= 0.0) fail(std::string(name) + ": rate_hz must be positive");
  };
  check_cam(s.sensors.base_camera, "sensors.base_camera");
  check_cam(s.sensors.ee_camera, "sensors.ee_camera");
  if (s.sensors.sigma_depth < 0 || s.sensors.sigma_landmark < 0 || s.sensors.sigma_pixel < 0)
    fail("sensors: noise sigmas must be non-negative");
  if (s.sensors.detector_false_negative < 0.0 || s.sensors.detector_false_negative > 1.0)
    fail("sensors.detector_false_negative: must be in [0, 1]");

  const VehicleParams& v = s.vehicle;
  if (v.mass <= 0.0) fail("vehicle.mass: must be positive");
  if ((v.inertia - v.inertia.transpose()).norm() > 1e-9) fail("vehicle.inertia: must be symmetric");
  if (Eigen::LLT<Mat3>(v.inertia).info() != Eigen::Success)
    fail("vehicle.inertia: must be positive-definite");
  int ccw = 0;
  for (int sdir : v.rotor_spin) ccw += (sdir == 1);
  if (ccw != 4) fail("vehicle.rotor_spin: need exactly 4 CCW and 4 CW rotors");
  if (v.rotor_thrust_limit <= 0.0) fail("vehicle.rotor_thrust_limit: must be positive");
  if (v.gravity <= 0.0) fail("vehicle.gravity: must be positive");
  for (int i = 0; i < 6; ++i)
    if (!(v.arm.joint_min[i] < v.arm.joint_max[i]))
      fail("vehicle.arm.joint limits: min must be below max (joint " + std::to_string(i) + ")");

  if (!((s.gains.pos_kp.array() > 0).all() && (s.gains.pos_kd.array() > 0).all()))
    fail("gains: position gains must be positive");
  if (s.gains.att_kp <= 0 || s.gains.rate_kp <= 0) fail("gains: attitude gains must be positive");

  if (s.perception.z_threshold <= 0.0) fail("perception.z_threshold: must be positive");
  if (s.perception.eps <= 0.0) fail("perception.eps: must be positive");
  if (s.perception.min_pts < 1) fail("perception.min_pts: must be >= 1");

  const PlannerParams& p = s.planner;
  if (p.step_size <= 0 || p.rewire_radius <= 0 || p.d_safe <= 0 || p.max_speed <= 0 ||
      p.densify_step <= 0 || p.repulse_trigger <= 0)
    fail("planner: lengths and speeds must be positive");
  if (!(p.goal_bias > 0.0 && p.goal_bias < 1.0)) fail("planner.goal_bias: must be in (0, 1)");

  if (s.servo.lambda <= 0.0) fail("servo.lambda: must be positive");
  if (s.mission.control_divisor < 1) fail("mission.control_divisor: must be >= 1");
}

Scenario load_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail("scenario: top level must be an object");

  Scenario s;
  const json& wb = require(j, "world_bounds", "scenario");
  s.bounds.min = vec3(require(wb, "min", "world_bounds"), "world_bounds.min");
  s.bounds.max = vec3(require(wb, "max", "world_bounds"), "world_bounds.max");

  const json& boxes = require(j, "boxes", "scenario");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::string ctx = "boxes[" + std::to_string(i) + "]";
    BoxObstacle b;
    b.center = vec3(require(boxes[i], "center", ctx), ctx + ".center");
    b.half_extents = vec3(require(boxes[i], "half_extents", ctx), ctx + ".half_extents");
    b.yaw = num_or(boxes[i], "yaw", 0.0, ctx);
    s.boxes.push_back(b);
  }

  const json& peds = require(j, "pedestrians", "scenario");
  for (std::size_t i = 0; i < peds.size(); ++i) {
    const std::string ctx = "pedestrians[" + std::to_string(i) + "]";
    Pedestrian p;
    const json& wps = require(peds[i], "waypoints", ctx);
    for (std::size_t k = 0; k < wps.size(); ++k)
      p.waypoints.push_back(vec3(wps[k], ctx + ".waypoints[" + std::to_string(k) + "]"));
    p.speed = num(require(peds[i], "speed", ctx), ctx + ".speed");
    p.radius = num_or(peds[i], "radius", p.radius, ctx);
    p.height = num_or(peds[i], "height", p.height, ctx);
    p.loop = bool_or(peds[i], "loop", p.loop, ctx);
    s.pedestrians.push_back(p);
  }

  const json& lms = require(j, "landmarks", "scenario");
  for (std::size_t i = 0; i < lms.size(); ++i) {
    const std::string ctx = "landmarks[" + std::to_string(i) + "]";
    Landmark l;
    l.id = require(lms[i], "id", ctx).get<int>();
    l.position = vec3(require(lms[i], "position", ctx), ctx + ".position");
    s.landmarks.push_back(l);
  }

  const json& tgt = require(j, "target", "scenario");
  s.target.pose = pose(tgt, "target");
  s.target.radius = num_or(tgt, "radius", s.target.radius, "target");
  s.target.height = num_or(tgt, "height", s.target.height, "target");
  s.target.marker_half_size = num_or(tgt, "marker_half_size", s.target.marker_half_size, "target");

  const json& cr = require(j, "crude_region", "scenario");
  s.crude_center = vec3(require(cr, "center", "crude_region"), "crude_region.center");
  s.crude_radius = num(require(cr, "radius", "crude_region"), "crude_region.radius");

  s.vehicle = vehicle_params(require(j, "vehicle", "scenario"), "vehicle");
  s.sensors = sensor_params(require(j, "sensors", "scenario"), "sensors");
  if (auto it = j.find("gains"); it != j.end()) s.gains = gains_params(*it, "gains");
  if (auto it = j.find("perception"); it != j.end())
    s.perception = perception_params(*it, "perception");
  if (auto it = j.find("planner"); it != j.end()) s.planner = planner_params(*it, "planner");
  if (auto it = j.find("servo"); it != j.end()) s.servo = servo_params(*it, "servo");
  if (auto it = j.find("mission"); it != j.end()) s.mission = mission_params(*it, "mission");

  s.dt = num(require(j, "dt", "scenario"), "dt");
  const json& seed = require(j, "seed", "scenario");
  if (!seed.is_number_integer() && !seed.is_number_unsigned()) fail("seed: expected an integer");
  s.seed = seed.get<std::uint64_t>();

  validate_scenario(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["world_bounds"] = json{{"min", to_json(s.bounds.min)}, {"max", to_json(s.bounds.max)}};
  json boxes = json::array();
  for (const BoxObstacle& b : s.boxes)
    boxes.push_back(json{{"center", to_json(b.center)},
                         {"half_extents", to_json(b.half_extents)},
                         {"yaw", b.yaw}});
  j["boxes"] = boxes;
  json peds = json::array();
  for (const Pedestrian& p : s.pedestrians) {
    json wps = json::array();
    for (const Vec3& w : p.waypoints) wps.push_back(to_json(w));
    peds.push_back(json{{"waypoints", wps},
                        {"speed", p.speed},
                        {"radius", p.radius},
                        {"height", p.height},
                        {"loop", p.loop}});
  }
  j["pedestrians"] = peds;
  json lms = json::array();
  for (const Landmark& l : s.landmarks)
    lms.push_back(json{{"id", l.id}, {"position", to_json(l.position)}});
  j["landmarks"] = lms;
  json tgt = to_json(s.target.pose);
  tgt["radius"] = s.target.radius;
  tgt["height"] = s.target.height;
  tgt["marker_half_size"] = s.target.marker_half_size;
  j["target"] = tgt;
  j["crude_region"] = json{{"center", to_json(s.crude_center)}, {"radius", s.crude_radius}};
  j["vehicle"] = to_json(s.vehicle);
  j["sensors"] = to_json(s.sensors);
  j["gains"] = to_json(s.gains);
  j["perception"] = to_json(s.perception);
  j["planner"] = to_json(s.planner);
  j["servo"] = to_json(s.servo);
  j["mission"] = to_json(s.mission);
  j["dt"] = s.dt;
  j["seed"] = s.seed;
  return j.dump(2);
}

}  // namespace amsim

#include "amsim/manipulator.hpp"

#include <algorithm>
#include <cmath>

#include "amsim/rng.hpp"

namespace amsim {

Pose dh_transform(const DhRow& row, double theta) {
  const double th = theta + row.theta_offset;
  Pose p;
  p.orientation = Quat(Eigen::AngleAxisd(th, Vec3::UnitZ()) *
                       Eigen::AngleAxisd(row.alpha, Vec3::UnitX()));
  p.position = Vec3(row.a * std::cos(th), row.a * std::sin(th), row.d);
  return p;
}

FkChain fk_chain(const Vec6& q, const ArmParams& arm) {
  FkChain chain;
  Pose t;  // identity at the arm base
  chain.origin[0] = t.position;
  chain.z_axis[0] = t.rotate(Vec3::UnitZ());
  for (int i = 0; i < 6; ++i) {
    t = t * dh_transform(arm.dh[i], q[i]);
    chain.origin[i + 1] = t.position;
    chain.z_axis[i + 1] = t.rotate(Vec3::UnitZ());
  }
  chain.ee = t;
  return chain;
}

Pose forward_kinematics(const Vec6& q, const ArmParams& arm) { return fk_chain(q, arm).ee; }

Mat6 geometric_jacobian(const Vec6& q, const ArmParams& arm) {
  const FkChain chain = fk_chain(q, arm);
  Mat6 j;
  for (int i = 0; i < 6; ++i) {
    const Vec3 z = chain.z_axis[i];  // joint i rotates about frame i-1's z
    const Vec3 r = chain.ee.position - chain.origin[i];
    j.block<3, 1>(0, i) = z.cross(r);
    j.block<3, 1>(3, i) = z;
  }
  return j;
}

double workspace_radius(const ArmParams& arm) {
  double r = 0.0;
  for (const DhRow& row : arm.dh) r += std::abs(row.a) + std::abs(row.d);
  return r;
}

namespace {

Vec6 clamp_joints(const Vec6& q, const ArmParams& arm) {
  Vec6 out;
  for (int i = 0; i < 6; ++i) out[i] = std::clamp(q[i], arm.joint_min[i], arm.joint_max[i]);
  return out;
}

struct PoseError {
  Vec3 pos;
  Vec3 rot;
};

PoseError pose_error(const Pose& target, const Pose& current) {
  return {target.position - current.position,
          quat_log(target.orientation * current.orientation.conjugate())};
}

}  // namespace

IkResult inverse_kinematics(const Pose& target, const Vec6& seed, const ArmParams& arm,
                            double pos_tol, double ang_tol, int max_iters) {
  IkResult best;
  best.q = clamp_joints(seed, arm);
  double best_score = std::numeric_limits<double>::infinity();

  if (target.position.norm() > workspace_radius(arm) + 1e-9) {
    const PoseError e = pose_error(target, forward_kinematics(best.q, arm));
    best.pos_residual = e.pos.norm();
    best.ang_residual = e.rot.norm();
    return best;  // out of reach
  }

  const double rot_weight = 0.25;  // meters-per-radian tradeoff at arm scale
  const double max_step = 0.5;
  const int restarts = 16;

  Rng restart_rng(0x9D2C5680u);  // fixed seed: IK stays a pure function of its inputs
  int total_iters = 0;

  const auto score_of = [&](const PoseError& e) {
    return e.pos.squaredNorm() + rot_weight * e.rot.squaredNorm();
  };

  for (int attempt = 0; attempt < restarts; ++attempt) {
    Vec6 q = best.q;
    if (attempt > 0 && attempt % 2 == 0) {
      for (int i = 0; i < 6; ++i)
        q[i] = restart_rng.uniform(arm.joint_min[i], arm.joint_max[i]);
    } else if (attempt > 0) {
      for (int i = 0; i < 6; ++i) q[i] += restart_rng.uniform(-0.4, 0.4);
      q = clamp_joints(q, arm);
    }
    PoseError e = pose_error(target, forward_kinematics(q, arm));
    double score = score_of(e);

    for (int iter = 0; iter < max_iters; ++iter) {
      if (score < best_score) {
        best_score = score;
        best.q = q;
        best.pos_residual = e.pos.norm();
        best.ang_residual = e.rot.norm();
      }
      if (e.pos.norm() < pos_tol && e.rot.norm() < ang_tol) {
        best.success = true;
        best.q = q;
        best.pos_residual = e.pos.norm();
        best.ang_residual = e.rot.norm();
        best.iterations = total_iters + iter + 1;
        return best;
      }

      Vec6 err;
      err << e.pos, rot_weight * e.rot;
      Mat6 jw = geometric_jacobian(q, arm);
      jw.bottomRows<3>() *= rot_weight;
      // error-proportional damping keeps far iterates stable and near
      // iterates quadratic
      const double lambda = score + 1e-10;
      const Mat6 h = jw.transpose() * jw + lambda * Mat6::Identity();
      Vec6 dq = h.ldlt().solve(jw.transpose() * err);
      const double n = dq.norm();
      if (n > max_step) dq *= max_step / n;

      // backtracking on the weighted error
      const auto try_direction = [&](const Vec6& dir) {
        double scale = 1.0;
        for (int bt = 0; bt < 10; ++bt) {
          const Vec6 q_try = clamp_joints(q + scale * dir, arm);
          const PoseError e_try = pose_error(target, forward_kinematics(q_try, arm));
          const double s_try = score_of(e_try);
          if (s_try < score) {
            q = q_try;
            e = e_try;
            score = s_try;
            return true;
          }
          scale *= 0.5;
        }
        return false;
      };

      bool accepted = try_direction(dq);
      if (!accepted) accepted = try_direction(jw.transpose() * err);  // steepest descent
      if (!accepted) break;  // stalled; next restart
    }
    total_iters += max_iters;
  }
  best.iterations = total_iters;
  return best;
}

ManipulatorState joint_servo_step(const Vec6& q_des, const ManipulatorState& state,
                                  const ControlGains& gains, const ArmParams& arm, double dt,
                                  JointServoState& servo) {
  const Vec6 err = q_des - state.q;
  servo.integral += err * dt;
  servo.integral = servo.integral.cwiseMax(-gains.joint_i_clamp).cwiseMin(gains.joint_i_clamp);
  Vec6 deriv = Vec6::Zero();
  if (servo.has_prev_error && dt > 0.0) deriv = (err - servo.prev_error) / dt;
  servo.prev_error = err;
  servo.has_prev_error = true;

  Vec6 v_cmd = gains.joint_kp * err + gains.joint_ki * servo.integral + gains.joint_kd * deriv;

  ManipulatorState next = state;
  for (int i = 0; i < 6; ++i) {
    v_cmd[i] = std::clamp(v_cmd[i], -arm.rate_limit[i], arm.rate_limit[i]);
    const double q_new = std::clamp(state.q[i] + v_cmd[i] * dt, arm.joint_min[i], arm.joint_max[i]);
    next.qdot[i] = dt > 0.0 ? (q_new - state.q[i]) / dt : 0.0;
    next.q[i] = q_new;
  }
  return next;
}

double arm_total_mass(const ArmParams& arm) {
  double m = 0.0;
  for (double lm : arm.link_mass) m += lm;
  return m;
}

Vec3 arm_com_body(const Vec6& q, const ArmParams& arm) {
  const FkChain chain = fk_chain(q, arm);
  Vec3 weighted = Vec3::Zero();
  double mass = 0.0;
  for (int i = 0; i < 6; ++i) {
    weighted += arm.link_mass[i] * chain.origin[i + 1];
    mass += arm.link_mass[i];
  }
  if (mass <= 0.0) return arm.mount.position;
  return arm.mount.transform(weighted / mass);
}

BodyWrench coupling_wrench(const Vec3& com_pos_body, const Vec3& com_accel_body, double arm_mass) {
  BodyWrench w;
  w.force = -arm_mass * com_accel_body;
  w.moment = com_pos_body.cross(w.force);
  return w;
}

BodyWrench CouplingTracker::update(const Vec3& com_body, double arm_mass, double dt) {
  BodyWrench out;
  if (dt <= 0.0) return out;
  if (samples_ == 0) {
    prev_com_ = com_body;
    samples_ = 1;
    return out;
  }
  const Vec3 vel = (com_body - prev_com_) / dt;
  if (samples_ == 1) {
    prev_com_ = com_body;
    prev_vel_ = vel;
    samples_ = 2;
    return out;
  }
  const Vec3 accel = (vel - prev_vel_) / dt;
  prev_com_ = com_body;
  prev_vel_ = vel;
  return coupling_wrench(com_body, accel, arm_mass);
}

}  // namespace amsim

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amsim/manipulator.hpp"
#include "amsim/rng.hpp"

using namespace amsim;

namespace {

Vec6 vec6(double a, double b, double c, double d, double e, double f) {
  Vec6 v;
  v << a, b, c, d, e, f;
  return v;
}

}  // namespace

TEST_CASE("fk home pose matches the frozen matrix-product oracle") {
  const ArmParams arm = default_arm_params();
  const Pose home = forward_kinematics(Vec6::Zero(), arm);
  CHECK((home.position - Vec3(0.27, 0.0, -0.15)).norm() < 1e-12);
  // home orientation is a half-turn about x: R = diag(1, -1, -1)
  const Mat3 r = home.rotation();
  CHECK((r - Eigen::DiagonalMatrix<double, 3>(1, -1, -1).toDenseMatrix()).norm() < 1e-9);
}

TEST_CASE("fk at a frozen nonzero configuration") {
  const ArmParams arm = default_arm_params();
  const Pose p = forward_kinematics(vec6(0.3, -0.7, 0.5, 0.2, -0.4, 0.1), arm);
  CHECK(p.position.x() == doctest::Approx(0.1364479918015566).epsilon(1e-12));
  CHECK(p.position.y() == doctest::Approx(0.04787708096462313).epsilon(1e-12));
  CHECK(p.position.z() == doctest::Approx(-0.2861541201249138).epsilon(1e-12));
}

TEST_CASE("joint 1 rotates the end effector about the base z axis") {
  const ArmParams arm = default_arm_params();
  const Pose base = forward_kinematics(Vec6::Zero(), arm);
  for (double theta : {0.3, -0.8, 1.4}) {
    Vec6 q = Vec6::Zero();
    q[0] = theta;
    const Pose p = forward_kinematics(q, arm);
    const Vec3 expected = Eigen::AngleAxisd(theta, Vec3::UnitZ()) * base.position;
    CHECK((p.position - expected).norm() < 1e-12);
  }
}

TEST_CASE("fk is 2pi-periodic per joint") {
  ArmParams arm = default_arm_params();
  for (int i = 0; i < 6; ++i) {
    arm.joint_min[i] = -10.0;
    arm.joint_max[i] = 10.0;
  }
  const Vec6 q = vec6(0.2, -0.4, 0.6, -0.1, 0.5, 0.3);
  for (int j = 0; j < 6; ++j) {
    Vec6 q2 = q;
    q2[j] += 2 * kPi;
    const Pose a = forward_kinematics(q, arm);
    const Pose b = forward_kinematics(q2, arm);
    CHECK((a.position - b.position).norm() < 1e-9);
    CHECK(orientation_distance(a, b) < 1e-9);
  }
}

TEST_CASE("geometric jacobian matches finite differences") {
  const ArmParams arm = default_arm_params();
  Rng rng(17);
  const double h = 1e-7;
  for (int k = 0; k < 50; ++k) {
    Vec6 q;
    for (int i = 0; i < 6; ++i) q[i] = rng.uniform(arm.joint_min[i] * 0.8, arm.joint_max[i] * 0.8);
    const Mat6 j = geometric_jacobian(q, arm);
    const Pose p0 = forward_kinematics(q, arm);
    for (int i = 0; i < 6; ++i) {
      Vec6 qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const Pose pp = forward_kinematics(qp, arm);
      const Pose pm = forward_kinematics(qm, arm);
      const Vec3 dpos = (pp.position - pm.position) / (2 * h);
      const Vec3 drot = quat_log(pp.orientation * pm.orientation.conjugate()) / (2 * h);
      CHECK((j.block<3, 1>(0, i) - dpos).norm() < 1e-5);
      CHECK((j.block<3, 1>(3, i) - drot).norm() < 1e-5);
    }
    (void)p0;
  }
}

TEST_CASE("ik recovers an fk target from a nearby seed") {
  const ArmParams arm = default_arm_params();
  const Vec6 q_star = vec6(0.4, -0.9, 1.1, 0.3, -0.6, 0.2);
  const Pose target = forward_kinematics(q_star, arm);
  const Vec6 seed = q_star + 0.1 * Vec6::Ones();
  const IkResult r = inverse_kinematics(target, seed, arm);
  REQUIRE(r.success);
  const Pose reached = forward_kinematics(r.q, arm);
  CHECK((reached.position - target.position).norm() < 1e-4);
  CHECK(orientation_distance(reached, target) < 1e-3);
}

TEST_CASE("ik fails cleanly outside the workspace radius") {
  const ArmParams arm = default_arm_params();
  Pose target;
  target.position = Vec3(workspace_radius(arm) + 0.5, 0, 0);
  const IkResult r = inverse_kinematics(target, Vec6::Zero(), arm);
  CHECK(!r.success);
  CHECK(r.pos_residual > 0.1);
}

TEST_CASE("ik with the solution as seed converges immediately") {
  const ArmParams arm = default_arm_params();
  const Vec6 q_star = vec6(0.4, -0.9, 1.1, 0.3, -0.6, 0.2);
  const Pose target = forward_kinematics(q_star, arm);
  const IkResult r = inverse_kinematics(target, q_star, arm);
  REQUIRE(r.success);
  CHECK(r.iterations <= 2);
}

TEST_CASE("ik/fk round trip succeeds on at least 99% of random poses") {
  const ArmParams arm = default_arm_params();
  const Vec6 seed = vec6(0.0, -0.8, 1.2, 0.0, 0.6, 0.0);
  Rng rng(1234);
  int ok = 0;
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    Vec6 q_star;
    for (int i = 0; i < 6; ++i)
      q_star[i] = rng.uniform(arm.joint_min[i] * 0.9, arm.joint_max[i] * 0.9);
    const Pose target = forward_kinematics(q_star, arm);
    const IkResult r = inverse_kinematics(target, seed, arm);
    if (!r.success) continue;
    const Pose reached = forward_kinematics(r.q, arm);
    if ((reached.position - target.position).norm() < 1e-4 &&
        orientation_distance(reached, target) < 1e-3)
      ++ok;
  }
  CHECK(ok >= 990);
}

TEST_CASE("joint servo is a fixed point at the setpoint") {
  const ArmParams arm = default_arm_params();
  const ControlGains g;
  ManipulatorState s;
  s.q = vec6(0.1, -0.2, 0.3, 0.0, 0.4, -0.1);
  JointServoState servo;
  const ManipulatorState next = joint_servo_step(s.q, s, g, arm, 0.01, servo);
  CHECK((next.q - s.q).norm() < 1e-12);
}

TEST_CASE("joint servo slews at exactly the rate limit under large error") {
  const ArmParams arm = default_arm_params();
  const ControlGains g;
  ManipulatorState s;
  JointServoState servo;
  const double dt = 0.01;
  Vec6 q_des = Vec6::Zero();
  q_des[0] = 2.5;  // far away
  const ManipulatorState next = joint_servo_step(q_des, s, g, arm, dt, servo);
  CHECK(std::abs(next.q[0] - s.q[0]) == doctest::Approx(arm.rate_limit[0] * dt).epsilon(1e-12));
}

TEST_CASE("joint servo step response settles within one second") {
  const ArmParams arm = default_arm_params();
  const ControlGains g;
  ManipulatorState s;
  JointServoState servo;
  Vec6 q_des = Vec6::Zero();
  q_des[1] = 0.5;
  const double dt = 0.01;
  double settle_time = -1.0;
  for (int i = 0; i < 200; ++i) {
    s = joint_servo_step(q_des, s, g, arm, dt, servo);
    if (settle_time < 0 && std::abs(s.q[1] - 0.5) < 0.01) settle_time = i * dt;
    if (settle_time >= 0 && std::abs(s.q[1] - 0.5) >= 0.01) settle_time = -1.0;
  }
  CHECK(settle_time >= 0.0);
  CHECK(settle_time <= 1.0);
}

TEST_CASE("stationary arm produces zero coupling wrench") {
  const ArmParams arm = default_arm_params();
  CouplingTracker tracker;
  const Vec3 com = arm_com_body(Vec6::Zero(), arm);
  for (int i = 0; i < 5; ++i) {
    const BodyWrench w = tracker.update(com, arm_total_mass(arm), 0.01);
    CHECK(w.force.norm() < 1e-12);
    CHECK(w.moment.norm() < 1e-12);
  }
}

TEST_CASE("accelerating CoM produces the Newton reaction force") {
  CouplingTracker tracker;
  const double m = 0.8, a = 2.0, dt = 0.01;
  // com follows 0.5*a*t^2 along +x; central differences recover a exactly
  Vec3 base(0.2, 0.0, -0.1);
  for (int i = 0; i < 10; ++i) {
    const double t = i * dt;
    const Vec3 com = base + Vec3(0.5 * a * t * t, 0, 0);
    const BodyWrench w = tracker.update(com, m, dt);
    if (i >= 2) {
      CHECK(w.force.x() == doctest::Approx(-m * a).epsilon(1e-9));
      CHECK(std::abs(w.force.y()) < 1e-12);
    }
  }
}

TEST_CASE("point-mirrored configurations cancel their coupling moments") {
  Rng rng(55);
  for (int k = 0; k < 100; ++k) {
    const Vec3 r(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
    const Vec3 a(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    const BodyWrench w1 = coupling_wrench(r, a, 0.8);
    const BodyWrench w2 = coupling_wrench(-r, a, 0.8);
    CHECK((w1.moment + w2.moment).norm() < 1e-9);
  }
}

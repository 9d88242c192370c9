#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amsim/rng.hpp"
#include "amsim/world.hpp"
#include "test_helpers.hpp"

using namespace amsim;

TEST_CASE("pedestrian pose at t=0 is the first waypoint") {
  Pedestrian p;
  p.waypoints = {Vec3(1, 2, 0), Vec3(4, 2, 0)};
  p.speed = 1.3;
  p.loop = false;
  CHECK((pedestrian_pose_at(p, 0.0).position - Vec3(1, 2, 0)).norm() < 1e-12);
}

TEST_CASE("pedestrian mid-segment position") {
  Pedestrian p;
  p.waypoints = {Vec3(0, 0, 0), Vec3(2, 0, 0)};
  p.speed = 1.0;
  p.loop = false;
  CHECK((pedestrian_pose_at(p, 1.0).position - Vec3(1, 0, 0)).norm() < 1e-12);
  // clamped at the end
  CHECK((pedestrian_pose_at(p, 10.0).position - Vec3(2, 0, 0)).norm() < 1e-12);
}

TEST_CASE("looped pedestrian wraps by total arc length") {
  Pedestrian p;
  p.waypoints = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 2, 0)};
  p.speed = 1.0;
  p.loop = true;

  // modular-arithmetic oracle: position at arc length L + 0.5 equals position
  // at arc length 0.5
  const double total = pedestrian_path_length(p);
  CHECK(total == doctest::Approx(2.0 + 2.0 + std::sqrt(8.0)));
  const Vec3 a = pedestrian_pose_at(p, (total + 0.5) / p.speed).position;
  const Vec3 b = pedestrian_pose_at(p, 0.5 / p.speed).position;
  CHECK((a - b).norm() < 1e-9);
}

TEST_CASE("pedestrian yaw faces travel direction") {
  Pedestrian p;
  p.waypoints = {Vec3(0, 0, 0), Vec3(0, 3, 0)};
  p.speed = 1.0;
  const Pose pose = pedestrian_pose_at(p, 1.0);
  const Vec3 fwd = pose.rotate(Vec3::UnitX());
  CHECK((fwd - Vec3(0, 1, 0)).norm() < 1e-9);
}

TEST_CASE("pedestrian position is speed-continuous in t") {
  Pedestrian p;
  p.waypoints = {Vec3(0, 0, 0), Vec3(3, 0, 0), Vec3(3, 3, 0), Vec3(-1, 3, 0)};
  p.speed = 1.7;
  p.loop = true;
  const double eps = 1e-4;
  for (int i = 0; i <= 2000; ++i) {
    const double t = i * 0.01;
    const Vec3 a = pedestrian_pose_at(p, t).position;
    const Vec3 b = pedestrian_pose_at(p, t + eps).position;
    CHECK((b - a).norm() <= p.speed * eps + 1e-9);
  }
}

TEST_CASE("static distance to a unit box") {
  Scenario s = test::wide_open_scenario();
  s.boxes.push_back(BoxObstacle{Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5), 0.0});

  CHECK(static_distance(s, Vec3(1.5, 0, 0)) == doctest::Approx(1.0));
  CHECK(static_distance(s, Vec3(1.5, 1.5, 0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(static_distance(s, Vec3(0, 0, 0)) == doctest::Approx(-0.5));
}

TEST_CASE("static distance respects box yaw") {
  Scenario s = test::wide_open_scenario();
  s.boxes.push_back(BoxObstacle{Vec3(0, 0, 0), Vec3(1.0, 0.2, 0.5), kPi / 2});
  // after 90deg yaw the long side lies along y
  CHECK(static_distance(s, Vec3(1.2, 0, 0)) == doctest::Approx(1.0));
  CHECK(static_distance(s, Vec3(0, 2.0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("static distance includes floor and walls") {
  Scenario s = test::wide_open_scenario();
  s.bounds.min = Vec3(0, 0, 0);
  s.bounds.max = Vec3(10, 10, 3);
  s.target.pose.position = Vec3(5, 5, 1);
  s.crude_center = Vec3(5, 5, 1);
  CHECK(static_distance(s, Vec3(5, 5, 0.7)) == doctest::Approx(0.7));  // floor
  CHECK(static_distance(s, Vec3(0.4, 5, 1.5)) == doctest::Approx(0.4));  // x wall
}

TEST_CASE("static distance is 1-Lipschitz") {
  Scenario s = test::wide_open_scenario();
  s.boxes.push_back(BoxObstacle{Vec3(1, 0, 0), Vec3(0.5, 0.8, 0.3), 0.4});
  s.boxes.push_back(BoxObstacle{Vec3(-2, 1, 0.5), Vec3(1.0, 0.2, 0.5), -0.9});

  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 a(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    const Vec3 b(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    CHECK(std::abs(static_distance(s, a) - static_distance(s, b)) <= (a - b).norm() + 1e-9);
  }
}

TEST_CASE("ray cast hits a wall along its normal") {
  Scenario s = test::wide_open_scenario();
  s.bounds.min = Vec3(0, 0, 0);
  s.bounds.max = Vec3(10, 10, 3);
  s.target.pose.position = Vec3(5, 5, 1);
  s.crude_center = Vec3(5, 5, 1);

  const auto hit = ray_cast(s, Vec3(8, 5, 1), Vec3(1, 0, 0), 20.0, 0.0);
  REQUIRE(hit.has_value());
  CHECK(hit->distance == doctest::Approx(2.0));
  CHECK(hit->hit_class == HitClass::Static);
}

TEST_CASE("ray cast into open sky misses") {
  Scenario s = test::wide_open_scenario();
  s.bounds.min = Vec3(0, 0, 0);
  s.bounds.max = Vec3(10, 10, 3);
  s.target.pose.position = Vec3(9, 9, 1);
  s.crude_center = Vec3(9, 9, 1);
  CHECK(!ray_cast(s, Vec3(5, 5, 1), Vec3(0, 0, 1), 50.0, 0.0).has_value());
}

TEST_CASE("ray cast hits a pedestrian cylinder at the quadratic-oracle distance") {
  Scenario s = test::wide_open_scenario();
  Pedestrian p;
  p.waypoints = {Vec3(3, 0, -1), Vec3(3, 5, -1)};
  p.speed = 1.0;
  p.radius = 0.3;
  p.height = 2.0;
  s.pedestrians.push_back(p);

  const Vec3 origin(0, 0, 0);
  const Vec3 dir(1, 0, 0);
  const auto hit = ray_cast(s, origin, dir, 10.0, 0.0);
  REQUIRE(hit.has_value());
  CHECK(hit->hit_class == HitClass::Moving);
  CHECK(hit->distance == doctest::Approx(2.7));

  // independent quadratic oracle on a skewed ray
  const Vec3 o2(0.1, -0.2, 0.0);
  const Vec3 d2 = Vec3(1.0, 0.05, 0.02).normalized();
  const auto hit2 = ray_cast(s, o2, d2, 10.0, 0.0);
  REQUIRE(hit2.has_value());
  const double ox = o2.x() - 3.0, oy = o2.y() - 0.0;
  const double a = d2.x() * d2.x() + d2.y() * d2.y();
  const double b = 2 * (ox * d2.x() + oy * d2.y());
  const double c = ox * ox + oy * oy - 0.3 * 0.3;
  const double t_oracle = (-b - std::sqrt(b * b - 4 * a * c)) / (2 * a);
  CHECK(hit2->distance == doctest::Approx(t_oracle).epsilon(1e-9));
}

TEST_CASE("static ray hits land on the zero level set of static_distance") {
  Scenario s = test::wide_open_scenario();
  s.bounds.min = Vec3(-10, -10, -10);
  s.bounds.max = Vec3(10, 10, 10);
  s.boxes.push_back(BoxObstacle{Vec3(4, 0.5, 0), Vec3(0.7, 0.9, 1.1), 0.35});
  s.target.pose.position = Vec3(-9, -9, -9);
  s.crude_center = Vec3(-9, -9, -9);

  Rng rng(4);
  int hits = 0;
  for (int i = 0; i < 500; ++i) {
    const Vec3 origin(rng.uniform(-3, 1), rng.uniform(-3, 3), rng.uniform(-2, 2));
    Vec3 dir(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (dir.norm() < 1e-6) continue;
    dir.normalize();
    const auto hit = ray_cast(s, origin, dir, 15.0, 0.0);
    if (hit && hit->hit_class == HitClass::Static) {
      ++hits;
      CHECK(std::abs(static_distance(s, origin + hit->distance * dir)) <= 1e-6);
    }
  }
  CHECK(hits > 50);
}

TEST_CASE("ray cast classifies the target cylinder") {
  Scenario s = test::wide_open_scenario();
  s.target.pose.position = Vec3(5, 0, 1);
  s.target.radius = 0.04;
  s.target.height = 0.25;
  s.crude_center = Vec3(5, 0, 1);
  const auto hit = ray_cast(s, Vec3(0, 0, 1), Vec3(1, 0, 0), 10.0, 0.0);
  REQUIRE(hit.has_value());
  CHECK(hit->hit_class == HitClass::Target);
  CHECK(hit->distance == doctest::Approx(5.0 - 0.04));
}

TEST_CASE("marker corners form a coplanar square of the stated side") {
  TargetObject t;
  t.pose.position = Vec3(2, 1, 0.8);
  t.pose.orientation = quat_from_yaw(0.7);
  t.radius = 0.05;
  t.marker_half_size = 0.06;

  const auto corners = marker_corners_world(t);
  const Vec3 n = marker_normal_world(t);
  const double d0 = n.dot(corners[0]);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(n.dot(corners[i]) - d0) < 1e-12);
  for (int i = 0; i < 4; ++i) {
    const double side = (corners[(i + 1) % 4] - corners[i]).norm();
    CHECK(side == doctest::Approx(2 * t.marker_half_size));
  }
  const double diag = (corners[2] - corners[0]).norm();
  CHECK(diag == doctest::Approx(2 * t.marker_half_size * std::sqrt(2.0)));
}

TEST_CASE("cylinder surface distance sign convention") {
  const VerticalCylinder c{Vec3(0, 0, 0), 0.5, 2.0};
  CHECK(cylinder_surface_distance(c, Vec3(2, 0, 1)) == doctest::Approx(1.5));
  CHECK(cylinder_surface_distance(c, Vec3(0, 0, 3)) == doctest::Approx(1.0));
  CHECK(cylinder_surface_distance(c, Vec3(0, 0, 1)) < 0.0);
  // exterior corner: diagonal distance
  CHECK(cylinder_surface_distance(c, Vec3(1.5, 0, 3.0)) == doctest::Approx(std::hypot(1.0, 1.0)));
}

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "amsim/geometry.hpp"
#include "amsim/scenario.hpp"

namespace amsim {

enum class HitClass { Static, Moving, Ground, Target };

struct RayHit {
  double distance = 0.0;
  HitClass hit_class = HitClass::Static;
};

// Vertical capped cylinder: base center + radius/height. Pedestrian proxy.
struct VerticalCylinder {
  Vec3 base{Vec3::Zero()};
  double radius = 0.0;
  double height = 0.0;
};

// Position on the waypoint polyline at arc length speed*t (mod total length
// when looping, clamped otherwise); yaw faces the direction of travel.
Pose pedestrian_pose_at(const Pedestrian& p, double t);

// Total polyline length, including the closing segment for looped paths.
double pedestrian_path_length(const Pedestrian& p);

// Signed distance from a point to the capped cylinder surface (negative inside).
double cylinder_surface_distance(const VerticalCylinder& c, const Vec3& p);

// Signed distance to a yawed box surface (negative inside).
double box_surface_distance(const BoxObstacle& b, const Vec3& p);

// Marker corners in world frame, fixed order: the square sits on the plane
// tangent to the cylinder at its local +x face, corners at local
// (r, -h, -h), (r, +h, -h), (r, +h, +h), (r, -h, +h).
std::array<Vec3, 4> marker_corners_world(const TargetObject& t);

// Outward marker normal in world frame (target local +x).
Vec3 marker_normal_world(const TargetObject& t);
Vec3 marker_center_world(const TargetObject& t);

// Immutable geometry snapshot with trig caches; cheap to build, safe to share.
class WorldModel {
 public:
  explicit WorldModel(const Scenario& s);

  const Scenario& scenario() const { return *scenario_; }

  std::vector<VerticalCylinder> pedestrian_cylinders_at(double t) const;

  // Nearest intersection among boxes, walls, floor, target cylinder and the
  // supplied pedestrian cylinders. Empty when nothing is hit within max_range.
  std::optional<RayHit> ray_cast(const Vec3& origin, const Vec3& dir, double max_range,
                                 const std::vector<VerticalCylinder>& pedestrians) const;

  // Minimum signed distance over boxes, the floor plane (bounds.min.z) and the
  // four wall planes. Negative inside an obstacle or outside the walls.
  double static_distance(const Vec3& p) const;

 private:
  struct CachedBox {
    Vec3 center;
    Vec3 half_extents;
    Mat3 world_from_box;
    Mat3 box_from_world;
  };

  const Scenario* scenario_;
  std::vector<CachedBox> boxes_;
  WorldBounds bounds_;
  Pose target_pose_;
  double target_radius_;
  double target_height_;
};

// Convenience wrappers matching the one-shot query surface; they build a
// WorldModel per call, so hot loops should hold a WorldModel instead.
double static_distance(const Scenario& s, const Vec3& p);
std::optional<RayHit> ray_cast(const Scenario& s, const Vec3& origin, const Vec3& dir,
                               double max_range, double t);

// Smallest distance from a point to any pedestrian's surface at time t;
// +infinity when the scenario has no pedestrians.
double min_pedestrian_distance(const Scenario& s, const Vec3& p, double t);

}  // namespace amsim

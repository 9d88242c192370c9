#include "amsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amsim {

namespace {

constexpr double kRayEps = 1e-9;

// Arc-length table over the polyline; appends the closing segment when looped.
std::vector<Vec3> effective_waypoints(const Pedestrian& p) {
  std::vector<Vec3> wps = p.waypoints;
  if (p.loop && (wps.front() - wps.back()).norm() > 1e-9) wps.push_back(wps.front());
  return wps;
}

// Ray vs axis-aligned slab pair; updates [tmin, tmax]. Returns false on miss.
bool slab(double o, double d, double lo, double hi, double& tmin, double& tmax) {
  if (std::abs(d) < 1e-12) return o >= lo && o <= hi;
  double t1 = (lo - o) / d;
  double t2 = (hi - o) / d;
  if (t1 > t2) std::swap(t1, t2);
  tmin = std::max(tmin, t1);
  tmax = std::min(tmax, t2);
  return tmin <= tmax;
}

std::optional<double> ray_box(const Vec3& o_box, const Vec3& d_box, const Vec3& he,
                              double max_range) {
  double tmin = 0.0, tmax = max_range;
  for (int ax = 0; ax < 3; ++ax)
    if (!slab(o_box[ax], d_box[ax], -he[ax], he[ax], tmin, tmax)) return std::nullopt;
  if (tmin > kRayEps) return tmin;
  if (tmax > kRayEps) return tmax;  // origin inside the box
  return std::nullopt;
}

// Finite vertical cylinder (lateral surface + caps).
std::optional<double> ray_vertical_cylinder(const Vec3& o, const Vec3& d, const VerticalCylinder& c,
                                            double max_range) {
  const double zlo = c.base.z();
  const double zhi = c.base.z() + c.height;
  double best = std::numeric_limits<double>::infinity();

  const double ox = o.x() - c.base.x();
  const double oy = o.y() - c.base.y();
  const double a = d.x() * d.x() + d.y() * d.y();
  const double b = 2.0 * (ox * d.x() + oy * d.y());
  const double cc = ox * ox + oy * oy - c.radius * c.radius;
  if (a > 1e-12) {
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t > kRayEps && t < best) {
          const double z = o.z() + t * d.z();
          if (z >= zlo && z <= zhi) best = t;
        }
      }
    }
  }
  // caps
  for (double zcap : {zlo, zhi}) {
    if (std::abs(d.z()) < 1e-12) continue;
    const double t = (zcap - o.z()) / d.z();
    if (t > kRayEps && t < best) {
      const double hx = ox + t * d.x();
      const double hy = oy + t * d.y();
      if (hx * hx + hy * hy <= c.radius * c.radius) best = t;
    }
  }
  if (best <= max_range && std::isfinite(best)) return best;
  return std::nullopt;
}

// Oriented finite cylinder along the pose's local z axis, centered on position.
std::optional<double> ray_oriented_cylinder(const Vec3& o, const Vec3& d, const Pose& pose,
                                            double radius, double height, double max_range) {
  const Pose inv = pose.inverse();
  VerticalCylinder local;
  local.base = Vec3(0, 0, -height / 2.0);
  local.radius = radius;
  local.height = height;
  return ray_vertical_cylinder(inv.transform(o), inv.rotate(d), local, max_range);
}

}  // namespace

double pedestrian_path_length(const Pedestrian& p) {
  const std::vector<Vec3> wps = effective_waypoints(p);
  double total = 0.0;
  for (std::size_t i = 1; i < wps.size(); ++i) total += (wps[i] - wps[i - 1]).norm();
  return total;
}

Pose pedestrian_pose_at(const Pedestrian& p, double t) {
  const std::vector<Vec3> wps = effective_waypoints(p);
  double total = 0.0;
  for (std::size_t i = 1; i < wps.size(); ++i) total += (wps[i] - wps[i - 1]).norm();

  double s = p.speed * std::max(t, 0.0);
  if (p.loop) {
    s = std::fmod(s, total);
    if (s < 0.0) s += total;
  } else {
    s = std::min(s, total);
  }

  Pose out;
  Vec3 dir = (wps[1] - wps[0]).normalized();
  for (std::size_t i = 1; i < wps.size(); ++i) {
    const double seg = (wps[i] - wps[i - 1]).norm();
    if (s <= seg || i + 1 == wps.size()) {
      const double u = seg > 0.0 ? std::min(s, seg) / seg : 0.0;
      out.position = wps[i - 1] + u * (wps[i] - wps[i - 1]);
      dir = (wps[i] - wps[i - 1]).normalized();
      break;
    }
    s -= seg;
  }
  const double yaw = (dir.head<2>().norm() > 1e-12) ? std::atan2(dir.y(), dir.x()) : 0.0;
  out.orientation = quat_from_yaw(yaw);
  return out;
}

double cylinder_surface_distance(const VerticalCylinder& c, const Vec3& p) {
  const double dr = std::hypot(p.x() - c.base.x(), p.y() - c.base.y()) - c.radius;
  const double dz = std::abs(p.z() - (c.base.z() + c.height / 2.0)) - c.height / 2.0;
  const double outside = std::hypot(std::max(dr, 0.0), std::max(dz, 0.0));
  const double inside = std::min(std::max(dr, dz), 0.0);
  return outside + inside;
}

double box_surface_distance(const BoxObstacle& b, const Vec3& p) {
  const double cy = std::cos(b.yaw), sy = std::sin(b.yaw);
  const Vec3 rel = p - b.center;
  const Vec3 local(cy * rel.x() + sy * rel.y(), -sy * rel.x() + cy * rel.y(), rel.z());
  const Vec3 q = local.cwiseAbs() - b.half_extents;
  const Vec3 qpos = q.cwiseMax(0.0);
  return qpos.norm() + std::min(q.maxCoeff(), 0.0);
}

std::array<Vec3, 4> marker_corners_world(const TargetObject& t) {
  const double r = t.radius, h = t.marker_half_size;
  const std::array<Vec3, 4> local = {Vec3(r, -h, -h), Vec3(r, h, -h), Vec3(r, h, h),
                                     Vec3(r, -h, h)};
  std::array<Vec3, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = t.pose.transform(local[i]);
  return out;
}

Vec3 marker_normal_world(const TargetObject& t) { return t.pose.rotate(Vec3::UnitX()); }

Vec3 marker_center_world(const TargetObject& t) {
  return t.pose.transform(Vec3(t.radius, 0.0, 0.0));
}

WorldModel::WorldModel(const Scenario& s)
    : scenario_(&s),
      bounds_(s.bounds),
      target_pose_(s.target.pose),
      target_radius_(s.target.radius),
      target_height_(s.target.height) {
  boxes_.reserve(s.boxes.size());
  for (const BoxObstacle& b : s.boxes) {
    CachedBox cb;
    cb.center = b.center;
    cb.half_extents = b.half_extents;
    cb.world_from_box = Eigen::AngleAxisd(b.yaw, Vec3::UnitZ()).toRotationMatrix();
    cb.box_from_world = cb.world_from_box.transpose();
    boxes_.push_back(cb);
  }
}

std::vector<VerticalCylinder> WorldModel::pedestrian_cylinders_at(double t) const {
  std::vector<VerticalCylinder> out;
  out.reserve(scenario_->pedestrians.size());
  for (const Pedestrian& p : scenario_->pedestrians) {
    const Pose pose = pedestrian_pose_at(p, t);
    out.push_back(VerticalCylinder{pose.position, p.radius, p.height});
  }
  return out;
}

std::optional<RayHit> WorldModel::ray_cast(const Vec3& origin, const Vec3& dir, double max_range,
                                           const std::vector<VerticalCylinder>& pedestrians) const {
  double best = max_range;
  bool hit = false;
  HitClass cls = HitClass::Static;

  for (const CachedBox& b : boxes_) {
    const Vec3 o_box = b.box_from_world * (origin - b.center);
    const Vec3 d_box = b.box_from_world * dir;
    if (auto t = ray_box(o_box, d_box, b.half_extents, best)) {
      best = *t;
      hit = true;
      cls = HitClass::Static;
    }
  }

  // Floor at the bottom of the bounds; ceiling stays open.
  if (std::abs(dir.z()) > 1e-12) {
    const double t = (bounds_.min.z() - origin.z()) / dir.z();
    if (t > kRayEps && t < best) {
      best = t;
      hit = true;
      cls = HitClass::Ground;
    }
  }

  // Four wall planes spanning the full bounds height.
  struct WallPlane {
    int axis;
    double coord;
  };
  const WallPlane walls[4] = {{0, bounds_.min.x()}, {0, bounds_.max.x()},
                              {1, bounds_.min.y()}, {1, bounds_.max.y()}};
  for (const WallPlane& w : walls) {
    if (std::abs(dir[w.axis]) < 1e-12) continue;
    const double t = (w.coord - origin[w.axis]) / dir[w.axis];
    if (t <= kRayEps || t >= best) continue;
    const Vec3 p = origin + t * dir;
    const int lat = 1 - w.axis;
    if (p[lat] < bounds_.min[lat] - 1e-9 || p[lat] > bounds_.max[lat] + 1e-9) continue;
    if (p.z() < bounds_.min.z() - 1e-9 || p.z() > bounds_.max.z() + 1e-9) continue;
    best = t;
    hit = true;
    cls = HitClass::Static;
  }

  if (auto t = ray_oriented_cylinder(origin, dir, target_pose_, target_radius_, target_height_,
                                     best)) {
    best = *t;
    hit = true;
    cls = HitClass::Target;
  }

  for (const VerticalCylinder& c : pedestrians) {
    if (auto t = ray_vertical_cylinder(origin, dir, c, best)) {
      best = *t;
      hit = true;
      cls = HitClass::Moving;
    }
  }

  if (!hit) return std::nullopt;
  return RayHit{best, cls};
}

double WorldModel::static_distance(const Vec3& p) const {
  double d = p.z() - bounds_.min.z();  // floor
  d = std::min(d, p.x() - bounds_.min.x());
  d = std::min(d, bounds_.max.x() - p.x());
  d = std::min(d, p.y() - bounds_.min.y());
  d = std::min(d, bounds_.max.y() - p.y());
  for (const CachedBox& b : boxes_) {
    const Vec3 local = b.box_from_world * (p - b.center);
    const Vec3 q = local.cwiseAbs() - b.half_extents;
    const Vec3 qpos = q.cwiseMax(0.0);
    d = std::min(d, qpos.norm() + std::min(q.maxCoeff(), 0.0));
  }
  return d;
}

double static_distance(const Scenario& s, const Vec3& p) {
  return WorldModel(s).static_distance(p);
}

std::optional<RayHit> ray_cast(const Scenario& s, const Vec3& origin, const Vec3& dir,
                               double max_range, double t) {
  const WorldModel model(s);
  return model.ray_cast(origin, dir, max_range, model.pedestrian_cylinders_at(t));
}

double min_pedestrian_distance(const Scenario& s, const Vec3& p, double t) {
  double best = std::numeric_limits<double>::infinity();
  for (const Pedestrian& ped : s.pedestrians) {
    const Pose pose = pedestrian_pose_at(ped, t);
    best = std::min(best,
                    cylinder_surface_distance({pose.position, ped.radius, ped.height}, p));
  }
  return best;
}

}  // namespace amsim

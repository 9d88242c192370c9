#pragma once

#include "amsim/scenario.hpp"

namespace amsim::test {

// Wide, empty world: walls and floor far away so box/cylinder geometry under
// test dominates every distance query.
inline Scenario wide_open_scenario() {
  Scenario s;
  s.bounds.min = Vec3(-100, -100, -100);
  s.bounds.max = Vec3(100, 100, 100);
  s.target.pose.position = Vec3(50, 50, 50);
  s.crude_center = Vec3(50, 50, 40);
  s.crude_radius = 1.5;
  fill_default_rotor_layout(s.vehicle);
  s.vehicle.arm = default_arm_params();
  return s;
}

}  // namespace amsim::test

#pragma once

#include <random>
#include <vector>

#include "hpkm/params.hpp"
#include "hpkm/trajectory.hpp"
#include "hpkm/types.hpp"
#include "hpkm/wrist.hpp"

namespace hpkm::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x9d2c5680u);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

// Pose with the wrist center inside the cube workspace and the tilt strictly
// inside the cone, so every branch of the default working mode is feasible.
inline Pose random_pose(const MachineParams& params) {
  const double a = uniform(-0.95, 0.95) * params.tilt_limit;
  const double b = uniform(-0.95, 0.95) * params.tilt_limit;
  const Vec3 center(uniform(0.02, 0.48), uniform(0.02, 0.48), uniform(0.02, 0.48));
  return Pose{a, b, center + params.tool_length * tool_direction(a, b)};
}

inline Twist random_twist(double scale_rot, double scale_trans) {
  Twist t;
  t << uniform(-scale_rot, scale_rot), uniform(-scale_rot, scale_rot),
      uniform(-scale_trans, scale_trans), uniform(-scale_trans, scale_trans),
      uniform(-scale_trans, scale_trans);
  return t;
}

inline double deg(double d) { return d * k_pi / 180.0; }

// Machine of the reference tours: 72 mm tool, so the home tip sits at
// z = -72 mm with the wrist center at the origin.
inline MachineParams reference_machine() {
  MachineParams m;
  m.tool_length = 0.072;
  return m;
}

// Reference linear tour P1 -> P2 -> P3 -> P4 (= P1); angles (alpha, beta) and
// tool-tip coordinates.
inline std::vector<Pose> reference_tour() {
  return {
      Pose{0.0, 0.0, Vec3(0.0, 0.0, -0.072)},
      Pose{deg(20.0), 0.0, Vec3(0.140, 0.130, 0.060)},
      Pose{0.0, deg(20.0), Vec3(-0.240, -0.230, -0.180)},
      Pose{0.0, 0.0, Vec3(0.0, 0.0, -0.072)},
  };
}

// Reference circular move: full turn of 30 mm radius about (10,10,10) mm in
// an untilted plane, tool swinging from (20 deg, 0) to (0, 20 deg).
inline CircleSpec reference_circle() {
  CircleSpec spec;
  spec.center = Vec3(0.010, 0.010, 0.010);
  spec.radius = 0.030;
  spec.eta_min = 0.0;
  spec.eta_max = 2.0 * k_pi;
  spec.alpha1 = 0.0;
  spec.beta1 = 0.0;
  spec.a2 = deg(20.0);
  spec.b2 = 0.0;
  spec.a3 = 0.0;
  spec.b3 = deg(20.0);
  return spec;
}

}  // namespace hpkm::testing

#pragma once

#include <Eigen/Dense>

#include <array>

namespace hpkm {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

inline constexpr double k_pi = 3.14159265358979323846;

// Denominators smaller than this are treated as singular.
inline constexpr double k_singular_tol = 1e-9;

// Operational-space pose: wrist tilt angles (rad) and tool tip position (m).
struct Pose {
  double alpha = 0.0;
  double beta = 0.0;
  Vec3 tip = Vec3::Zero();

  Vec5 vector() const {
    Vec5 v;
    v << alpha, beta, tip.x(), tip.y(), tip.z();
    return v;
  }
  static Pose from_vector(const Vec5& v) {
    return Pose{v[0], v[1], Vec3(v[2], v[3], v[4])};
  }
};

// Actuated joints: wrist motor angles (rad) and prismatic extensions (m).
struct JointState {
  double theta1 = 0.0;
  double theta2 = 0.0;
  Vec3 rho = Vec3::Zero();

  Vec5 vector() const {
    Vec5 v;
    v << theta1, theta2, rho.x(), rho.y(), rho.z();
    return v;
  }
  static JointState from_vector(const Vec5& v) {
    return JointState{v[0], v[1], Vec3(v[2], v[3], v[4])};
  }
};

// Twist ordering matches Pose::vector(): (alpha_dot, beta_dot, x_dot, y_dot, z_dot).
using Twist = Vec5;

// Branch signs of the translational inverse kinematics, one per leg.
struct WorkingMode {
  std::array<int, 3> sign{+1, +1, +1};
};

// Root branch of the translational forward kinematics quadratic. The negative
// branch pairs with the all-positive working mode around the machine's cube
// workspace.
struct AssemblyMode {
  int sign = -1;
};

}  // namespace hpkm

#include "hpkm/hybrid.hpp"

#include <cmath>
#include <string>

namespace hpkm {

namespace {

// Partial derivatives of tool_direction with respect to (alpha, beta).
void direction_partials(double alpha, double beta, Vec3& u_a, Vec3& u_b) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  u_a = Vec3(0.0, ca * cb, sa * cb);
  u_b = Vec3(-cb, -sa * sb, ca * sb);
}

// Wrist block of the full inverse Jacobian with theta2 eliminated:
//   d(theta2)/d(alpha) = S(a) S(b) C(b) / r2
//   d(theta2)/d(beta)  = C(a) / r2        with r2 = C^2(a) C^2(b) + S^2(b).
void wrist_block(double alpha, double beta, double& w21, double& w22) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  const double r2 = ca * ca * cb * cb + sb * sb;
  if (r2 < k_singular_tol)
    raise(Errc::singular, "wrist Jacobian singular");
  w21 = sa * sb * cb / r2;
  w22 = ca / r2;
}

}  // namespace

JointState ik_full(const Pose& pose, const MachineParams& params,
                   const WorkingMode& mode, bool check_limits) {
  if (check_limits && (std::abs(pose.alpha) > params.tilt_limit ||
                       std::abs(pose.beta) > params.tilt_limit))
    raise(Errc::tilt_limit, "tilt limit exceeded");
  const WristAngles wrist = ik_wrist(pose.alpha, pose.beta);
  const Vec3 rho = ik_translation(wrist_center_of(pose, params), params, mode);
  if (check_limits) {
    for (int leg = 0; leg < 3; ++leg)
      if (rho[leg] < params.rho_min || rho[leg] > params.rho_max)
        raise(Errc::joint_limit,
              "extension " + std::to_string(rho[leg]) + " outside [" +
                  std::to_string(params.rho_min) + ", " +
                  std::to_string(params.rho_max) + "]",
              leg);
  }
  return JointState{wrist.theta1, wrist.theta2, rho};
}

Pose fk_full(const JointState& q, const MachineParams& params,
             const AssemblyMode& mode) {
  const TranslationFk t = fk_translation(q.rho, params, mode);
  const WristFk w = fk_wrist(WristAngles{q.theta1, q.theta2});
  return Pose{w.alpha, w.beta,
              t.center + params.tool_length * tool_direction(w.alpha, w.beta)};
}

Mat32 coupling_jacobian(const Pose& pose, const Vec3& rho,
                        const MachineParams& params) {
  const Vec3 center = wrist_center_of(pose, params);
  Vec3 u_a, u_b;
  direction_partials(pose.alpha, pose.beta, u_a, u_b);
  Mat32 tip_coupling;
  tip_coupling.col(0) = -params.tool_length * u_a;
  tip_coupling.col(1) = -params.tool_length * u_b;
  return inv_jacobian_translation(center, rho) * tip_coupling;
}

Mat5 full_inv_jacobian(const Pose& pose, const JointState& q,
                       const MachineParams& params) {
  double w21 = 0.0, w22 = 0.0;
  wrist_block(pose.alpha, pose.beta, w21, w22);
  const Vec3 center = wrist_center_of(pose, params);
  const Mat3 jo = inv_jacobian_translation(center, q.rho);
  Vec3 u_a, u_b;
  direction_partials(pose.alpha, pose.beta, u_a, u_b);
  Mat32 tip_coupling;
  tip_coupling.col(0) = -params.tool_length * u_a;
  tip_coupling.col(1) = -params.tool_length * u_b;

  Mat5 jac = Mat5::Zero();
  jac(0, 0) = 1.0;
  jac(1, 0) = w21;
  jac(1, 1) = w22;
  jac.block<3, 2>(2, 0) = jo * tip_coupling;
  jac.block<3, 3>(2, 2) = jo;
  return jac;
}

Mat5 full_inv_jacobian_dot(const Pose& pose, const JointState& q,
                           const Twist& twist, const MachineParams& params) {
  const double sa = std::sin(pose.alpha), ca = std::cos(pose.alpha);
  const double sb = std::sin(pose.beta), cb = std::cos(pose.beta);
  const double da = twist[0], db = twist[1];
  const Vec3 tip_vel(twist[2], twist[3], twist[4]);
  const double l = params.tool_length;

  Vec3 u_a, u_b;
  direction_partials(pose.alpha, pose.beta, u_a, u_b);
  const Vec3 center = wrist_center_of(pose, params);
  const Vec3 center_vel = tip_vel - l * (u_a * da + u_b * db);

  const Mat3 jo = inv_jacobian_translation(center, q.rho);
  const Vec3 rho_dot = jo * center_vel;

  // d/dt of the translational inverse Jacobian, entry by entry.
  const Vec3 den = q.rho - center;
  const Vec3 den_dot = rho_dot - center_vel;
  auto entry_dot = [&](int row, double coord, double coord_dot) {
    return (-coord_dot * den[row] + coord * den_dot[row]) /
           (den[row] * den[row]);
  };
  Mat3 jo_dot = Mat3::Zero();
  jo_dot(0, 1) = entry_dot(0, center.y(), center_vel.y());
  jo_dot(0, 2) = entry_dot(0, center.z(), center_vel.z());
  jo_dot(1, 0) = entry_dot(1, center.x(), center_vel.x());
  jo_dot(1, 2) = entry_dot(1, center.z(), center_vel.z());
  jo_dot(2, 0) = entry_dot(2, center.x(), center_vel.x());
  jo_dot(2, 1) = entry_dot(2, center.y(), center_vel.y());

  // Second partials of tool_direction for the coupling-block derivative.
  const Vec3 u_aa(0.0, -sa * cb, ca * cb);
  const Vec3 u_ab(0.0, -ca * sb, -sa * sb);
  const Vec3 u_bb(sb, -sa * cb, ca * cb);
  Mat32 tip_coupling, tip_coupling_dot;
  tip_coupling.col(0) = -l * u_a;
  tip_coupling.col(1) = -l * u_b;
  tip_coupling_dot.col(0) = -l * (u_aa * da + u_ab * db);
  tip_coupling_dot.col(1) = -l * (u_ab * da + u_bb * db);

  // Wrist block derivative via the chain rule on the closed form.
  const double r2 = ca * ca * cb * cb + sb * sb;
  if (r2 < k_singular_tol)
    raise(Errc::singular, "wrist Jacobian singular");
  const double r2_a = -2.0 * sa * ca * cb * cb;
  const double r2_b = 2.0 * sb * cb * sa * sa;
  const double w21 = sa * sb * cb / r2;
  const double w21_a = ca * sb * cb / r2 - w21 * r2_a / r2;
  const double w21_b = sa * (cb * cb - sb * sb) / r2 - w21 * r2_b / r2;
  const double w22_a = -sa / r2 - ca * r2_a / (r2 * r2);
  const double w22_b = -ca * r2_b / (r2 * r2);

  Mat5 dot = Mat5::Zero();
  dot(1, 0) = w21_a * da + w21_b * db;
  dot(1, 1) = w22_a * da + w22_b * db;
  dot.block<3, 2>(2, 0) = jo_dot * tip_coupling + jo * tip_coupling_dot;
  dot.block<3, 3>(2, 2) = jo_dot;
  return dot;
}

JointRates project_rates(const Pose& pose, const JointState& q,
                         const Twist& vel, const Twist& acc,
                         const MachineParams& params) {
  const Mat5 jac = full_inv_jacobian(pose, q, params);
  const Mat5 jac_dot = full_inv_jacobian_dot(pose, q, vel, params);
  JointRates rates;
  rates.qd = jac * vel;
  rates.qdd = jac * acc + jac_dot * vel;
  return rates;
}

}  // namespace hpkm

#pragma once

#include "hpkm/params.hpp"
#include "hpkm/translation.hpp"
#include "hpkm/types.hpp"
#include "hpkm/wrist.hpp"

namespace hpkm {

// Full inverse kinematics: wrist angles from the tilt, prismatic extensions
// from the wrist center. With check_limits set, enforces the tilt cone and
// rho range (Error(tilt_limit) / Error(joint_limit)).
JointState ik_full(const Pose& pose, const MachineParams& params,
                   const WorkingMode& mode = {}, bool check_limits = true);

// Full forward kinematics: tip = fk_translation(rho) + l * tool_direction.
Pose fk_full(const JointState& q, const MachineParams& params,
             const AssemblyMode& mode = {});

// Coupling block: rho_dot = C * (alpha_dot, beta_dot) with the tip held
// fixed. Equals J_translation * (-l * d(tool_direction)/d(alpha, beta));
// evaluated in closed form with wrist-center coordinates.
Mat32 coupling_jacobian(const Pose& pose, const Vec3& rho,
                        const MachineParams& params);

// 5x5 inverse Jacobian, q_dot = J * t with t = (alpha_dot, beta_dot, x_dot,
// y_dot, z_dot) of the tool tip:
//   [ J_wrist      0          ]
//   [ C            J_translation ]
// q must be kinematically consistent with pose.
Mat5 full_inv_jacobian(const Pose& pose, const JointState& q,
                       const MachineParams& params);

// Analytic time derivative of full_inv_jacobian along the motion given by
// `twist` (entrywise chain rule; no finite differences).
Mat5 full_inv_jacobian_dot(const Pose& pose, const JointState& q,
                           const Twist& twist, const MachineParams& params);

struct JointRates {
  Vec5 qd = Vec5::Zero();
  Vec5 qdd = Vec5::Zero();
};

// q_dot = J * vel; q_ddot = J * acc + J_dot * vel.
JointRates project_rates(const Pose& pose, const JointState& q,
                         const Twist& vel, const Twist& acc,
                         const MachineParams& params);

}  // namespace hpkm

#pragma once

#include "hpkm/params.hpp"
#include "hpkm/types.hpp"

namespace hpkm {

// Prismatic extensions placing the wrist center at `center`:
//   rho_1 = x + s_1 sqrt(l1^2 - y^2 - z^2)   (and cyclically for legs 2, 3).
// Throws Error(no_real_solution) with the leg index when a discriminant is
// negative. Joint limits are not checked here.
Vec3 ik_translation(const Vec3& center, const MachineParams& params,
                    const WorkingMode& mode = {});

struct TranslationFk {
  Vec3 center;
  bool coincident = false;  // both assembly branches collapse to one root
};

// Closed-form forward kinematics. Substituting
//   x = (w + rho_1^2 - l1^2) / (2 rho_1), ... with w = x^2 + y^2 + z^2
// into the leg sphere equations yields a quadratic in w; AssemblyMode picks
// the root. Throws Error(singular) when some |rho_i| < k_singular_tol and
// Error(no_real_solution) when the quadratic has no real root.
TranslationFk fk_translation(const Vec3& rho, const MachineParams& params,
                             const AssemblyMode& mode = {});

// Assembly mode whose quadratic root reproduces `center` given the extensions
// `rho` of that same point. Which root that is varies across the workspace:
// geometrically the two branches are mirror images across the plane spanned
// by the three prismatic foot points, and the workspace cube has points on
// both sides. Near the double root either answer reproduces the point.
AssemblyMode matched_assembly(const Vec3& center, const Vec3& rho,
                              const MachineParams& params);

// Inverse Jacobian of the translational stage, rho_dot = J * center_dot:
//   [ 1            -y/(rho1 - x)  -z/(rho1 - x) ]
//   [ -x/(rho2-y)   1             -z/(rho2 - y) ]
//   [ -x/(rho3-z)  -y/(rho3 - z)   1            ]
// Throws Error(singular) with the leg index when a denominator magnitude
// falls below k_singular_tol.
Mat3 inv_jacobian_translation(const Vec3& center, const Vec3& rho);

}  // namespace hpkm

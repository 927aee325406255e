#pragma once

#include "hpkm/types.hpp"

namespace hpkm {

struct WristAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

// Unit vector along the tool axis:
//   p = (-sin(beta), sin(alpha) cos(beta), -cos(alpha) cos(beta)).
// Points straight down (0, 0, -1) at alpha = beta = 0.
Vec3 tool_direction(double alpha, double beta);

// theta1 = -atan2(-sin(alpha) cos(beta), cos(alpha) cos(beta))
// theta2 =  atan2(sin(beta), cos(alpha) cos(beta))
// Requires |alpha|, |beta| < pi/2; throws Error(singular) when
// cos(alpha) cos(beta) vanishes.
WristAngles ik_wrist(double alpha, double beta);

struct WristFk {
  double alpha = 0.0;
  double beta = 0.0;
};

// alpha = theta1, beta = atan(tan(theta2) cos(theta1)), principal branch.
// Throws Error(singular) when cos(theta1) or cos(theta2) vanishes.
WristFk fk_wrist(const WristAngles& wrist);

// Inverse Jacobian of the wrist, (theta1_dot, theta2_dot) = J * (alpha_dot,
// beta_dot):
//   [ 1                          0                                        ]
//   [ S(t2) S(t1) C(b) / D       (S(b) C(t1) S(t2) + C(t2) C(b)) / D      ]
// with D = S(b) S(t2) + C(t1) C(b) C(t2). Throws Error(singular) when |D|
// falls below k_singular_tol.
Mat2 inv_jacobian_wrist(double alpha, double beta, const WristAngles& wrist);

}  // namespace hpkm

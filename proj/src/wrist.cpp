#include "hpkm/wrist.hpp"

#include <cmath>

#include "hpkm/error.hpp"

namespace hpkm {

Vec3 tool_direction(double alpha, double beta) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  return Vec3(-sb, sa * cb, -ca * cb);
}

WristAngles ik_wrist(double alpha, double beta) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  if (std::abs(ca * cb) < k_singular_tol)
    raise(Errc::singular, "wrist ik undefined at a quarter-turn tilt");
  return WristAngles{-std::atan2(-sa * cb, ca * cb), std::atan2(sb, ca * cb)};
}

WristFk fk_wrist(const WristAngles& wrist) {
  const double c1 = std::cos(wrist.theta1);
  const double c2 = std::cos(wrist.theta2);
  if (std::abs(c1) < k_singular_tol || std::abs(c2) < k_singular_tol)
    raise(Errc::singular, "wrist fk undefined at a quarter-turn angle");
  return WristFk{wrist.theta1, std::atan(std::tan(wrist.theta2) * c1)};
}

Mat2 inv_jacobian_wrist(double alpha, double beta, const WristAngles& wrist) {
  const double s1 = std::sin(wrist.theta1), c1 = std::cos(wrist.theta1);
  const double s2 = std::sin(wrist.theta2), c2 = std::cos(wrist.theta2);
  const double sb = std::sin(beta), cb = std::cos(beta);
  const double den = sb * s2 + c1 * cb * c2;
  if (std::abs(den) < k_singular_tol)
    raise(Errc::singular, "wrist Jacobian singular");
  Mat2 jac;
  jac << 1.0, 0.0,
      s2 * s1 * cb / den, (sb * c1 * s2 + c2 * cb) / den;
  return jac;
}

}  // namespace hpkm

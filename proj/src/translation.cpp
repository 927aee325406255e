#include "hpkm/translation.hpp"

#include <cmath>
#include <string>

namespace hpkm {

namespace {

const char* leg_name(int leg) {
  switch (leg) {
    case 0: return "leg 1";
    case 1: return "leg 2";
    default: return "leg 3";
  }
}

}  // namespace

Vec3 ik_translation(const Vec3& center, const MachineParams& params,
                    const WorkingMode& mode) {
  const double x = center.x(), y = center.y(), z = center.z();
  const double l[3] = {params.l1, params.l2, params.l3};
  const double disc[3] = {
      l[0] * l[0] - y * y - z * z,
      l[1] * l[1] - x * x - z * z,
      l[2] * l[2] - x * x - y * y,
  };
  Vec3 rho;
  const double coord[3] = {x, y, z};
  for (int leg = 0; leg < 3; ++leg) {
    if (disc[leg] < 0.0)
      raise(Errc::no_real_solution,
            std::string("wrist center out of reach of ") + leg_name(leg), leg);
    rho[leg] = coord[leg] + mode.sign[leg] * std::sqrt(disc[leg]);
  }
  return rho;
}

TranslationFk fk_translation(const Vec3& rho, const MachineParams& params,
                             const AssemblyMode& mode) {
  const double l[3] = {params.l1, params.l2, params.l3};
  double A = 0.0, B = -1.0, C = 0.0;
  double a[3];
  for (int leg = 0; leg < 3; ++leg) {
    if (std::abs(rho[leg]) < k_singular_tol)
      raise(Errc::singular,
            std::string("zero extension on ") + leg_name(leg), leg);
    a[leg] = rho[leg] * rho[leg] - l[leg] * l[leg];
    const double inv = 1.0 / (2.0 * rho[leg]);
    A += inv * inv;
    B += 2.0 * a[leg] * inv * inv;
    C += a[leg] * a[leg] * inv * inv;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0)
    raise(Errc::no_real_solution, "extensions admit no loop closure");
  const double w = (-B + mode.sign * std::sqrt(disc)) / (2.0 * A);
  Vec3 center;
  for (int leg = 0; leg < 3; ++leg)
    center[leg] = (w + a[leg]) / (2.0 * rho[leg]);
  return {center, disc == 0.0};
}

AssemblyMode matched_assembly(const Vec3& center, const Vec3& rho,
                              const MachineParams& params) {
  const double l[3] = {params.l1, params.l2, params.l3};
  double A = 0.0, B = -1.0;
  for (int leg = 0; leg < 3; ++leg) {
    if (std::abs(rho[leg]) < k_singular_tol)
      raise(Errc::singular,
            std::string("zero extension on ") + leg_name(leg), leg);
    const double a = rho[leg] * rho[leg] - l[leg] * l[leg];
    const double inv = 1.0 / (2.0 * rho[leg]);
    A += inv * inv;
    B += 2.0 * a * inv * inv;
  }
  // The roots are w = (-B +- sqrt(disc)) / (2A) with A > 0, so the point's
  // own w = |center|^2 matches the + root exactly when it lies above the
  // vertex -B/(2A).
  const double w = center.squaredNorm();
  return AssemblyMode{2.0 * A * w + B >= 0.0 ? +1 : -1};
}

Mat3 inv_jacobian_translation(const Vec3& center, const Vec3& rho) {
  const double x = center.x(), y = center.y(), z = center.z();
  double den[3] = {rho[0] - x, rho[1] - y, rho[2] - z};
  for (int leg = 0; leg < 3; ++leg) {
    if (std::abs(den[leg]) < k_singular_tol)
      raise(Errc::singular,
            std::string("singular alignment on ") + leg_name(leg), leg);
  }
  Mat3 jac;
  jac << 1.0, -y / den[0], -z / den[0],
      -x / den[1], 1.0, -z / den[1],
      -x / den[2], -y / den[2], 1.0;
  return jac;
}

}  // namespace hpkm

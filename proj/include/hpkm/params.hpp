#pragma once

#include <string>

#include "hpkm/error.hpp"
#include "hpkm/types.hpp"

namespace hpkm {

// Computed-torque PID gains, shared by the rotational and translational axis
// groups. omega is the nominal loop bandwidth kept for reference; gains are
// authoritative and are not derived from it.
struct ControlGains {
  double kp = 19200.0;
  double kd = 240.0;
  double ki = 512000.0;
  double omega = 49.0;
};

struct MachineParams {
  // Geometry
  double l1 = 0.75;           // leg lengths (m)
  double l2 = 0.75;
  double l3 = 0.75;
  double tool_length = 0.09;  // wrist center to tool tip (m), must exceed 0.072
  double rho_min = 0.2;       // prismatic joint range (m)
  double rho_max = 1.3;
  double tilt_limit = k_pi / 4.0;  // max |alpha|, |beta| (rad)

  // Rate and acceleration caps. The translational caps double as prismatic
  // joint limits and the rotational caps as wrist motor limits.
  double k_vt = 1.2;      // m/s
  double k_vr = 3.27;     // rad/s
  double a_t_max = 13.0;  // m/s^2
  double a_r_max = 270.0; // rad/s^2

  // Axis dynamics (decoupled rigid model per actuated joint)
  double mass = 91.6278;    // kg, each translational axis
  double inertia = 0.2772;  // kg m^2, each wrist axis

  ControlGains gains;

  double safety_speed_ratio = 0.10;  // engaged on request, caps peak speeds
  double error_shutdown = 0.003;     // m, prismatic tracking error threshold

  // Throws Error(invalid_argument) naming the offending field.
  void validate() const;

  Pose home() const { return Pose{0.0, 0.0, Vec3(0.0, 0.0, -tool_length)}; }
};

// Parses "key = value" lines; '#' starts a comment; unknown keys are errors.
// Angles in the file are in degrees (tilt_limit_deg); everything else is SI.
MachineParams parse_config(const std::string& text);
MachineParams load_config(const std::string& path);

// Tool tip minus tool_length along the tool axis.
Vec3 wrist_center_of(const Pose& pose, const MachineParams& params);

enum class WorkspaceReason { ok, tilt, unreachable, joint_limit };

struct WorkspaceCheck {
  bool inside = false;
  WorkspaceReason reason = WorkspaceReason::ok;
  int leg = -1;  // offending leg for unreachable/joint_limit
};

WorkspaceCheck check_workspace(const Pose& pose, const MachineParams& params,
                               const WorkingMode& mode = {});

inline bool workspace_contains(const Pose& pose, const MachineParams& params,
                               const WorkingMode& mode = {}) {
  return check_workspace(pose, params, mode).inside;
}

const char* workspace_reason_name(WorkspaceReason reason);

}  // namespace hpkm

#include "hpkm/capi.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "hpkm/csv.hpp"
#include "hpkm/error.hpp"
#include "hpkm/gcode.hpp"
#include "hpkm/hybrid.hpp"
#include "hpkm/params.hpp"
#include "hpkm/sim.hpp"
#include "hpkm/trajectory.hpp"
#include "hpkm/types.hpp"

struct hpkm_params {
  hpkm::MachineParams value;
};

struct hpkm_plan {
  hpkm::Plan value;
  std::vector<hpkm::CornerBlend> corners;  // populated for G-code plans
};

struct hpkm_trace {
  hpkm::SimTrace value;
};

namespace {

thread_local std::string t_last_error;

hpkm_status status_of(hpkm::Errc code) {
  using hpkm::Errc;
  switch (code) {
    case Errc::ok: return HPKM_OK;
    case Errc::invalid_argument: return HPKM_ERR_INVALID;
    case Errc::config_parse: return HPKM_ERR_CONFIG;
    case Errc::no_real_solution: return HPKM_ERR_NO_SOLUTION;
    case Errc::singular: return HPKM_ERR_SINGULAR;
    case Errc::joint_limit: return HPKM_ERR_JOINT_LIMIT;
    case Errc::tilt_limit: return HPKM_ERR_TILT;
    case Errc::workspace_exit: return HPKM_ERR_WORKSPACE;
    case Errc::gcode_unsupported:
    case Errc::gcode_malformed: return HPKM_ERR_GCODE;
    case Errc::io: return HPKM_ERR_IO;
    case Errc::shutdown: return HPKM_ERR_SHUTDOWN;
  }
  return HPKM_ERR_INVALID;
}

// Runs the body, translating exceptions into statuses and recording the
// message for hpkm_last_error().
template <typename Fn>
hpkm_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return HPKM_OK;
  } catch (const hpkm::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return HPKM_ERR_INVALID;
  } catch (...) {
    t_last_error = "unknown error";
    return HPKM_ERR_INVALID;
  }
}

hpkm_status require(bool ok, const char* what) {
  if (ok) return HPKM_OK;
  t_last_error = what;
  return HPKM_ERR_INVALID;
}

hpkm::Pose pose_from(const double pose[5]) {
  return hpkm::Pose{pose[0], pose[1],
                    hpkm::Vec3(pose[2], pose[3], pose[4])};
}

void pose_to(const hpkm::Pose& pose, double out[5]) {
  const hpkm::Vec5 v = pose.vector();
  for (int i = 0; i < 5; ++i) out[i] = v[i];
}

void vec5_to(const hpkm::Vec5& v, double out[5]) {
  for (int i = 0; i < 5; ++i) out[i] = v[i];
}

hpkm::PlanOptions options_from(const hpkm_plan_options* opts) {
  hpkm::PlanOptions o;
  if (opts) {
    o.speed_ratio = opts->speed_ratio;
    o.sample_rate = opts->sample_rate;
    o.safety_cap = opts->safety_cap != 0;
  }
  return o;
}

void copy_label(char* dst, size_t cap, const std::string& src) {
  const size_t n = std::min(cap - 1, src.size());
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

}  // namespace

extern "C" {

const char* hpkm_version(void) { return "1.0.0"; }

const char* hpkm_status_name(hpkm_status status) {
  switch (status) {
    case HPKM_OK: return "ok";
    case HPKM_ERR_INVALID: return "invalid_argument";
    case HPKM_ERR_CONFIG: return "config_parse";
    case HPKM_ERR_NO_SOLUTION: return "no_real_solution";
    case HPKM_ERR_SINGULAR: return "singular";
    case HPKM_ERR_JOINT_LIMIT: return "joint_limit";
    case HPKM_ERR_TILT: return "tilt_limit";
    case HPKM_ERR_WORKSPACE: return "workspace_exit";
    case HPKM_ERR_GCODE: return "gcode";
    case HPKM_ERR_IO: return "io";
    case HPKM_ERR_SHUTDOWN: return "shutdown";
  }
  return "unknown";
}

const char* hpkm_last_error(void) { return t_last_error.c_str(); }

/* ---------------- machine parameters ---------------- */

hpkm_status hpkm_params_create(hpkm_params** out) {
  if (hpkm_status s = require(out, "out must not be NULL")) return s;
  return guarded([&] { *out = new hpkm_params{hpkm::MachineParams{}}; });
}

hpkm_status hpkm_params_load(const char* path, hpkm_params** out) {
  if (hpkm_status s = require(path && out, "path and out must not be NULL"))
    return s;
  return guarded([&] { *out = new hpkm_params{hpkm::load_config(path)}; });
}

hpkm_status hpkm_params_parse(const char* text, hpkm_params** out) {
  if (hpkm_status s = require(text && out, "text and out must not be NULL"))
    return s;
  return guarded([&] { *out = new hpkm_params{hpkm::parse_config(text)}; });
}

void hpkm_params_free(hpkm_params* params) { delete params; }

hpkm_status hpkm_params_get(const hpkm_params* params, const char* key,
                            double* out) {
  if (hpkm_status s =
          require(params && key && out, "params, key and out must not be NULL"))
    return s;
  return guarded([&] {
    const hpkm::MachineParams& p = params->value;
    const std::string k = key;
    if (k == "l1") *out = p.l1;
    else if (k == "l2") *out = p.l2;
    else if (k == "l3") *out = p.l3;
    else if (k == "tool_length") *out = p.tool_length;
    else if (k == "rho_min") *out = p.rho_min;
    else if (k == "rho_max") *out = p.rho_max;
    else if (k == "tilt_limit_deg") *out = p.tilt_limit * 180.0 / hpkm::k_pi;
    else if (k == "k_vt") *out = p.k_vt;
    else if (k == "k_vr") *out = p.k_vr;
    else if (k == "a_t_max") *out = p.a_t_max;
    else if (k == "a_r_max") *out = p.a_r_max;
    else if (k == "mass") *out = p.mass;
    else if (k == "inertia") *out = p.inertia;
    else if (k == "kp") *out = p.gains.kp;
    else if (k == "kd") *out = p.gains.kd;
    else if (k == "ki") *out = p.gains.ki;
    else if (k == "safety_speed_ratio") *out = p.safety_speed_ratio;
    else if (k == "error_shutdown") *out = p.error_shutdown;
    else
      hpkm::raise(hpkm::Errc::invalid_argument, "unknown key '" + k + "'");
  });
}

hpkm_status hpkm_params_home(const hpkm_params* params, double pose[5]) {
  if (hpkm_status s =
          require(params && pose, "params and pose must not be NULL"))
    return s;
  return guarded([&] { pose_to(params->value.home(), pose); });
}

/* ---------------- kinematics ---------------- */

hpkm_status hpkm_ik(const hpkm_params* params, const double pose[5],
                    const int* mode, double joints[5]) {
  if (hpkm_status s = require(params && pose && joints,
                              "params, pose and joints must not be NULL"))
    return s;
  return guarded([&] {
    hpkm::WorkingMode wm;
    if (mode)
      for (int i = 0; i < 3; ++i) wm.sign[i] = mode[i] >= 0 ? +1 : -1;
    vec5_to(hpkm::ik_full(pose_from(pose), params->value, wm).vector(),
            joints);
  });
}

hpkm_status hpkm_fk(const hpkm_params* params, const double joints[5],
                    int assembly, double pose[5]) {
  if (hpkm_status s = require(params && joints && pose,
                              "params, joints and pose must not be NULL"))
    return s;
  return guarded([&] {
    hpkm::Vec5 q;
    for (int i = 0; i < 5; ++i) q[i] = joints[i];
    hpkm::AssemblyMode am;
    am.sign = assembly > 0 ? +1 : -1;  // 0 means the default branch
    pose_to(
        hpkm::fk_full(hpkm::JointState::from_vector(q), params->value, am),
        pose);
  });
}

hpkm_status hpkm_inv_jacobian(const hpkm_params* params, const double pose[5],
                              double jac[25]) {
  if (hpkm_status s =
          require(params && pose && jac, "params, pose and jac must not be NULL"))
    return s;
  return guarded([&] {
    const hpkm::Pose p = pose_from(pose);
    const hpkm::JointState q = hpkm::ik_full(p, params->value);
    const hpkm::Mat5 j = hpkm::full_inv_jacobian(p, q, params->value);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) jac[5 * r + c] = j(r, c);
  });
}

hpkm_status hpkm_inv_jacobian_dot(const hpkm_params* params, const double pose[5],
                                  const double twist[5], double jac_dot[25]) {
  if (hpkm_status s = require(params && pose && twist && jac_dot,
                              "params, pose, twist and jac_dot must not be NULL"))
    return s;
  return guarded([&] {
    const hpkm::Pose p = pose_from(pose);
    const hpkm::JointState q = hpkm::ik_full(p, params->value);
    hpkm::Twist t;
    for (int i = 0; i < 5; ++i) t[i] = twist[i];
    const hpkm::Mat5 j = hpkm::full_inv_jacobian_dot(p, q, t, params->value);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) jac_dot[5 * r + c] = j(r, c);
  });
}

hpkm_status hpkm_wrist_center(const hpkm_params* params, const double pose[5],
                              double center[3]) {
  if (hpkm_status s = require(params && pose && center,
                              "params, pose and center must not be NULL"))
    return s;
  return guarded([&] {
    const hpkm::Vec3 c = hpkm::wrist_center_of(pose_from(pose), params->value);
    for (int i = 0; i < 3; ++i) center[i] = c[i];
  });
}

hpkm_status hpkm_workspace_contains(const hpkm_params* params,
                                    const double pose[5], const int* mode,
                                    int* inside, const char** reason) {
  if (hpkm_status s = require(params && pose && inside,
                              "params, pose and inside must not be NULL"))
    return s;
  return guarded([&] {
    hpkm::WorkingMode wm;
    if (mode)
      for (int i = 0; i < 3; ++i) wm.sign[i] = mode[i] >= 0 ? +1 : -1;
    const hpkm::WorkspaceCheck check =
        hpkm::check_workspace(pose_from(pose), params->value, wm);
    *inside = check.inside ? 1 : 0;
    if (reason) *reason = hpkm::workspace_reason_name(check.reason);
  });
}

hpkm_status hpkm_workspace_cube_check(const hpkm_params* params,
                                      const double center[3], double edge,
                                      int samples_per_edge,
                                      hpkm_cube_report* report) {
  if (hpkm_status s = require(params && center && report,
                              "params, center and report must not be NULL"))
    return s;
  return guarded([&] {
    if (!(edge > 0.0))
      hpkm::raise(hpkm::Errc::invalid_argument, "cube edge must be positive");
    if (samples_per_edge < 2)
      hpkm::raise(hpkm::Errc::invalid_argument,
                  "samples_per_edge must be at least 2");
    report->total = 0;
    report->passed = 0;
    report->first_failure[0] = report->first_failure[1] =
        report->first_failure[2] = 0.0;
    copy_label(report->first_reason, sizeof(report->first_reason), "ok");
    bool failed = false;
    const int n = samples_per_edge;
    for (int ix = 0; ix < n; ++ix) {
      for (int iy = 0; iy < n; ++iy) {
        for (int iz = 0; iz < n; ++iz) {
          const hpkm::Vec3 c(
              center[0] + edge * (static_cast<double>(ix) / (n - 1) - 0.5),
              center[1] + edge * (static_cast<double>(iy) / (n - 1) - 0.5),
              center[2] + edge * (static_cast<double>(iz) / (n - 1) - 0.5));
          // Zero tilt: the tool hangs straight down from the wrist center.
          hpkm::Pose pose;
          pose.tip = c + hpkm::Vec3(0.0, 0.0, -params->value.tool_length);
          const hpkm::WorkspaceCheck check =
              hpkm::check_workspace(pose, params->value);
          ++report->total;
          if (check.inside) {
            ++report->passed;
          } else if (!failed) {
            failed = true;
            for (int i = 0; i < 3; ++i) report->first_failure[i] = c[i];
            copy_label(report->first_reason, sizeof(report->first_reason),
                       hpkm::workspace_reason_name(check.reason));
          }
        }
      }
    }
  });
}

/* ---------------- trajectory planning ---------------- */

void hpkm_plan_options_init(hpkm_plan_options* opts) {
  if (!opts) return;
  const hpkm::PlanOptions d;
  opts->speed_ratio = d.speed_ratio;
  opts->sample_rate = d.sample_rate;
  opts->safety_cap = d.safety_cap ? 1 : 0;
}

hpkm_status hpkm_plan_line(const hpkm_params* params, const double* poses,
                           size_t n_poses, const hpkm_plan_options* opts,
                           hpkm_plan** out) {
  if (hpkm_status s = require(params && poses && out,
                              "params, poses and out must not be NULL"))
    return s;
  if (hpkm_status s = require(n_poses > 0, "n_poses must be positive"))
    return s;
  return guarded([&] {
    std::vector<hpkm::Pose> waypoints;
    waypoints.reserve(n_poses);
    for (size_t i = 0; i < n_poses; ++i)
      waypoints.push_back(pose_from(poses + 5 * i));
    auto plan = std::make_unique<hpkm_plan>();
    plan->value = hpkm::plan_linear(waypoints, params->value, options_from(opts));
    *out = plan.release();
  });
}

hpkm_status hpkm_plan_circle(const hpkm_params* params, const hpkm_circle* circle,
                             const double entry[5], const double exit[5],
                             const hpkm_plan_options* opts, hpkm_plan** out) {
  if (hpkm_status s = require(params && circle && entry && exit && out,
                              "params, circle, entry, exit and out must not be NULL"))
    return s;
  return guarded([&] {
    hpkm::CircleSpec spec;
    spec.center = hpkm::Vec3(circle->center[0], circle->center[1],
                             circle->center[2]);
    spec.radius = circle->radius;
    spec.eta_min = circle->eta_min;
    spec.eta_max = circle->eta_max;
    spec.alpha1 = circle->alpha1;
    spec.beta1 = circle->beta1;
    spec.a2 = circle->a2;
    spec.b2 = circle->b2;
    spec.a3 = circle->a3;
    spec.b3 = circle->b3;
    auto plan = std::make_unique<hpkm_plan>();
    plan->value = hpkm::plan_circular(spec, pose_from(entry), pose_from(exit),
                                      params->value, options_from(opts));
    *out = plan.release();
  });
}

hpkm_status hpkm_plan_gcode(const hpkm_params* params, const char* text,
                            double corner_radius_cap,
                            const hpkm_plan_options* opts, hpkm_plan** out) {
  if (hpkm_status s = require(params && text && out,
                              "params, text and out must not be NULL"))
    return s;
  return guarded([&] {
    const hpkm::PlanOptions o = options_from(opts);
    auto plan = std::make_unique<hpkm_plan>();
    hpkm::BlendedPath blended;
    const auto segments =
        hpkm::parse_gcode(text, params->value, params->value.home());
    plan->value = hpkm::plan_gcode(segments, params->value, corner_radius_cap,
                                   params->value.home(), o, &blended);
    plan->corners = blended.corners;
    *out = plan.release();
  });
}

void hpkm_plan_free(hpkm_plan* plan) { delete plan; }

size_t hpkm_plan_sample_count(const hpkm_plan* plan) {
  return plan ? plan->value.samples.size() : 0;
}

hpkm_status hpkm_plan_sample(const hpkm_plan* plan, size_t index, double* t,
                             double pose[5], double vel[5], double acc[5],
                             double joints[5], double joints_dot[5],
                             double joints_ddot[5]) {
  if (hpkm_status s = require(plan, "plan must not be NULL")) return s;
  if (hpkm_status s =
          require(index < plan->value.samples.size(), "sample index out of range"))
    return s;
  const hpkm::TrajectorySample& sample = plan->value.samples[index];
  if (t) *t = sample.t;
  if (pose) pose_to(sample.pose, pose);
  if (vel) vec5_to(sample.vel, vel);
  if (acc) vec5_to(sample.acc, acc);
  if (joints) vec5_to(sample.q.vector(), joints);
  if (joints_dot) vec5_to(sample.qd, joints_dot);
  if (joints_ddot) vec5_to(sample.qdd, joints_ddot);
  return HPKM_OK;
}

size_t hpkm_plan_segment_count(const hpkm_plan* plan) {
  return plan ? plan->value.segments.size() : 0;
}

hpkm_status hpkm_plan_segment(const hpkm_plan* plan, size_t index,
                              hpkm_segment_info* info) {
  if (hpkm_status s =
          require(plan && info, "plan and info must not be NULL"))
    return s;
  if (hpkm_status s = require(index < plan->value.segments.size(),
                              "segment index out of range"))
    return s;
  const hpkm::SegmentInfo& seg = plan->value.segments[index];
  copy_label(info->label, sizeof(info->label), seg.label);
  info->t_start = seg.t_start;
  info->tf_initial = seg.tf_initial;
  info->tf_final = seg.tf_final;
  info->multiplier = seg.multiplier;
  return HPKM_OK;
}

size_t hpkm_plan_corner_count(const hpkm_plan* plan) {
  return plan ? plan->corners.size() : 0;
}

hpkm_status hpkm_plan_corner(const hpkm_plan* plan, size_t index,
                             hpkm_corner_info* info) {
  if (hpkm_status s = require(plan && info, "plan and info must not be NULL"))
    return s;
  if (hpkm_status s =
          require(index < plan->corners.size(), "corner index out of range"))
    return s;
  const hpkm::CornerBlend& c = plan->corners[index];
  for (int i = 0; i < 3; ++i) info->vertex[i] = c.vertex[i];
  info->turn_angle = c.turn_angle;
  info->radius = c.radius;
  info->trim = c.trim;
  info->speed = c.speed;
  info->line = c.line;
  return HPKM_OK;
}

hpkm_status hpkm_plan_summary_get(const hpkm_plan* plan, const hpkm_params* params,
                                  hpkm_plan_summary* summary) {
  if (hpkm_status s = require(plan && params && summary,
                              "plan, params and summary must not be NULL"))
    return s;
  return guarded([&] {
    const hpkm::MachineParams& p = params->value;
    hpkm_plan_summary out{};
    out.duration = plan->value.duration();
    for (const hpkm::TrajectorySample& s : plan->value.samples) {
      out.peak_cart_vel_r =
          std::max(out.peak_cart_vel_r, s.vel.head<2>().norm());
      out.peak_cart_vel_t =
          std::max(out.peak_cart_vel_t, s.vel.tail<3>().norm());
      out.peak_cart_acc_r =
          std::max(out.peak_cart_acc_r, s.acc.head<2>().norm());
      out.peak_cart_acc_t =
          std::max(out.peak_cart_acc_t, s.acc.tail<3>().norm());
      for (int i = 0; i < 5; ++i) {
        const double v_cap = i < 2 ? p.k_vr : p.k_vt;
        const double a_cap = i < 2 ? p.a_r_max : p.a_t_max;
        out.peak_joint_vel_ratio =
            std::max(out.peak_joint_vel_ratio, std::abs(s.qd[i]) / v_cap);
        out.peak_joint_acc_ratio =
            std::max(out.peak_joint_acc_ratio, std::abs(s.qdd[i]) / a_cap);
      }
    }
    *summary = out;
  });
}

hpkm_status hpkm_plan_write_csv(const hpkm_plan* plan, const char* path) {
  if (hpkm_status s =
          require(plan && path, "plan and path must not be NULL"))
    return s;
  return guarded([&] { hpkm::write_plan_csv(plan->value, path); });
}

hpkm_status hpkm_plan_read_csv(const char* path, hpkm_plan** out) {
  if (hpkm_status s = require(path && out, "path and out must not be NULL"))
    return s;
  return guarded([&] {
    auto plan = std::make_unique<hpkm_plan>();
    plan->value = hpkm::read_plan_csv(path);
    *out = plan.release();
  });
}

/* ---------------- control simulation ---------------- */

void hpkm_sim_options_init(hpkm_sim_options* opts) {
  if (!opts) return;
  const hpkm::SimConfig d;
  opts->control_rate = d.control_rate;
  opts->sensing_rate = d.sensing_rate;
  opts->velocity_cutoff = d.velocity_cutoff;
  opts->use_velocity_filter = d.use_velocity_filter ? 1 : 0;
  opts->duration = d.duration;
  opts->disturbance_axis = d.disturbance.axis;
  opts->disturbance_force = d.disturbance.force;
  opts->disturbance_start = d.disturbance.start;
  opts->offset_axis = d.offset_axis;
  opts->offset_value = d.offset_value;
}

hpkm_status hpkm_sim_run(const hpkm_params* params, const hpkm_plan* plan,
                         const hpkm_sim_options* opts, hpkm_trace** out) {
  if (hpkm_status s = require(params && plan && out,
                              "params, plan and out must not be NULL"))
    return s;
  return guarded([&] {
    hpkm::SimConfig config;
    if (opts) {
      config.control_rate = opts->control_rate;
      config.sensing_rate = opts->sensing_rate;
      config.velocity_cutoff = opts->velocity_cutoff;
      config.use_velocity_filter = opts->use_velocity_filter != 0;
      config.duration = opts->duration;
      config.disturbance.axis = opts->disturbance_axis;
      config.disturbance.force = opts->disturbance_force;
      config.disturbance.start = opts->disturbance_start;
      config.offset_axis = opts->offset_axis;
      config.offset_value = opts->offset_value;
    }
    auto trace = std::make_unique<hpkm_trace>();
    trace->value = hpkm::run_sim(plan->value, params->value, config);
    *out = trace.release();
  });
}

void hpkm_trace_free(hpkm_trace* trace) { delete trace; }

size_t hpkm_trace_step_count(const hpkm_trace* trace) {
  return trace ? trace->value.steps.size() : 0;
}

hpkm_status hpkm_trace_step(const hpkm_trace* trace, size_t index, double* t,
                            double q_des[5], double q_act[5], double qd_des[5],
                            double qd_est[5], double error[5], double u[5],
                            double* cycle_seconds) {
  if (hpkm_status s = require(trace, "trace must not be NULL")) return s;
  if (hpkm_status s =
          require(index < trace->value.steps.size(), "step index out of range"))
    return s;
  const hpkm::SimStep& step = trace->value.steps[index];
  if (t) *t = step.t;
  if (q_des) vec5_to(step.q_des, q_des);
  if (q_act) vec5_to(step.q_act, q_act);
  if (qd_des) vec5_to(step.qd_des, qd_des);
  if (qd_est) vec5_to(step.qd_est, qd_est);
  if (error) vec5_to(step.error, error);
  if (u) vec5_to(step.u, u);
  if (cycle_seconds) *cycle_seconds = step.cycle_seconds;
  return HPKM_OK;
}

hpkm_status hpkm_trace_summary(const hpkm_trace* trace, hpkm_sim_summary* summary) {
  if (hpkm_status s =
          require(trace && summary, "trace and summary must not be NULL"))
    return s;
  return guarded([&] {
    hpkm_sim_summary out{};
    out.shutdown = trace->value.shutdown ? 1 : 0;
    out.shutdown_time = trace->value.shutdown_time;
    std::vector<double> cycles;
    cycles.reserve(trace->value.steps.size());
    for (const hpkm::SimStep& step : trace->value.steps) {
      for (int i = 0; i < 5; ++i) {
        out.max_error[i] = std::max(out.max_error[i], std::abs(step.error[i]));
        out.max_u[i] = std::max(out.max_u[i], std::abs(step.u[i]));
      }
      out.max_cycle_seconds =
          std::max(out.max_cycle_seconds, step.cycle_seconds);
      cycles.push_back(step.cycle_seconds);
    }
    if (!cycles.empty()) {
      const size_t mid = cycles.size() / 2;
      std::nth_element(cycles.begin(), cycles.begin() + mid, cycles.end());
      out.median_cycle_seconds = cycles[mid];
    }
    *summary = out;
  });
}

hpkm_status hpkm_trace_write_csv(const hpkm_trace* trace, const char* path) {
  if (hpkm_status s =
          require(trace && path, "trace and path must not be NULL"))
    return s;
  return guarded([&] { hpkm::write_trace_csv(trace->value, path); });
}

}  // extern "C"

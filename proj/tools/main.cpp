// hpkm: command-line front end for the hybrid PKM toolkit.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 kinematic or
// planning failure, 3 simulated safety shutdown.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hpkm/capi.h"

namespace {

constexpr double k_pi = 3.14159265358979323846;
constexpr double k_deg = k_pi / 180.0;

// Reference fixtures of the worked examples: a 72 mm tool, a four-pose
// linear tour, and a full-turn 30 mm circle with a swinging tool.
constexpr const char* k_fixture_config = "tool_length = 0.072\n";

constexpr double k_table1[4][5] = {
    {0.0, 0.0, 0.0, 0.0, -0.072},
    {20.0 * k_deg, 0.0, 0.140, 0.130, 0.060},
    {0.0, 20.0 * k_deg, -0.240, -0.230, -0.180},
    {0.0, 0.0, 0.0, 0.0, -0.072},
};

struct ParamsPtr {
  hpkm_params* p = nullptr;
  ~ParamsPtr() { hpkm_params_free(p); }
};

struct PlanPtr {
  hpkm_plan* p = nullptr;
  ~PlanPtr() { hpkm_plan_free(p); }
};

struct TracePtr {
  hpkm_trace* p = nullptr;
  ~TracePtr() { hpkm_trace_free(p); }
};

int exit_code_for(hpkm_status status) {
  switch (status) {
    case HPKM_OK:
      return 0;
    case HPKM_ERR_INVALID:
    case HPKM_ERR_CONFIG:
    case HPKM_ERR_IO:
      return 1;
    case HPKM_ERR_SHUTDOWN:
      return 3;
    default:
      return 2;
  }
}

// Prints the library error and converts the status into an exit code.
int fail(hpkm_status status) {
  std::fprintf(stderr, "error: %s (%s)\n", hpkm_last_error(),
               hpkm_status_name(status));
  return exit_code_for(status);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Loads machine parameters: explicit --config wins, then the fixture
// machine when a --from-table flag asked for it, then the defaults.
hpkm_status load_params(const std::string& config, bool fixture,
                        hpkm_params** out) {
  if (!config.empty()) return hpkm_params_load(config.c_str(), out);
  if (fixture) return hpkm_params_parse(k_fixture_config, out);
  return hpkm_params_create(out);
}

int print_plan_report(const hpkm_plan* plan, const hpkm_params* params,
                      const std::string& out_csv) {
  hpkm_plan_summary summary;
  if (hpkm_status s = hpkm_plan_summary_get(plan, params, &summary))
    return fail(s);

  const size_t n_seg = hpkm_plan_segment_count(plan);
  std::printf("plan: %zu segment%s, %zu samples, duration %s s\n", n_seg,
              n_seg == 1 ? "" : "s", hpkm_plan_sample_count(plan),
              fmt(summary.duration).c_str());
  for (size_t i = 0; i < n_seg; ++i) {
    hpkm_segment_info seg;
    if (hpkm_status s = hpkm_plan_segment(plan, i, &seg)) return fail(s);
    std::printf("segment %s: t_f %s s -> %s s, multiplier %s\n", seg.label,
                fmt(seg.tf_initial).c_str(), fmt(seg.tf_final).c_str(),
                fmt(seg.multiplier).c_str());
  }
  std::printf("peak speed: translation %s m/s, rotation %s rad/s\n",
              fmt(summary.peak_cart_vel_t).c_str(),
              fmt(summary.peak_cart_vel_r).c_str());
  std::printf("peak acceleration: translation %s m/s^2, rotation %s rad/s^2\n",
              fmt(summary.peak_cart_acc_t).c_str(),
              fmt(summary.peak_cart_acc_r).c_str());
  std::printf("peak joint ratio: velocity %s, acceleration %s\n",
              fmt(summary.peak_joint_vel_ratio).c_str(),
              fmt(summary.peak_joint_acc_ratio).c_str());

  const size_t n_corner = hpkm_plan_corner_count(plan);
  for (size_t i = 0; i < n_corner; ++i) {
    hpkm_corner_info c;
    if (hpkm_status s = hpkm_plan_corner(plan, i, &c)) return fail(s);
    std::printf(
        "corner %zu line %d: vertex (%s, %s, %s) m, turn %s rad, radius %s m, "
        "trim %s m, speed %s m/s\n",
        i + 1, c.line, fmt(c.vertex[0]).c_str(), fmt(c.vertex[1]).c_str(),
        fmt(c.vertex[2]).c_str(), fmt(c.turn_angle).c_str(),
        fmt(c.radius).c_str(), fmt(c.trim).c_str(), fmt(c.speed).c_str());
  }

  if (!out_csv.empty()) {
    if (hpkm_status s = hpkm_plan_write_csv(plan, out_csv.c_str()))
      return fail(s);
    std::printf("csv: %s\n", out_csv.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematics, trajectory planning and control simulation for a "
               "5-axis hybrid parallel kinematic machine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hpkm_version());

  std::string config;
  app.add_option("--config", config, "Machine parameter file (key = value)");

  // ---- ik ----------------------------------------------------------------
  auto* ik = app.add_subcommand("ik", "Inverse kinematics of a tool pose");
  double ik_alpha = 0.0, ik_beta = 0.0, ik_x = 0.0, ik_y = 0.0, ik_z = 0.0;
  auto* ik_a = ik->add_option("--alpha", ik_alpha, "Tilt about x (rad)");
  auto* ik_b = ik->add_option("--beta", ik_beta, "Tilt about y (rad)");
  auto* ik_ad = ik->add_option_function<double>(
      "--alpha-deg", [&](double v) { ik_alpha = v * k_deg; },
      "Tilt about x (degrees)");
  auto* ik_bd = ik->add_option_function<double>(
      "--beta-deg", [&](double v) { ik_beta = v * k_deg; },
      "Tilt about y (degrees)");
  ik_a->excludes(ik_ad);
  ik_b->excludes(ik_bd);
  auto* ik_xm = ik->add_option("--x", ik_x, "Tool tip x (m)");
  auto* ik_ym = ik->add_option("--y", ik_y, "Tool tip y (m)");
  auto* ik_zm = ik->add_option("--z", ik_z, "Tool tip z (m)");
  auto* ik_xmm = ik->add_option_function<double>(
      "--x-mm", [&](double v) { ik_x = v * 1e-3; }, "Tool tip x (mm)");
  auto* ik_ymm = ik->add_option_function<double>(
      "--y-mm", [&](double v) { ik_y = v * 1e-3; }, "Tool tip y (mm)");
  auto* ik_zmm = ik->add_option_function<double>(
      "--z-mm", [&](double v) { ik_z = v * 1e-3; }, "Tool tip z (mm)");
  ik_xm->excludes(ik_xmm);
  ik_ym->excludes(ik_ymm);
  ik_zm->excludes(ik_zmm);
  std::vector<int> ik_mode;
  ik->add_option("--mode", ik_mode, "Working mode signs, e.g. 1,1,1")
      ->delimiter(',')
      ->expected(3);

  // ---- fk ----------------------------------------------------------------
  auto* fk = app.add_subcommand("fk", "Forward kinematics of a joint state");
  double fk_t1 = 0.0, fk_t2 = 0.0;
  auto* fk_a = fk->add_option("--theta1", fk_t1, "Wrist angle 1 (rad)");
  auto* fk_b = fk->add_option("--theta2", fk_t2, "Wrist angle 2 (rad)");
  auto* fk_ad = fk->add_option_function<double>(
      "--theta1-deg", [&](double v) { fk_t1 = v * k_deg; },
      "Wrist angle 1 (degrees)");
  auto* fk_bd = fk->add_option_function<double>(
      "--theta2-deg", [&](double v) { fk_t2 = v * k_deg; },
      "Wrist angle 2 (degrees)");
  fk_a->excludes(fk_ad);
  fk_b->excludes(fk_bd);
  std::vector<double> fk_rho;
  fk->add_option("--rho", fk_rho, "Prismatic extensions rho1,rho2,rho3 (m)")
      ->delimiter(',')
      ->expected(3)
      ->required();
  int fk_assembly = 0;
  fk->add_option("--assembly", fk_assembly,
                 "Forward-kinematics branch: -1 or 1 (default -1)");

  // ---- plan --------------------------------------------------------------
  auto* plan_cmd = app.add_subcommand("plan", "Generate a trajectory plan");
  plan_cmd->require_subcommand(1);

  double speed_ratio = 1.0, sample_rate = 1500.0;
  bool safety = false;
  std::string out_csv;
  for (CLI::App* sub : {plan_cmd}) {
    sub->add_option("--speed-ratio", speed_ratio,
                    "Feed override in (0, 1] applied to the Cartesian caps");
    sub->add_option("--sample-rate", sample_rate, "Plan sample rate (Hz)");
    sub->add_flag("--safety", safety,
                  "Engage the reduced-speed safety cap on Cartesian motion");
    sub->add_option("--out", out_csv, "Write the plan to this CSV file");
  }

  auto* plan_line = plan_cmd->add_subcommand("line", "Point-to-point tour");
  bool line_table1 = false;
  plan_line->add_flag("--from-table1", line_table1,
                      "Use the reference linear tour fixture");
  std::vector<std::string> line_points;
  plan_line->add_option("points", line_points,
                        "With --from-table1: waypoint names among P1..P4");
  std::vector<double> line_poses;
  plan_line->add_option("--pose", line_poses,
                        "Waypoint alpha,beta,x,y,z (rad, m); repeatable")
      ->delimiter(',');

  auto* plan_circle = plan_cmd->add_subcommand("circle", "Circular move");
  bool circle_table2 = false;
  plan_circle->add_flag("--from-table2", circle_table2,
                        "Use the reference circular fixture");
  std::vector<double> circle_center{0.0, 0.0, 0.0};
  double circle_radius = 0.0;
  double eta_min = 0.0, eta_max = 2.0 * k_pi;
  double alpha1 = 0.0, beta1 = 0.0;
  std::vector<double> tilt_start{0.0, 0.0}, tilt_end{0.0, 0.0};
  std::vector<double> entry_pose, exit_pose;
  plan_circle->add_option("--center", circle_center, "Circle center x,y,z (m)")
      ->delimiter(',')
      ->expected(3);
  plan_circle->add_option("--radius", circle_radius, "Circle radius (m)");
  plan_circle->add_option("--eta-min", eta_min, "Arc start angle (rad)");
  plan_circle->add_option("--eta-max", eta_max, "Arc end angle (rad)");
  plan_circle->add_option("--alpha1", alpha1, "Plane rotation about z (rad)");
  plan_circle->add_option("--beta1", beta1, "Plane rotation about y (rad)");
  plan_circle->add_option("--tilt-start", tilt_start,
                          "Tool tilt alpha,beta at the arc start (rad)")
      ->delimiter(',')
      ->expected(2);
  plan_circle->add_option("--tilt-end", tilt_end,
                          "Tool tilt alpha,beta at the arc end (rad)")
      ->delimiter(',')
      ->expected(2);
  plan_circle->add_option("--entry", entry_pose,
                          "Entry pose alpha,beta,x,y,z (rad, m)")
      ->delimiter(',')
      ->expected(5);
  plan_circle->add_option("--exit", exit_pose,
                          "Exit pose alpha,beta,x,y,z (rad, m)")
      ->delimiter(',')
      ->expected(5);

  auto* plan_gcode = plan_cmd->add_subcommand("gcode", "Plan a G-code program");
  std::string gcode_path;
  plan_gcode->add_option("file", gcode_path, "G-code program (G0/G1)")
      ->required();
  double corner_radius = 0.005;
  plan_gcode->add_option("--corner-radius", corner_radius,
                         "Corner blend radius cap (m)");

  // ---- sim ---------------------------------------------------------------
  auto* sim = app.add_subcommand("sim", "Simulate the computed-torque loop");
  std::string sim_plan_csv;
  sim->add_option("--plan", sim_plan_csv, "Plan CSV produced by `plan`");
  bool sim_table1 = false;
  sim->add_flag("--from-table1", sim_table1,
                "Plan the reference linear tour inline");
  hpkm_sim_options sentinel;  // defaults for the help text
  hpkm_sim_options_init(&sentinel);
  double sim_control = sentinel.control_rate, sim_sensing = sentinel.sensing_rate;
  double sim_cutoff = sentinel.velocity_cutoff, sim_duration = 0.0;
  bool sim_filter = false;
  int dist_axis = -1, offset_axis = -1;
  double dist_force = 0.0, dist_start = 0.0, offset_value = 0.0;
  sim->add_option("--control-rate", sim_control, "Control rate (Hz)");
  sim->add_option("--sensing-rate", sim_sensing, "Sensing rate (Hz)");
  sim->add_option("--cutoff", sim_cutoff, "Velocity filter cutoff (Hz)");
  sim->add_flag("--filter", sim_filter,
                "Close the loop on the filtered velocity estimate");
  sim->add_option("--duration", sim_duration,
                  "Simulated seconds (0 = plan duration)");
  sim->add_option("--disturbance-axis", dist_axis,
                  "Axis 0..4 receiving a step disturbance (-1 disables)");
  sim->add_option("--disturbance-force", dist_force,
                  "Step disturbance magnitude (N or N m)");
  sim->add_option("--disturbance-start", dist_start,
                  "Disturbance onset time (s)");
  sim->add_option("--offset-axis", offset_axis,
                  "Axis 0..4 starting offset from the plan (-1 disables)");
  sim->add_option("--offset-value", offset_value,
                  "Initial offset magnitude (rad or m)");
  std::string sim_out;
  sim->add_option("--out", sim_out, "Write the trace to this CSV file");

  // ---- check-workspace ---------------------------------------------------
  auto* ws = app.add_subcommand("check-workspace",
                                "Workspace membership checks");
  double cube_edge = 0.5;
  std::vector<double> cube_center{0.25, 0.25, 0.25};
  int cube_samples = 11;
  std::vector<double> ws_pose;
  ws->add_option("--cube", cube_edge, "Cube edge length (m)")
      ->check(CLI::PositiveNumber);
  ws->add_option("--center", cube_center, "Cube center x,y,z (m)")
      ->delimiter(',')
      ->expected(3);
  ws->add_option("--samples", cube_samples, "Grid samples per edge")
      ->check(CLI::Range(2, 1000));
  ws->add_option("--pose", ws_pose,
                 "Check one pose alpha,beta,x,y,z instead of the cube")
      ->delimiter(',')
      ->expected(5);

  // Let options placed after a subcommand name (e.g. a trailing --out or a
  // leading --config) match the enclosing command.
  for (CLI::App* sub :
       {ik, fk, plan_cmd, plan_line, plan_circle, plan_gcode, sim, ws})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const bool wants_fixture =
      line_table1 || circle_table2 || sim_table1;
  ParamsPtr params;
  if (hpkm_status s = load_params(config, wants_fixture, &params.p))
    return fail(s);

  if (app.got_subcommand(ik)) {
    const double pose[5] = {ik_alpha, ik_beta, ik_x, ik_y, ik_z};
    double joints[5];
    hpkm_status s;
    if (ik_mode.empty()) {
      s = hpkm_ik(params.p, pose, nullptr, joints);
    } else {
      const int mode[3] = {ik_mode[0], ik_mode[1], ik_mode[2]};
      s = hpkm_ik(params.p, pose, mode, joints);
    }
    if (s) return fail(s);
    std::printf("theta1 = %s rad\n", fmt(joints[0]).c_str());
    std::printf("theta2 = %s rad\n", fmt(joints[1]).c_str());
    std::printf("rho = (%s, %s, %s) m\n", fmt(joints[2]).c_str(),
                fmt(joints[3]).c_str(), fmt(joints[4]).c_str());
    return 0;
  }

  if (app.got_subcommand(fk)) {
    const double joints[5] = {fk_t1, fk_t2, fk_rho[0], fk_rho[1], fk_rho[2]};
    double pose[5];
    if (hpkm_status s = hpkm_fk(params.p, joints, fk_assembly, pose))
      return fail(s);
    std::printf("alpha = %s rad\n", fmt(pose[0]).c_str());
    std::printf("beta = %s rad\n", fmt(pose[1]).c_str());
    std::printf("tip = (%s, %s, %s) m\n", fmt(pose[2]).c_str(),
                fmt(pose[3]).c_str(), fmt(pose[4]).c_str());
    return 0;
  }

  hpkm_plan_options popts;
  hpkm_plan_options_init(&popts);
  popts.speed_ratio = speed_ratio;
  popts.sample_rate = sample_rate;
  popts.safety_cap = safety ? 1 : 0;

  if (app.got_subcommand(plan_cmd)) {
    PlanPtr plan;
    if (plan_cmd->got_subcommand(plan_line)) {
      std::vector<double> flat;
      if (line_table1) {
        std::vector<std::string> names = line_points;
        if (names.empty()) names = {"P1", "P2", "P3", "P4"};
        for (const std::string& name : names) {
          if (name.size() != 2 || name[0] != 'P' || name[1] < '1' ||
              name[1] > '4') {
            std::fprintf(stderr, "error: unknown waypoint '%s' (use P1..P4)\n",
                         name.c_str());
            return 1;
          }
          const double* p = k_table1[name[1] - '1'];
          flat.insert(flat.end(), p, p + 5);
        }
      } else {
        if (line_poses.empty() || line_poses.size() % 5 != 0) {
          std::fprintf(stderr,
                       "error: --pose expects one or more alpha,beta,x,y,z "
                       "quintuples\n");
          return 1;
        }
        flat = line_poses;
      }
      if (hpkm_status s = hpkm_plan_line(params.p, flat.data(), flat.size() / 5,
                                         &popts, &plan.p))
        return fail(s);
    } else if (plan_cmd->got_subcommand(plan_circle)) {
      hpkm_circle circle;
      double entry[5], exit_[5];
      if (circle_table2) {
        circle.center[0] = circle.center[1] = circle.center[2] = 0.010;
        circle.radius = 0.030;
        circle.eta_min = 0.0;
        circle.eta_max = 2.0 * k_pi;
        circle.alpha1 = circle.beta1 = 0.0;
        circle.a2 = 20.0 * k_deg;
        circle.b2 = 0.0;
        circle.a3 = 0.0;
        circle.b3 = 20.0 * k_deg;
        for (int i = 0; i < 5; ++i) entry[i] = exit_[i] = k_table1[0][i];
      } else {
        circle.center[0] = circle_center[0];
        circle.center[1] = circle_center[1];
        circle.center[2] = circle_center[2];
        circle.radius = circle_radius;
        circle.eta_min = eta_min;
        circle.eta_max = eta_max;
        circle.alpha1 = alpha1;
        circle.beta1 = beta1;
        circle.a2 = tilt_start[0];
        circle.b2 = tilt_start[1];
        circle.a3 = tilt_end[0];
        circle.b3 = tilt_end[1];
        if (entry_pose.size() != 5 || exit_pose.size() != 5) {
          std::fprintf(stderr,
                       "error: --entry and --exit poses are required without "
                       "--from-table2\n");
          return 1;
        }
        for (int i = 0; i < 5; ++i) entry[i] = entry_pose[i];
        for (int i = 0; i < 5; ++i) exit_[i] = exit_pose[i];
      }
      if (hpkm_status s =
              hpkm_plan_circle(params.p, &circle, entry, exit_, &popts, &plan.p))
        return fail(s);
    } else {
      std::ifstream in(gcode_path);
      if (!in) {
        std::fprintf(stderr, "error: cannot read %s\n", gcode_path.c_str());
        return 1;
      }
      std::ostringstream text;
      text << in.rdbuf();
      if (hpkm_status s = hpkm_plan_gcode(params.p, text.str().c_str(),
                                          corner_radius, &popts, &plan.p))
        return fail(s);
    }
    return print_plan_report(plan.p, params.p, out_csv);
  }

  if (app.got_subcommand(sim)) {
    PlanPtr plan;
    if (!sim_plan_csv.empty()) {
      if (hpkm_status s = hpkm_plan_read_csv(sim_plan_csv.c_str(), &plan.p))
        return fail(s);
    } else if (sim_table1) {
      std::vector<double> flat;
      for (const auto& row : k_table1) flat.insert(flat.end(), row, row + 5);
      if (hpkm_status s = hpkm_plan_line(params.p, flat.data(), 4, &popts,
                                         &plan.p))
        return fail(s);
    } else {
      std::fprintf(stderr, "error: sim needs --plan FILE or --from-table1\n");
      return 1;
    }

    hpkm_sim_options sopts;
    hpkm_sim_options_init(&sopts);
    sopts.control_rate = sim_control;
    sopts.sensing_rate = sim_sensing;
    sopts.velocity_cutoff = sim_cutoff;
    sopts.use_velocity_filter = sim_filter ? 1 : 0;
    sopts.duration = sim_duration;
    sopts.disturbance_axis = dist_axis;
    sopts.disturbance_force = dist_force;
    sopts.disturbance_start = dist_start;
    sopts.offset_axis = offset_axis;
    sopts.offset_value = offset_value;

    TracePtr trace;
    if (hpkm_status s = hpkm_sim_run(params.p, plan.p, &sopts, &trace.p))
      return fail(s);
    hpkm_sim_summary summary;
    if (hpkm_status s = hpkm_trace_summary(trace.p, &summary)) return fail(s);

    std::printf("sim: %zu steps\n", hpkm_trace_step_count(trace.p));
    for (int i = 0; i < 5; ++i)
      std::printf("axis %d: max error %s, max |u| %s\n", i,
                  fmt(summary.max_error[i]).c_str(),
                  fmt(summary.max_u[i]).c_str());
    if (summary.shutdown)
      std::printf("shutdown: yes at t = %s s\n",
                  fmt(summary.shutdown_time).c_str());
    else
      std::printf("shutdown: no\n");
    std::printf("cycle seconds: median %s, max %s\n",
                fmt(summary.median_cycle_seconds).c_str(),
                fmt(summary.max_cycle_seconds).c_str());
    if (!sim_out.empty()) {
      if (hpkm_status s = hpkm_trace_write_csv(trace.p, sim_out.c_str()))
        return fail(s);
      std::printf("trace: %s\n", sim_out.c_str());
    }
    return summary.shutdown ? 3 : 0;
  }

  if (app.got_subcommand(ws)) {
    if (!ws_pose.empty()) {
      const double pose[5] = {ws_pose[0], ws_pose[1], ws_pose[2], ws_pose[3],
                              ws_pose[4]};
      int inside = 0;
      const char* reason = nullptr;
      if (hpkm_status s =
              hpkm_workspace_contains(params.p, pose, nullptr, &inside, &reason))
        return fail(s);
      if (inside)
        std::printf("pose: inside\n");
      else
        std::printf("pose: outside (reason %s)\n", reason);
      return 0;
    }
    const double center[3] = {cube_center[0], cube_center[1], cube_center[2]};
    hpkm_cube_report report;
    if (hpkm_status s = hpkm_workspace_cube_check(params.p, center, cube_edge,
                                                  cube_samples, &report))
      return fail(s);
    std::printf("cube check: %zu/%zu inside (%.2f%%)\n", report.passed,
                report.total,
                100.0 * static_cast<double>(report.passed) /
                    static_cast<double>(report.total));
    if (report.passed < report.total)
      std::printf("first failure: center (%s, %s, %s) m, reason %s\n",
                  fmt(report.first_failure[0]).c_str(),
                  fmt(report.first_failure[1]).c_str(),
                  fmt(report.first_failure[2]).c_str(), report.first_reason);
    return 0;
  }

  return 1;  // unreachable: a subcommand is required
}

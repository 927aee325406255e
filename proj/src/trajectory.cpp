#include "hpkm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hpkm {

namespace {

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return buf;
}

std::vector<TrajectorySample> sample_linear(const Pose& from, const Pose& to,
                                            double tf, const MachineParams& params,
                                            const PlanOptions& opts,
                                            double t_offset) {
  const Vec5 start = from.vector();
  const Vec5 delta = to.vector() - start;
  std::vector<TrajectorySample> samples;
  for (double t : sample_grid(tf, opts.sample_rate)) {
    const QuinticEval s = quintic(t, tf);
    samples.push_back(project_sample(t, Pose::from_vector(start + delta * s.r),
                                  delta * s.rd, delta * s.rdd, params, opts,
                                  t_offset));
  }
  return samples;
}

Pose circle_pose(const CircleSpec& spec, const Mat3& rot, double r) {
  const double eta = spec.eta_min + (spec.eta_max - spec.eta_min) * r;
  const Vec3 local(spec.radius * std::cos(eta), spec.radius * std::sin(eta), 0.0);
  Pose pose;
  pose.alpha = spec.a2 + (spec.a3 - spec.a2) * r;
  pose.beta = spec.b2 + (spec.b3 - spec.b2) * r;
  pose.tip = spec.center + rot * local;
  return pose;
}

std::vector<TrajectorySample> sample_circle(const CircleSpec& spec,
                                            const Mat3& rot, double tf,
                                            const MachineParams& params,
                                            const PlanOptions& opts,
                                            double t_offset) {
  const double deta = spec.eta_max - spec.eta_min;
  const double da = spec.a3 - spec.a2, db = spec.b3 - spec.b2;
  std::vector<TrajectorySample> samples;
  for (double t : sample_grid(tf, opts.sample_rate)) {
    const QuinticEval s = quintic(t, tf);
    const double eta = spec.eta_min + deta * s.r;
    const double eta_d = deta * s.rd;  // d(eta)/dt along the profile
    const Vec3 radial(std::cos(eta), std::sin(eta), 0.0);
    const Vec3 tangent(-std::sin(eta), std::cos(eta), 0.0);
    Twist vel, acc;
    vel << da * s.rd, db * s.rd, rot * (spec.radius * eta_d * tangent);
    acc << da * s.rdd, db * s.rdd,
        rot * (spec.radius * (deta * s.rdd * tangent - eta_d * eta_d * radial));
    samples.push_back(project_sample(t, circle_pose(spec, rot, s.r), vel, acc,
                                  params, opts, t_offset));
  }
  return samples;
}

void validate_options(const PlanOptions& opts) {
  if (!(opts.speed_ratio > 0.0) || opts.speed_ratio > 1.0)
    raise(Errc::invalid_argument, "speed_ratio must lie in (0, 1]");
  if (!(opts.sample_rate > 0.0))
    raise(Errc::invalid_argument, "sample_rate must be positive");
}

// Appends a rescaled segment, merging the shared junction sample.
void append_segment(Plan& plan, const std::string& label, double tf_initial,
                    double tf_final, double multiplier,
                    std::vector<TrajectorySample>&& seg) {
  SegmentInfo info;
  info.label = label;
  info.t_start = plan.samples.empty() ? 0.0 : plan.samples.back().t;
  info.tf_initial = tf_initial;
  info.tf_final = tf_final;
  info.multiplier = multiplier;
  std::size_t skip = 0;
  if (!plan.samples.empty()) {
    info.first_sample = plan.samples.size() - 1;
    skip = 1;  // segment sample 0 duplicates the previous endpoint
  }
  for (std::size_t i = skip; i < seg.size(); ++i) {
    seg[i].t += info.t_start;
    plan.samples.push_back(std::move(seg[i]));
  }
  plan.segments.push_back(std::move(info));
}

// Times, rescales and appends one linear segment; returns false when the
// displacement is zero and nothing was added.
bool append_linear_segment(Plan& plan, const std::string& label,
                           const Pose& from, const Pose& to,
                           const MachineParams& params, const PlanOptions& opts,
                           double safety_scale) {
  double tf = travel_time(from, to, params, opts.speed_ratio, opts.safety_cap);
  if (tf == 0.0) return false;
  const double tf_initial = tf;
  const double t_offset = plan.samples.empty() ? 0.0 : plan.samples.back().t;
  std::vector<TrajectorySample> seg;
  const double multiplier = rescale_to_limits(
      [&](double T) {
        return sample_linear(from, to, T, params, opts, t_offset);
      },
      tf, params, safety_scale, seg);
  append_segment(plan, label, tf_initial, tf, multiplier, std::move(seg));
  return true;
}

}  // namespace

std::vector<double> sample_grid(double tf, double sample_rate) {
  const double dt = 1.0 / sample_rate;
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(tf / dt) + 2);
  times.push_back(0.0);
  const double end_slack = 1e-9 * std::max(1.0, tf);
  for (std::size_t k = 1; k * dt < tf - end_slack; ++k) times.push_back(k * dt);
  times.push_back(tf);
  return times;
}

TrajectorySample project_sample(double t, const Pose& pose, const Twist& vel,
                                const Twist& acc, const MachineParams& params,
                                const PlanOptions& opts, double t_offset) {
  const WorkspaceCheck ws = check_workspace(pose, params, opts.mode);
  if (!ws.inside)
    raise(Errc::workspace_exit,
          "trajectory leaves the workspace at t = " + format_time(t_offset + t) +
              " s (" + workspace_reason_name(ws.reason) + ")",
          ws.leg);
  TrajectorySample sample;
  sample.t = t;
  sample.pose = pose;
  sample.vel = vel;
  sample.acc = acc;
  sample.q = ik_full(pose, params, opts.mode, false);
  const JointRates rates = project_rates(pose, sample.q, vel, acc, params);
  sample.qd = rates.qd;
  sample.qdd = rates.qdd;
  return sample;
}

QuinticEval quintic(double t, double tf) {
  if (!(tf > 0.0))
    raise(Errc::invalid_argument, "quintic duration must be positive");
  if (t < 0.0 || t > tf)
    raise(Errc::invalid_argument, "quintic time outside [0, t_f]");
  const double tau = t / tf;
  const double tau2 = tau * tau;
  const double one = 1.0 - tau;
  QuinticEval out;
  out.r = tau2 * tau * (10.0 - 15.0 * tau + 6.0 * tau2);
  out.rd = 30.0 * tau2 * one * one / tf;
  out.rdd = 60.0 * tau * one * (1.0 - 2.0 * tau) / (tf * tf);
  return out;
}

double travel_time(const Pose& from, const Pose& to, const MachineParams& params,
                   double speed_ratio, bool safety) {
  if (!(speed_ratio > 0.0) || speed_ratio > 1.0)
    raise(Errc::invalid_argument, "speed_ratio must lie in (0, 1]");
  const double dist_t = (to.tip - from.tip).norm();
  const double dist_r =
      std::hypot(to.alpha - from.alpha, to.beta - from.beta);
  if (dist_t == 0.0 && dist_r == 0.0) return 0.0;
  const double scale = speed_ratio * (safety ? params.safety_speed_ratio : 1.0);
  return std::max(dist_t / (scale * params.k_vt),
                  dist_r / (scale * params.k_vr));
}

LimitRatios limit_ratios(const std::vector<TrajectorySample>& samples,
                         const MachineParams& params, double safety_scale) {
  LimitRatios ratios;
  const double vt_cap = params.k_vt * safety_scale;
  const double vr_cap = params.k_vr * safety_scale;
  for (const TrajectorySample& s : samples) {
    double vel = std::max(s.vel.tail<3>().norm() / vt_cap,
                          s.vel.head<2>().norm() / vr_cap);
    double acc = std::max(s.acc.tail<3>().norm() / params.a_t_max,
                          s.acc.head<2>().norm() / params.a_r_max);
    for (int axis = 0; axis < 5; ++axis) {
      const double v_cap = axis < 2 ? params.k_vr : params.k_vt;
      const double a_cap = axis < 2 ? params.a_r_max : params.a_t_max;
      vel = std::max(vel, std::abs(s.qd[axis]) / v_cap);
      acc = std::max(acc, std::abs(s.qdd[axis]) / a_cap);
    }
    ratios.vel = std::max(ratios.vel, vel);
    ratios.acc = std::max(ratios.acc, acc);
  }
  return ratios;
}

double rescale_to_limits(
    const std::function<std::vector<TrajectorySample>(double)>& sampler,
    double& tf, const MachineParams& params, double safety_scale,
    std::vector<TrajectorySample>& samples) {
  samples = sampler(tf);
  double multiplier = 1.0;
  // Time scaling alone solves this (rates scale as 1/g, accelerations as
  // 1/g^2); the loop only mops up grid-shift residue from re-sampling.
  for (int pass = 0; pass < 3; ++pass) {
    const LimitRatios ratios = limit_ratios(samples, params, safety_scale);
    const double g = std::max(ratios.vel, std::sqrt(ratios.acc));
    if (g <= 1.0 + 1e-10) break;
    tf *= g;
    multiplier *= g;
    samples = sampler(tf);
  }
  return multiplier;
}

Plan plan_linear(const std::vector<Pose>& waypoints, const MachineParams& params,
                 const PlanOptions& opts) {
  validate_options(opts);
  if (waypoints.empty())
    raise(Errc::invalid_argument, "plan_linear needs at least one waypoint");
  const double safety_scale = opts.safety_cap ? params.safety_speed_ratio : 1.0;
  Plan plan;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const std::string label =
        "P" + std::to_string(i + 1) + "->P" + std::to_string(i + 2);
    append_linear_segment(plan, label, waypoints[i], waypoints[i + 1], params,
                          opts, safety_scale);
  }
  if (plan.samples.empty())
    plan.samples.push_back(project_sample(0.0, waypoints.front(), Twist::Zero(),
                                       Twist::Zero(), params, opts, 0.0));
  return plan;
}

Plan plan_circular(const CircleSpec& spec, const Pose& entry, const Pose& exit,
                   const MachineParams& params, const PlanOptions& opts) {
  validate_options(opts);
  if (!(spec.radius > 0.0))
    raise(Errc::invalid_argument, "circle radius must be positive");
  if (spec.eta_max == spec.eta_min)
    raise(Errc::invalid_argument, "circle arc has zero angular extent");
  const double safety_scale = opts.safety_cap ? params.safety_speed_ratio : 1.0;
  Mat3 rot;
  rot = Eigen::AngleAxisd(spec.alpha1, Vec3::UnitZ()) *
        Eigen::AngleAxisd(spec.beta1, Vec3::UnitY());

  Plan plan;
  const Pose arc_start = circle_pose(spec, rot, 0.0);
  const Pose arc_end = circle_pose(spec, rot, 1.0);
  append_linear_segment(plan, "approach", entry, arc_start, params, opts,
                        safety_scale);

  // The provisional arc time uses the arc length where a line uses the chord.
  const double deta = std::abs(spec.eta_max - spec.eta_min);
  const double dist_r = std::hypot(spec.a3 - spec.a2, spec.b3 - spec.b2);
  const double scale =
      opts.speed_ratio * (opts.safety_cap ? params.safety_speed_ratio : 1.0);
  double tf = std::max(spec.radius * deta / (scale * params.k_vt),
                       dist_r / (scale * params.k_vr));
  const double tf_initial = tf;
  const double t_offset = plan.samples.empty() ? 0.0 : plan.samples.back().t;
  std::vector<TrajectorySample> seg;
  const double multiplier = rescale_to_limits(
      [&](double T) { return sample_circle(spec, rot, T, params, opts, t_offset); },
      tf, params, safety_scale, seg);
  append_segment(plan, "arc", tf_initial, tf, multiplier, std::move(seg));

  append_linear_segment(plan, "retract", arc_end, exit, params, opts,
                        safety_scale);
  return plan;
}

Plan close_loop(const Pose& current, const Plan& plan, const MachineParams& params,
                const PlanOptions& opts) {
  validate_options(opts);
  if (plan.samples.empty()) return plan_linear({current}, params, opts);
  const double safety_scale = opts.safety_cap ? params.safety_speed_ratio : 1.0;

  Plan closed;
  append_linear_segment(closed, "approach", current, plan.samples.front().pose,
                        params, opts, safety_scale);
  const double shift = closed.samples.empty() ? 0.0 : closed.samples.back().t;
  const std::size_t skip = closed.samples.empty() ? 0 : 1;
  const std::size_t offset =
      closed.samples.size() - skip;  // index shift for reused segment infos
  for (std::size_t i = skip; i < plan.samples.size(); ++i) {
    TrajectorySample s = plan.samples[i];
    s.t += shift;
    closed.samples.push_back(std::move(s));
  }
  for (SegmentInfo info : plan.segments) {
    info.t_start += shift;
    info.first_sample += offset;
    closed.segments.push_back(std::move(info));
  }
  append_linear_segment(closed, "return", closed.samples.back().pose, current,
                        params, opts, safety_scale);
  return closed;
}

}  // namespace hpkm

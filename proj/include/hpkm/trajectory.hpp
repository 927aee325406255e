#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hpkm/hybrid.hpp"
#include "hpkm/params.hpp"
#include "hpkm/types.hpp"

namespace hpkm {

// Normalized quintic s-curve r(tau) = 10 tau^3 - 15 tau^4 + 6 tau^5 with its
// first two time derivatives. r: 0 -> 1 over [0, tf] with zero boundary
// velocity and acceleration; rd peaks at 1.875/tf, |rdd| at 10/(sqrt(3) tf^2).
struct QuinticEval {
  double r = 0.0;
  double rd = 0.0;
  double rdd = 0.0;
};
QuinticEval quintic(double t, double tf);

// Minimum-time heuristic: tf = max(|D_T| / v_t, |D_R| / v_r) where the caps
// are k_vt/k_vr scaled by speed_ratio (and by safety_speed_ratio when the
// safety cap is engaged). Zero for identical poses.
double travel_time(const Pose& from, const Pose& to, const MachineParams& params,
                   double speed_ratio = 1.0, bool safety = false);

struct TrajectorySample {
  double t = 0.0;
  Pose pose;
  Twist vel = Twist::Zero();
  Twist acc = Twist::Zero();
  JointState q;
  Vec5 qd = Vec5::Zero();
  Vec5 qdd = Vec5::Zero();
};

struct PlanOptions {
  double speed_ratio = 1.0;
  double sample_rate = 1500.0;  // Hz
  bool safety_cap = false;
  WorkingMode mode{};
};

struct SegmentInfo {
  std::string label;
  std::size_t first_sample = 0;  // index into Plan::samples
  double t_start = 0.0;
  double tf_initial = 0.0;  // travel time before rescaling
  double tf_final = 0.0;
  double multiplier = 1.0;
};

struct Plan {
  std::vector<TrajectorySample> samples;
  std::vector<SegmentInfo> segments;

  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
};

// Uniform grid 0, 1/rate, 2/rate, ... with tf always appended; the last step
// may be partial.
std::vector<double> sample_grid(double tf, double sample_rate);

// Projects one pose/velocity/acceleration triple into a full sample:
// workspace check (raising Error(workspace_exit) with the offending absolute
// time t_offset + t), inverse kinematics, and joint rates.
TrajectorySample project_sample(double t, const Pose& pose, const Twist& vel,
                                const Twist& acc, const MachineParams& params,
                                const PlanOptions& opts, double t_offset = 0.0);

// Worst velocity / acceleration ratios over the samples: Cartesian norms
// against the (optionally safety-scaled) k_vt/k_vr caps and per-joint rates
// against the hardware caps.
struct LimitRatios {
  double vel = 0.0;
  double acc = 0.0;
  double worst() const { return vel > acc ? vel : acc; }
};
LimitRatios limit_ratios(const std::vector<TrajectorySample>& samples,
                         const MachineParams& params, double safety_scale = 1.0);

// Stretches a segment until every ratio is <= 1: tf <- tf * max(g_v,
// sqrt(g_a)), re-sampling through `sampler` (at most three passes). Returns
// the accumulated multiplier and leaves the final samples in `samples`.
double rescale_to_limits(const std::function<std::vector<TrajectorySample>(double)>& sampler,
                         double& tf, const MachineParams& params,
                         double safety_scale,
                         std::vector<TrajectorySample>& samples);

// Point-to-point quintic segments through the waypoints (at least one). Each
// segment is timed by travel_time and rescaled independently.
Plan plan_linear(const std::vector<Pose>& waypoints, const MachineParams& params,
                 const PlanOptions& opts = {});

// Circular arc in a tilted plane. The tip follows
//   P_C + Rz(alpha1) Ry(beta1) * (R cos(eta), R sin(eta), 0),
// eta = eta_min + (eta_max - eta_min) r(t), while the tilt angles run
// linearly in r from (a2, b2) to (a3, b3).
struct CircleSpec {
  Vec3 center = Vec3::Zero();  // m
  double radius = 0.0;
  double eta_min = 0.0;
  double eta_max = 2.0 * k_pi;
  double alpha1 = 0.0;  // plane orientation (rad)
  double beta1 = 0.0;
  double a2 = 0.0;  // tilt at arc start (rad)
  double b2 = 0.0;
  double a3 = 0.0;  // tilt at arc end
  double b3 = 0.0;
};

// Linear approach from `entry` to the arc start, the arc, then a linear
// retract to `exit`. Degenerate approach/retract segments are dropped.
Plan plan_circular(const CircleSpec& spec, const Pose& entry, const Pose& exit,
                   const MachineParams& params, const PlanOptions& opts = {});

// Prepends current -> first pose and appends last pose -> current linear
// segments when they differ from `current`.
Plan close_loop(const Pose& current, const Plan& plan, const MachineParams& params,
                const PlanOptions& opts = {});

}  // namespace hpkm

#pragma once

#include <vector>

#include "hpkm/params.hpp"
#include "hpkm/trajectory.hpp"
#include "hpkm/types.hpp"

namespace hpkm {

// Decoupled rigid axis: inertia * q_ddot = force. Propagation is exact for a
// force held constant over the step.
struct AxisPlant {
  double inertia = 1.0;
  double position = 0.0;
  double velocity = 0.0;

  void step(double force, double dt) {
    const double a = force / inertia;
    position += velocity * dt + 0.5 * a * dt * dt;
    velocity += a * dt;
  }
};

// Backward difference of the sensed positions followed by a first-order
// low-pass (bilinear discretization). The filter seeds on the first
// difference so a constant-velocity start has no transient.
class VelocityEstimator {
 public:
  VelocityEstimator(double sample_rate, double cutoff_hz);
  double push(double position);  // returns the filtered estimate
  double value() const { return state_; }

 private:
  double dt_;
  double b_;   // bilinear numerator coefficient
  double a1_;  // bilinear denominator coefficient
  double state_ = 0.0;
  double prev_input_ = 0.0;
  double prev_position_ = 0.0;
  int count_ = 0;
};

// Offline form: positions sampled at `sensing_rate`, estimates decimated to
// every `decimation`-th sample.
std::vector<double> estimate_velocity(const std::vector<double>& positions,
                                      double sensing_rate, double cutoff_hz,
                                      int decimation = 1);

// Per-axis saturation levels: inertia * a_r_max for the wrist axes, mass *
// a_t_max for the prismatic axes.
Vec5 torque_limits(const MachineParams& params);

// Gamma = inertia * (qdd_des + kp e + kd e_dot + ki int_e), saturated.
double computed_torque(double inertia, double qdd_des, double e, double e_dot,
                       double integral, const ControlGains& gains,
                       double torque_max);

struct Disturbance {
  int axis = -1;       // 0..4; -1 disables
  double force = 0.0;  // N or N m, applied from `start` onwards
  double start = 0.0;
};

struct SimConfig {
  double control_rate = 1500.0;  // Hz
  double sensing_rate = 9000.0;  // Hz, integer multiple of control_rate
  double velocity_cutoff = 200.0;  // Hz
  bool use_velocity_filter = false;  // feed the filtered estimate to the PID
  double duration = 0.0;             // 0 = plan duration
  Disturbance disturbance;
  int offset_axis = -1;  // initial plant offset, for shutdown tests
  double offset_value = 0.0;

  void validate() const;
};

struct SimStep {
  double t = 0.0;
  Vec5 q_des = Vec5::Zero();
  Vec5 q_act = Vec5::Zero();
  Vec5 qd_des = Vec5::Zero();
  Vec5 qd_est = Vec5::Zero();
  Vec5 error = Vec5::Zero();
  Vec5 u = Vec5::Zero();  // torque normalized to [-1, 1]
  double cycle_seconds = 0.0;  // wall-clock compute time of the cycle
};

struct SimTrace {
  std::vector<SimStep> steps;
  bool shutdown = false;
  double shutdown_time = -1.0;
};

// Closed-loop simulation of the five decoupled axes tracking the plan's
// joint-space trajectory. Control at control_rate with zero-order-hold
// torque; plant integrated at sensing_rate. Plants start on-trajectory
// (plus the configured offset). Stops within one control period after any
// prismatic tracking error exceeds params.error_shutdown.
SimTrace run_sim(const Plan& plan, const MachineParams& params,
                 const SimConfig& config = {});

}  // namespace hpkm

#include "hpkm/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hpkm/error.hpp"

namespace hpkm {

VelocityEstimator::VelocityEstimator(double sample_rate, double cutoff_hz) {
  if (!(sample_rate > 0.0))
    raise(Errc::invalid_argument, "sample_rate must be positive");
  if (!(cutoff_hz > 0.0) || cutoff_hz >= sample_rate / 2.0)
    raise(Errc::invalid_argument,
          "velocity filter cutoff must lie in (0, sample_rate/2)");
  dt_ = 1.0 / sample_rate;
  const double wdt = 2.0 * k_pi * cutoff_hz * dt_;
  b_ = wdt / (2.0 + wdt);
  a1_ = (wdt - 2.0) / (2.0 + wdt);
}

double VelocityEstimator::push(double position) {
  if (count_ == 0) {
    prev_position_ = position;
    ++count_;
    return state_;
  }
  const double diff = (position - prev_position_) / dt_;
  prev_position_ = position;
  if (count_ == 1) {
    // Seed on the first difference: a constant-velocity start produces the
    // steady-state output immediately instead of a rise from zero.
    state_ = diff;
    prev_input_ = diff;
    ++count_;
    return state_;
  }
  state_ = b_ * (diff + prev_input_) - a1_ * state_;
  prev_input_ = diff;
  ++count_;
  return state_;
}

std::vector<double> estimate_velocity(const std::vector<double>& positions,
                                      double sensing_rate, double cutoff_hz,
                                      int decimation) {
  if (positions.size() < 2)
    raise(Errc::invalid_argument, "need at least two position samples");
  if (decimation < 1)
    raise(Errc::invalid_argument, "decimation must be at least 1");
  VelocityEstimator filter(sensing_rate, cutoff_hz);
  std::vector<double> out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double v = filter.push(positions[i]);
    if (i % static_cast<std::size_t>(decimation) == 0) out.push_back(v);
  }
  return out;
}

Vec5 torque_limits(const MachineParams& params) {
  Vec5 lim;
  const double rot = params.inertia * params.a_r_max;
  const double trans = params.mass * params.a_t_max;
  lim << rot, rot, trans, trans, trans;
  return lim;
}

double computed_torque(double inertia, double qdd_des, double e, double e_dot,
                       double integral, const ControlGains& gains,
                       double torque_max) {
  const double torque =
      inertia *
      (qdd_des + gains.kp * e + gains.kd * e_dot + gains.ki * integral);
  return std::clamp(torque, -torque_max, torque_max);
}

void SimConfig::validate() const {
  if (!(control_rate > 0.0))
    raise(Errc::invalid_argument, "control_rate must be positive");
  if (!(sensing_rate >= control_rate))
    raise(Errc::invalid_argument, "sensing_rate must be >= control_rate");
  const double ratio = sensing_rate / control_rate;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    raise(Errc::invalid_argument,
          "sensing_rate must be an integer multiple of control_rate");
  if (!(velocity_cutoff > 0.0) || velocity_cutoff >= sensing_rate / 2.0)
    raise(Errc::invalid_argument,
          "velocity_cutoff must lie in (0, sensing_rate/2)");
  if (duration < 0.0)
    raise(Errc::invalid_argument, "duration must be nonnegative");
  if (disturbance.axis < -1 || disturbance.axis > 4)
    raise(Errc::invalid_argument, "disturbance axis must be -1..4");
  if (offset_axis < -1 || offset_axis > 4)
    raise(Errc::invalid_argument, "offset axis must be -1..4");
}

namespace {

// Desired state read from the plan with a zero-order hold: the latest sample
// at or before t (the plan outlives its end as a hold of the final sample).
const TrajectorySample& zoh(const Plan& plan, double t, std::size_t& cursor) {
  while (cursor + 1 < plan.samples.size() &&
         plan.samples[cursor + 1].t <= t + 1e-12)
    ++cursor;
  return plan.samples[cursor];
}

}  // namespace

SimTrace run_sim(const Plan& plan, const MachineParams& params,
                 const SimConfig& config) {
  config.validate();
  if (plan.samples.empty())
    raise(Errc::invalid_argument, "cannot simulate an empty plan");

  const double dt = 1.0 / config.control_rate;
  const int n_sub =
      static_cast<int>(std::round(config.sensing_rate / config.control_rate));
  const double dt_sub = dt / n_sub;
  const double duration =
      config.duration > 0.0 ? config.duration : plan.duration();
  const Vec5 limits = torque_limits(params);

  // Five decoupled plants starting on-trajectory (plus the test offset).
  AxisPlant plants[5];
  for (int i = 0; i < 5; ++i) {
    plants[i].inertia = i < 2 ? params.inertia : params.mass;
    plants[i].position = plan.samples[0].q.vector()[i];
    plants[i].velocity = plan.samples[0].qd[i];
  }
  if (config.offset_axis >= 0)
    plants[config.offset_axis].position += config.offset_value;

  std::vector<VelocityEstimator> filters;
  if (config.use_velocity_filter) {
    filters.reserve(5);
    for (int i = 0; i < 5; ++i) {
      filters.emplace_back(config.sensing_rate, config.velocity_cutoff);
      filters.back().push(plants[i].position);
    }
  }

  SimTrace trace;
  Vec5 integral = Vec5::Zero();
  Vec5 prev_error = Vec5::Zero();
  std::size_t cursor = 0;
  const std::size_t cycles =
      static_cast<std::size_t>(std::floor(duration * config.control_rate + 1e-9)) + 1;
  trace.steps.reserve(cycles);

  for (std::size_t k = 0; k < cycles; ++k) {
    const auto tic = std::chrono::steady_clock::now();
    const double t = k * dt;
    const TrajectorySample& des = zoh(plan, t, cursor);
    std::size_t next_cursor = cursor;
    const TrajectorySample& des_next = zoh(plan, t + dt, next_cursor);

    SimStep step;
    step.t = t;
    step.q_des = des.q.vector();
    step.qd_des = des.qd;
    for (int i = 0; i < 5; ++i) {
      step.q_act[i] = plants[i].position;
      step.qd_est[i] = config.use_velocity_filter ? filters[i].value()
                                                  : plants[i].velocity;
    }
    step.error = step.q_des - step.q_act;

    // Shutdown rule: any prismatic tracking error beyond the threshold stops
    // the machine; the faulty cycle is recorded with the drives off.
    bool tripped = false;
    for (int i = 2; i < 5; ++i)
      tripped = tripped || std::abs(step.error[i]) > params.error_shutdown;
    if (tripped) {
      step.cycle_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
              .count();
      trace.steps.push_back(step);
      trace.shutdown = true;
      trace.shutdown_time = t;
      break;
    }

    // Trapezoidal integral of the error at the control rate.
    if (k > 0) integral += 0.5 * dt * (step.error + prev_error);
    prev_error = step.error;

    // Feedforward: the cycle's average desired acceleration, i.e. the
    // constant acceleration whose hold reproduces the plan's own velocity
    // sequence. (Holding the instantaneous sampled acceleration instead
    // leaves a tracking floor of ~ jerk * dt / (2 kp).)
    const Vec5 qdd_ff = (des_next.qd - des.qd) / dt;

    Vec5 torque;
    for (int i = 0; i < 5; ++i) {
      const double e_dot = step.qd_des[i] - step.qd_est[i];
      torque[i] =
          computed_torque(plants[i].inertia, qdd_ff[i], step.error[i], e_dot,
                          integral[i], params.gains, limits[i]);
      step.u[i] = torque[i] / limits[i];
    }
    step.cycle_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
            .count();
    trace.steps.push_back(step);

    // Plant propagation at the sensing rate under the held torque.
    for (int sub = 0; sub < n_sub; ++sub) {
      const double t_sub = t + sub * dt_sub;
      for (int i = 0; i < 5; ++i) {
        double force = torque[i];
        if (config.disturbance.axis == i &&
            t_sub >= config.disturbance.start - 1e-12)
          force += config.disturbance.force;
        plants[i].step(force, dt_sub);
        if (config.use_velocity_filter) filters[i].push(plants[i].position);
      }
    }
  }
  return trace;
}

}  // namespace hpkm

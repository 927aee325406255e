#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "hpkm/error.hpp"
#include "hpkm/sim.hpp"
#include "hpkm/trajectory.hpp"

using namespace hpkm;
using namespace hpkm::testing;

namespace {

Plan reference_plan() {
  static const Plan plan = plan_linear(reference_tour(), reference_machine());
  return plan;
}

}  // namespace

TEST_CASE("torque limits derive from the acceleration caps") {
  const MachineParams m;
  const Vec5 lim = torque_limits(m);
  CHECK(lim[0] == doctest::Approx(0.2772 * 270.0).epsilon(1e-15));
  CHECK(lim[1] == lim[0]);
  CHECK(lim[2] == doctest::Approx(91.6278 * 13.0).epsilon(1e-15));
  CHECK(lim[3] == lim[2]);
  CHECK(lim[4] == lim[2]);
  CHECK(lim[0] == doctest::Approx(74.84).epsilon(1e-3));
  CHECK(lim[2] == doctest::Approx(1191.2).epsilon(1e-3));

  MachineParams heavy = m;
  heavy.mass *= 2.0;
  CHECK(torque_limits(heavy)[2] == doctest::Approx(2.0 * lim[2]).epsilon(1e-15));
}

TEST_CASE("computed torque applies the gain law and saturates") {
  const MachineParams m;
  const ControlGains& g = m.gains;
  const double inf = 1e300;

  SUBCASE("zero error and zero feedforward give zero torque") {
    CHECK(computed_torque(m.mass, 0.0, 0.0, 0.0, 0.0, g, inf) == 0.0);
  }

  SUBCASE("1 mm translational error before saturation") {
    const double torque = computed_torque(m.mass, 0.0, 1e-3, 0.0, 0.0, g, inf);
    CHECK(torque == doctest::Approx(91.6278 * 19200.0 * 1e-3).epsilon(1e-15));
    CHECK(torque == doctest::Approx(1759.3).epsilon(1e-4));
  }

  SUBCASE("the same error saturates at the translational limit") {
    const double lim = torque_limits(m)[2];
    CHECK(computed_torque(m.mass, 0.0, 1e-3, 0.0, 0.0, g, lim) == lim);
    CHECK(computed_torque(m.mass, 0.0, -1e-3, 0.0, 0.0, g, lim) == -lim);
  }

  SUBCASE("pure rotational feedforward") {
    CHECK(computed_torque(m.inertia, 10.0, 0.0, 0.0, 0.0, g, inf) ==
          doctest::Approx(0.2772 * 10.0).epsilon(1e-15));
  }

  SUBCASE("derivative and integral terms enter linearly") {
    const double torque =
        computed_torque(2.0, 1.0, 3.0, 5.0, 7.0, ControlGains{10, 20, 30, 0}, inf);
    CHECK(torque == doctest::Approx(2.0 * (1.0 + 30.0 + 100.0 + 210.0))
                        .epsilon(1e-15));
  }
}

TEST_CASE("the closed-loop error polynomial with the default gains is stable") {
  const ControlGains g;
  // Routh condition for s^3 + kd s^2 + kp s + ki.
  CHECK(g.kd * g.kp > g.ki);
  // The default gains factor the polynomial as (s + 80)^3.
  const double s = -80.0;
  CHECK(s * s * s + g.kd * s * s + g.kp * s + g.ki == 0.0);
  // All roots in the left half plane (companion matrix spectrum).
  Mat3 companion = Mat3::Zero();
  companion(0, 1) = 1.0;
  companion(1, 2) = 1.0;
  companion(2, 0) = -g.ki;
  companion(2, 1) = -g.kp;
  companion(2, 2) = -g.kd;
  const Eigen::Vector3cd roots = companion.eigenvalues();
  for (int i = 0; i < 3; ++i) CHECK(roots[i].real() < 0.0);
}

TEST_CASE("velocity estimation filters the backward differences") {
  const double rate = 9000.0;
  const double cutoff = 200.0;

  SUBCASE("constant position estimates zero velocity") {
    std::vector<double> p(100, 0.25);
    for (double v : estimate_velocity(p, rate, cutoff))
      CHECK(std::abs(v) <= 1e-15);
  }

  SUBCASE("a ramp estimates its slope, seeded without transient") {
    const double slope = 0.37;
    std::vector<double> p;
    for (int k = 0; k < 200; ++k) p.push_back(slope * k / rate);
    const auto v = estimate_velocity(p, rate, cutoff);
    // After five filter time constants (~36 samples) the estimate is within
    // 0.1%; the first-difference seed makes it exact from the second sample.
    for (std::size_t k = 1; k < v.size(); ++k)
      CHECK(v[k] == doctest::Approx(slope).epsilon(1e-3));
    CHECK(v.back() == doctest::Approx(slope).epsilon(1e-12));
  }

  SUBCASE("a 200 Hz velocity sinusoid is attenuated to 1/sqrt(2) within 2%") {
    const double f = 200.0;
    const double w = 2.0 * k_pi * f;
    const double amp = 0.8;  // m/s velocity amplitude
    std::vector<double> p;
    for (int k = 0; k < 9000; ++k) {
      const double t = k / rate;
      p.push_back(-amp / w * std::cos(w * t));  // position integral
    }
    const auto v = estimate_velocity(p, rate, cutoff);
    double peak = 0.0;
    for (std::size_t k = v.size() / 2; k < v.size(); ++k)
      peak = std::max(peak, std::abs(v[k]));
    CHECK(peak / amp == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
  }

  SUBCASE("decimation keeps every n-th estimate") {
    std::vector<double> p;
    for (int k = 0; k < 60; ++k) p.push_back(0.1 * k / rate);
    CHECK(estimate_velocity(p, rate, cutoff, 6).size() == 10);
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(estimate_velocity({0.0}, rate, cutoff), Error);
    CHECK_THROWS_AS(estimate_velocity({0.0, 1.0}, rate, 4500.0), Error);
    CHECK_THROWS_AS(estimate_velocity({0.0, 1.0}, rate, cutoff, 0), Error);
  }
}

TEST_CASE("exact-model simulation tracks the reference tour to sub-micron error") {
  const MachineParams m = reference_machine();
  const Plan plan = reference_plan();
  REQUIRE(!plan.samples.empty());

  const SimTrace trace = run_sim(plan, m);
  CHECK(!trace.shutdown);
  // The trace covers the whole plan at the control rate.
  CHECK(trace.steps.back().t >= plan.duration() - 1.0 / 1500.0 - 1e-9);

  double e_max = 0.0, u_max = 0.0;
  for (const SimStep& s : trace.steps) {
    e_max = std::max(e_max, s.error.cwiseAbs().maxCoeff());
    u_max = std::max(u_max, s.u.cwiseAbs().maxCoeff());
  }
  CHECK(e_max < 1e-6);  // joint errors in rad and m
  CHECK(u_max <= 1.0);
  CHECK(u_max > 0.01);  // the drives actually work

  // Simulating past the plan's end holds the final rest pose and the error
  // decays away.
  SimConfig longer;
  longer.duration = plan.duration() + 0.3;
  const SimTrace settled = run_sim(plan, m, longer);
  CHECK(settled.steps.back().error.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("a constant disturbance is rejected along the analytic envelope") {
  const MachineParams m = reference_machine();
  const Plan plan = reference_plan();
  REQUIRE(plan.duration() > 1.3);

  SimConfig config;
  config.disturbance.axis = 3;  // second prismatic actuator
  config.disturbance.force = 100.0;
  config.disturbance.start = 0.1;
  const SimTrace trace = run_sim(plan, m, config);
  CHECK(!trace.shutdown);

  // Triple pole at s = -80: e(dt) = -(F/M) dt^2 exp(-80 dt) / 2 peaking at
  // dt = 2/80 = 25 ms with |e| = (F/M) (2/80)^2 e^-2 / 2 = 4.61e-5 m.
  const double d = config.disturbance.force / m.mass;
  const double peak_pred = d * (2.0 / 80.0) * (2.0 / 80.0) *
                           std::exp(-2.0) / 2.0;
  double peak = 0.0, t_peak = 0.0;
  for (const SimStep& s : trace.steps) {
    if (std::abs(s.error[3]) > peak) {
      peak = std::abs(s.error[3]);
      t_peak = s.t;
    }
  }
  CHECK(peak == doctest::Approx(peak_pred).epsilon(0.05));
  CHECK(peak == doctest::Approx(4.61e-5).epsilon(0.05));
  CHECK(t_peak - config.disturbance.start ==
        doctest::Approx(0.025).epsilon(0.15));

  // Integral action: within 1 s the error settles under 0.05 mm, heading to
  // the steady offset (F/M)/ki ~ 2.1e-6 m.
  const double ss = d / m.gains.ki;
  for (const SimStep& s : trace.steps) {
    if (s.t < config.disturbance.start + 1.0) continue;
    CHECK(std::abs(s.error[3]) < 0.05e-3);
    CHECK(std::abs(s.error[3]) < ss + 2e-6);
  }

  // Other axes stay at their exact-model floor.
  double cross = 0.0;
  for (const SimStep& s : trace.steps) {
    cross = std::max(cross, std::abs(s.error[0]));
    cross = std::max(cross, std::abs(s.error[2]));
  }
  CHECK(cross < 1e-6);
}

TEST_CASE("tracking errors beyond 3 mm shut the machine down within one period") {
  const MachineParams m = reference_machine();
  const Plan plan = reference_plan();

  SUBCASE("an injected 5 mm offset trips immediately") {
    SimConfig config;
    config.offset_axis = 2;
    config.offset_value = 0.005;
    const SimTrace trace = run_sim(plan, m, config);
    REQUIRE(trace.shutdown);
    CHECK(trace.shutdown_time <= 1.0 / 1500.0);
    CHECK(trace.steps.size() == 1);
    CHECK(std::abs(trace.steps.back().error[2]) >= m.error_shutdown);
    CHECK(trace.steps.back().u.cwiseAbs().maxCoeff() == 0.0);  // drives off
  }

  SUBCASE("a violent disturbance trips mid-run, trace preserved") {
    SimConfig config;
    config.disturbance.axis = 4;
    config.disturbance.force = 60000.0;  // far beyond the actuator limit
    config.disturbance.start = 0.05;
    const SimTrace trace = run_sim(plan, m, config);
    REQUIRE(trace.shutdown);
    CHECK(trace.shutdown_time > config.disturbance.start);
    CHECK(std::abs(trace.steps.back().error[4]) > m.error_shutdown);
    // Saturation invariant holds on every recorded cycle.
    for (const SimStep& s : trace.steps)
      CHECK(s.u.cwiseAbs().maxCoeff() <= 1.0);
    // The violation was detected within one period of first exceeding 3 mm.
    for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i)
      CHECK(std::abs(trace.steps[i].error[4]) <= m.error_shutdown);
  }

  SUBCASE("wrist errors do not trip the prismatic shutdown rule") {
    SimConfig config;
    config.offset_axis = 0;
    config.offset_value = 0.1;  // rad, large but not a prismatic error
    const SimTrace trace = run_sim(plan, m, config);
    CHECK(!trace.shutdown);
  }
}

TEST_CASE("the filtered-velocity loop stays stable and close to truth") {
  const MachineParams m = reference_machine();
  const Plan plan = reference_plan();

  SimConfig config;
  config.use_velocity_filter = true;
  const SimTrace trace = run_sim(plan, m, config);
  CHECK(!trace.shutdown);

  double e_max = 0.0, est_err = 0.0;
  for (const SimStep& s : trace.steps) {
    e_max = std::max(e_max, s.error.cwiseAbs().maxCoeff());
    est_err = std::max(est_err, (s.qd_est - s.qd_des).cwiseAbs().maxCoeff());
  }
  CHECK(e_max < 1e-3);    // filter lag costs accuracy but not stability
  CHECK(est_err < 0.05);  // ~ |qdd| * filter time constant
  for (const SimStep& s : trace.steps)
    CHECK(s.u.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("simulation traces are deterministic apart from timing") {
  const MachineParams m = reference_machine();
  const Plan plan = reference_plan();
  SimConfig config;
  config.disturbance.axis = 2;
  config.disturbance.force = 40.0;
  config.disturbance.start = 0.2;

  const SimTrace a = run_sim(plan, m, config);
  const SimTrace b = run_sim(plan, m, config);
  REQUIRE(a.steps.size() == b.steps.size());
  CHECK(a.shutdown == b.shutdown);
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].t == b.steps[i].t);
    CHECK((a.steps[i].q_act - b.steps[i].q_act).norm() == 0.0);
    CHECK((a.steps[i].qd_est - b.steps[i].qd_est).norm() == 0.0);
    CHECK((a.steps[i].error - b.steps[i].error).norm() == 0.0);
    CHECK((a.steps[i].u - b.steps[i].u).norm() == 0.0);
  }
}

TEST_CASE("simulation input validation") {
  const MachineParams m = reference_machine();
  const Plan plan = reference_plan();

  CHECK_THROWS_AS(run_sim(Plan{}, m), Error);

  SimConfig bad;
  bad.sensing_rate = 1000.0;  // below the control rate
  CHECK_THROWS_AS(run_sim(plan, m, bad), Error);

  bad = SimConfig{};
  bad.sensing_rate = 4000.0;  // not an integer multiple of 1500
  CHECK_THROWS_AS(run_sim(plan, m, bad), Error);

  bad = SimConfig{};
  bad.velocity_cutoff = 5000.0;  // beyond Nyquist
  CHECK_THROWS_AS(run_sim(plan, m, bad), Error);

  bad = SimConfig{};
  bad.disturbance.axis = 5;
  CHECK_THROWS_AS(run_sim(plan, m, bad), Error);

  bad = SimConfig{};
  bad.duration = -1.0;
  CHECK_THROWS_AS(run_sim(plan, m, bad), Error);
}

TEST_CASE("cycle compute times are recorded") {
  const MachineParams m = reference_machine();
  Plan plan = plan_linear({reference_tour()[0], reference_tour()[1]}, m);
  const SimTrace trace = run_sim(plan, m);
  double total = 0.0;
  for (const SimStep& s : trace.steps) {
    CHECK(s.cycle_seconds >= 0.0);
    total += s.cycle_seconds;
  }
  CHECK(total > 0.0);  // the clock actually ticks over a whole run
}

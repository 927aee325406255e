#pragma once

#include <string>

#include "hpkm/sim.hpp"
#include "hpkm/trajectory.hpp"

namespace hpkm {

// Plan CSV layout (one row per sample):
//   t, alpha, beta, x, y, z,
//   alpha_dot, beta_dot, x_dot, y_dot, z_dot,
//   a_alpha, a_beta, a_x, a_y, a_z,
//   theta1, theta2, rho1, rho2, rho3,
//   theta1_dot..rho3_dot, theta1_ddot..rho3_ddot
// Values are written with round-trip precision; read_plan_csv reproduces the
// samples bit for bit. Segment metadata is carried in '#' header comments.
void write_plan_csv(const Plan& plan, const std::string& path);
Plan read_plan_csv(const std::string& path);

std::string plan_csv_header();

// Sim trace CSV layout:
//   t, theta1_des..rho3_des, theta1_act..rho3_act,
//   theta1_dot_des..rho3_dot_des, theta1_dot_est..rho3_dot_est,
//   err_theta1..err_rho3, u_theta1..u_rho3, shutdown, cycle_seconds
void write_trace_csv(const SimTrace& trace, const std::string& path);

std::string trace_csv_header();

}  // namespace hpkm

#include "hpkm/params.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "hpkm/translation.hpp"
#include "hpkm/wrist.hpp"

namespace hpkm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& value, int line) {
  const std::string v = trim(value);
  if (v.empty()) raise(Errc::config_parse, "missing value on line " + std::to_string(line), line);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size())
    raise(Errc::config_parse, "bad number '" + v + "' on line " + std::to_string(line), line);
  return x;
}

void check_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v))
    raise(Errc::invalid_argument, std::string(field) + " must be positive");
}

}  // namespace

void MachineParams::validate() const {
  check_positive(l1, "l1");
  check_positive(l2, "l2");
  check_positive(l3, "l3");
  // The boundary value 72 mm is allowed: the reference tours and the worked
  // examples all run with the tool at exactly that length.
  if (!(tool_length >= 0.072))
    raise(Errc::invalid_argument,
          "tool_length must exceed 0.072 m, got " + std::to_string(tool_length));
  if (!std::isfinite(rho_min) || !std::isfinite(rho_max) || !(rho_min < rho_max))
    raise(Errc::invalid_argument, "rho_min must be below rho_max");
  if (!(tilt_limit > 0.0) || !(tilt_limit < k_pi / 2.0))
    raise(Errc::invalid_argument, "tilt_limit must lie in (0, 90) degrees");
  check_positive(k_vt, "k_vt");
  check_positive(k_vr, "k_vr");
  check_positive(a_t_max, "a_t_max");
  check_positive(a_r_max, "a_r_max");
  check_positive(mass, "mass");
  check_positive(inertia, "inertia");
  if (gains.kp < 0.0 || gains.kd < 0.0 || gains.ki < 0.0 || gains.omega < 0.0)
    raise(Errc::invalid_argument, "gains must be nonnegative");
  if (!(safety_speed_ratio > 0.0) || safety_speed_ratio > 1.0)
    raise(Errc::invalid_argument, "safety_speed_ratio must lie in (0, 1]");
  check_positive(error_shutdown, "error_shutdown");
}

MachineParams parse_config(const std::string& text) {
  MachineParams p;
  const std::map<std::string, double MachineParams::*> scalar_keys = {
      {"l1", &MachineParams::l1},
      {"l2", &MachineParams::l2},
      {"l3", &MachineParams::l3},
      {"tool_length", &MachineParams::tool_length},
      {"rho_min", &MachineParams::rho_min},
      {"rho_max", &MachineParams::rho_max},
      {"k_vt", &MachineParams::k_vt},
      {"k_vr", &MachineParams::k_vr},
      {"a_t_max", &MachineParams::a_t_max},
      {"a_r_max", &MachineParams::a_r_max},
      {"mass", &MachineParams::mass},
      {"inertia", &MachineParams::inertia},
      {"safety_speed_ratio", &MachineParams::safety_speed_ratio},
      {"error_shutdown", &MachineParams::error_shutdown},
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      raise(Errc::config_parse, "expected 'key = value' on line " + std::to_string(line), line);
    const std::string key = trim(stripped.substr(0, eq));
    const double value = parse_number(stripped.substr(eq + 1), line);

    if (auto it = scalar_keys.find(key); it != scalar_keys.end()) {
      p.*(it->second) = value;
    } else if (key == "tilt_limit_deg") {
      p.tilt_limit = value * k_pi / 180.0;
    } else if (key == "kp") {
      p.gains.kp = value;
    } else if (key == "kd") {
      p.gains.kd = value;
    } else if (key == "ki") {
      p.gains.ki = value;
    } else {
      raise(Errc::config_parse,
            "unknown key '" + key + "' on line " + std::to_string(line), line);
    }
  }
  p.validate();
  return p;
}

MachineParams load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Vec3 wrist_center_of(const Pose& pose, const MachineParams& params) {
  return pose.tip - params.tool_length * tool_direction(pose.alpha, pose.beta);
}

WorkspaceCheck check_workspace(const Pose& pose, const MachineParams& params,
                               const WorkingMode& mode) {
  if (std::abs(pose.alpha) > params.tilt_limit ||
      std::abs(pose.beta) > params.tilt_limit)
    return {false, WorkspaceReason::tilt, -1};

  const Vec3 center = wrist_center_of(pose, params);
  Vec3 rho;
  try {
    rho = ik_translation(center, params, mode);
  } catch (const Error& e) {
    return {false, WorkspaceReason::unreachable, e.index()};
  }
  for (int leg = 0; leg < 3; ++leg) {
    if (rho[leg] < params.rho_min || rho[leg] > params.rho_max)
      return {false, WorkspaceReason::joint_limit, leg};
  }
  return {true, WorkspaceReason::ok, -1};
}

const char* workspace_reason_name(WorkspaceReason reason) {
  switch (reason) {
    case WorkspaceReason::ok: return "ok";
    case WorkspaceReason::tilt: return "tilt";
    case WorkspaceReason::unreachable: return "unreachable";
    case WorkspaceReason::joint_limit: return "joint_limit";
  }
  return "unknown";
}

}  // namespace hpkm

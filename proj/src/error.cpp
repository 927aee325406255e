#include "hpkm/error.hpp"

namespace hpkm {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ok: return "ok";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::config_parse: return "config_parse";
    case Errc::no_real_solution: return "no_real_solution";
    case Errc::singular: return "singular";
    case Errc::joint_limit: return "joint_limit";
    case Errc::tilt_limit: return "tilt_limit";
    case Errc::workspace_exit: return "workspace_exit";
    case Errc::gcode_unsupported: return "gcode_unsupported";
    case Errc::gcode_malformed: return "gcode_malformed";
    case Errc::io: return "io";
    case Errc::shutdown: return "shutdown";
  }
  return "unknown";
}

}  // namespace hpkm

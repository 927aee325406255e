#pragma once

#include <stdexcept>
#include <string>

namespace hpkm {

enum class Errc {
  ok = 0,
  invalid_argument,  // bad parameter or option value
  config_parse,      // config syntax error or unknown key
  no_real_solution,  // ik discriminant negative
  singular,          // denominator below the singularity tolerance
  joint_limit,       // prismatic extension outside [rho_min, rho_max]
  tilt_limit,        // |alpha| or |beta| beyond tilt_limit
  workspace_exit,    // planned sample leaves the workspace
  gcode_unsupported, // G/M word outside the supported subset
  gcode_malformed,   // unparseable word or malformed line
  io,                // file read/write failure
  shutdown,          // simulation tripped the error threshold
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, int index = -1)
      : std::runtime_error(what), code_(code), index_(index) {}

  Errc code() const { return code_; }
  // Leg, axis, or source line the error refers to; -1 when not applicable.
  int index() const { return index_; }

 private:
  Errc code_;
  int index_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what, int index = -1) {
  throw Error(code, what, index);
}

}  // namespace hpkm

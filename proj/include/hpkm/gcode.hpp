#pragma once

#include <string>
#include <vector>

#include "hpkm/params.hpp"
#include "hpkm/trajectory.hpp"
#include "hpkm/types.hpp"

namespace hpkm {

enum class MoveKind { rapid, feed };  // G00 / G01

// One motion block after modal resolution: full target pose in SI units and
// the modal feed (m/s) for feed moves.
struct GSegment {
  MoveKind kind = MoveKind::feed;
  Pose target;
  double feed = 0.0;
  int line = 0;  // 1-based source line
};

// Supported words: G00/G0/G01/G1, X/Y/Z (mm), A/B (deg), F (mm/min).
// Case-insensitive; '(...)' and ';' comments; X..B and F are modal and so is
// the motion mode. Unspecified coordinates stick from `initial` onwards.
// Throws Error(gcode_unsupported) for other G/M words and
// Error(gcode_malformed) for bad numbers, duplicate words, a feed move
// without a feed, or a feed above k_vt; the error index is the line number.
std::vector<GSegment> parse_gcode(const std::string& text,
                                  const MachineParams& params,
                                  const Pose& initial);

// Emits one fully-worded block per segment; parsing the result against the
// same initial pose reproduces the segments.
std::string serialize_gcode(const std::vector<GSegment>& segments);

struct PathPrimitive {
  enum class Kind { line, arc } kind = Kind::line;
  // line: start + dir * s, s in [0, length].
  Vec3 start = Vec3::Zero();
  Vec3 dir = Vec3::Zero();  // unit
  // arc: center + radius * (cos(psi) e1 + sin(psi) e2), psi in [0, sweep].
  Vec3 center = Vec3::Zero();
  Vec3 e1 = Vec3::Zero();
  Vec3 e2 = Vec3::Zero();
  double radius = 0.0;
  double sweep = 0.0;
  double length = 0.0;       // arc length for both kinds
  double cruise = 0.0;       // speed cap on this primitive (m/s)
  Vec2 tilt_start = Vec2::Zero();  // (alpha, beta) at s = 0
  Vec2 tilt_end = Vec2::Zero();    // (alpha, beta) at s = length
  Vec3 point_at(double s) const;
  Vec3 tangent_at(double s) const;
};

struct CornerBlend {
  Vec3 vertex = Vec3::Zero();
  double turn_angle = 0.0;  // interior angle phi between the segments (rad)
  double radius = 0.0;      // 0 for a full stop (reversal)
  double trim = 0.0;        // distance from the vertex to the tangent points
  double speed = 0.0;       // min(adjacent feeds, sqrt(a_t_max * radius))
  int line = 0;             // source line of the outgoing segment
};

struct BlendedPath {
  std::vector<PathPrimitive> primitives;
  std::vector<CornerBlend> corners;
  double total_length = 0.0;
};

// Inserts a tangent arc at each interior corner with turn angle phi in
// (0, pi): radius = min(radius_cap, d_max tan(phi/2)) with d_max = 25% of the
// shorter adjacent segment. Collinear same-direction segments merge; exact
// reversals become full stops. Zero-length moves are dropped. Rapid moves
// cruise at k_vt * speed_ratio.
//
// Tilt (alpha, beta) is piecewise-linear in arc length and continuous
// everywhere, but its slope steps at primitive junctions, so the planned
// tilt rates are only piecewise-continuous; tip position stays C1 in time.
BlendedPath blend_corners(const std::vector<GSegment>& segments,
                          const MachineParams& params, double radius_cap,
                          const Pose& initial, double speed_ratio = 1.0);

// Full pipeline: parse, blend, then time the path with constant-speed
// primitive interiors joined by quintic speed ramps held within a_t_max;
// starts and ends at rest. Samples are checked against the workspace and
// rescaled to the machine limits. The initial pose is params.home().
Plan plan_gcode(const std::string& text, const MachineParams& params,
                double radius_cap, const PlanOptions& opts = {});

// Same pipeline from parsed segments; `blended`, when non-null, receives the
// path geometry for reporting.
Plan plan_gcode(const std::vector<GSegment>& segments, const MachineParams& params,
                double radius_cap, const Pose& initial, const PlanOptions& opts = {},
                BlendedPath* blended = nullptr);

}  // namespace hpkm

#include "hpkm/gcode.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hpkm {

namespace {

constexpr double k_mm = 1e-3;
constexpr double k_deg = k_pi / 180.0;
constexpr double k_feed_unit = 1.0 / 60000.0;  // mm/min -> m/s
// Junction angles below this are treated as straight, above pi minus this as
// reversals; matches the tangent-continuity tolerance of the blended path.
constexpr double k_angle_tol = 1e-9;

[[noreturn]] void malformed(const std::string& what, int line) {
  raise(Errc::gcode_malformed,
        what + " (line " + std::to_string(line) + ")", line);
}

[[noreturn]] void unsupported(const std::string& what, int line) {
  raise(Errc::gcode_unsupported,
        what + " (line " + std::to_string(line) + ")", line);
}

std::string strip_comments(const std::string& raw, int line_no) {
  std::string out;
  bool in_comment = false;
  for (char ch : raw) {
    if (ch == ';' && !in_comment) break;
    if (ch == '(') {
      if (in_comment) malformed("nested comment", line_no);
      in_comment = true;
      continue;
    }
    if (ch == ')') {
      if (!in_comment) malformed("unmatched ')'", line_no);
      in_comment = false;
      continue;
    }
    if (!in_comment) out += ch;
  }
  if (in_comment) malformed("unterminated comment", line_no);
  return out;
}

// Decimal number: optional sign, digits, at most one dot, and an optional
// exponent (consumed only when complete, so "X1E2" is 100 while a bare
// trailing "e" starts the next word).
double parse_number(const std::string& text, std::size_t& i, char letter,
                    int line_no) {
  const std::size_t start = i;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  bool digits = false, dot = false;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = true;
      ++i;
    } else if (c == '.' && !dot) {
      dot = true;
      ++i;
    } else {
      break;
    }
  }
  if (!digits)
    malformed(std::string("word '") + letter + "' missing a number", line_no);
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
    std::size_t k = j;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])))
      ++k;
    if (k > j) i = k;
  }
  try {
    return std::stod(text.substr(start, i - start));
  } catch (const std::out_of_range&) {
    malformed(std::string("word '") + letter + "' value out of range", line_no);
  }
}

struct WordSet {
  bool has[5] = {false, false, false, false, false};  // X Y Z A B
  double value[5] = {0, 0, 0, 0, 0};
};

// --- blending ------------------------------------------------------------

struct Edge {
  Vec3 from = Vec3::Zero(), to = Vec3::Zero();
  Vec2 tilt_from = Vec2::Zero(), tilt_to = Vec2::Zero();
  double cruise = 0.0;
  MoveKind kind = MoveKind::feed;
  int line = 0;
  double length = 0.0;
  Vec3 dir = Vec3::Zero();
  double trim_start = 0.0, trim_end = 0.0;

  Vec2 tilt_at(double d) const {
    return tilt_from + (tilt_to - tilt_from) * (d / length);
  }
};

PathPrimitive line_primitive(const Edge& e) {
  PathPrimitive prim;
  prim.kind = PathPrimitive::Kind::line;
  prim.start = e.from + e.dir * e.trim_start;
  prim.dir = e.dir;
  prim.length = e.length - e.trim_start - e.trim_end;
  prim.cruise = e.cruise;
  prim.tilt_start = e.tilt_at(e.trim_start);
  prim.tilt_end = e.tilt_at(e.length - e.trim_end);
  return prim;
}

// --- speed profile -------------------------------------------------------

// Integral of the quintic s-curve: R(tau) = 2.5 tau^4 - 3 tau^5 + tau^6,
// R(1) = 1/2, so a ramp covers the trapezoid distance (v0+v1)/2 * T.
double quintic_integral(double tau) {
  const double t2 = tau * tau;
  return t2 * t2 * (2.5 - 3.0 * tau + t2);
}

struct Phase {
  double duration = 0.0;
  double v0 = 0.0, v1 = 0.0;  // speeds at the phase ends (equal for cruise)
  std::size_t prim = 0;
  double s_offset = 0.0;  // arc length already covered on the primitive
};

struct SpeedPlan {
  std::vector<Phase> phases;
  std::vector<double> starts;  // prefix times
  double total = 0.0;
};

// Speed (m/s), tangential acceleration (m/s^2) and covered distance at local
// phase time t.
void eval_phase(const Phase& ph, double t, double& v, double& a, double& s) {
  if (ph.v0 == ph.v1) {
    v = ph.v0;
    a = 0.0;
    s = ph.v0 * t;
    return;
  }
  const QuinticEval q = quintic(t, ph.duration);
  const double dv = ph.v1 - ph.v0;
  v = ph.v0 + dv * q.r;
  a = dv * q.rd;
  s = ph.v0 * t + dv * ph.duration * quintic_integral(t / ph.duration);
}

}  // namespace

Vec3 PathPrimitive::point_at(double s) const {
  if (kind == Kind::line) return start + dir * s;
  const double psi = s / radius;
  return center + radius * (std::cos(psi) * e1 + std::sin(psi) * e2);
}

Vec3 PathPrimitive::tangent_at(double s) const {
  if (kind == Kind::line) return dir;
  const double psi = s / radius;
  return -std::sin(psi) * e1 + std::cos(psi) * e2;
}

std::vector<GSegment> parse_gcode(const std::string& text,
                                  const MachineParams& params,
                                  const Pose& initial) {
  std::vector<GSegment> out;
  Pose current = initial;
  double feed = 0.0;
  bool feed_set = false;
  int mode = -1;  // -1 unset, 0 rapid, 1 feed

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string line = strip_comments(raw, line_no);

    WordSet words;
    bool seen[26] = {};
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (!std::isalpha(static_cast<unsigned char>(c)))
        malformed(std::string("expected a word letter, got '") + c + "'",
                  line_no);
      const char letter =
          static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      ++i;
      const double value = parse_number(line, i, letter, line_no);
      if (seen[letter - 'A'])
        malformed(std::string("duplicate word '") + letter + "'", line_no);
      seen[letter - 'A'] = true;

      switch (letter) {
        case 'G': {
          if (value == 0.0) {
            mode = 0;
          } else if (value == 1.0) {
            mode = 1;
          } else {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "G%g", value);
            unsupported(std::string("unsupported code ") + buf, line_no);
          }
          break;
        }
        case 'M': {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "M%g", value);
          unsupported(std::string("unsupported code ") + buf, line_no);
        }
        case 'X':
        case 'Y':
        case 'Z': {
          const int axis = letter - 'X';
          words.has[axis] = true;
          words.value[axis] = value * k_mm;
          break;
        }
        case 'A':
        case 'B': {
          const int axis = 3 + (letter - 'A');
          words.has[axis] = true;
          words.value[axis] = value * k_deg;
          break;
        }
        case 'F': {
          if (value <= 0.0) malformed("feed must be positive", line_no);
          const double si = value * k_feed_unit;
          if (si > params.k_vt)
            malformed("feed exceeds the machine velocity cap", line_no);
          feed = si;
          feed_set = true;
          break;
        }
        default:
          unsupported(std::string("unsupported word '") + letter + "'",
                      line_no);
      }
    }

    const bool any_coord =
        words.has[0] || words.has[1] || words.has[2] || words.has[3] ||
        words.has[4];
    if (!any_coord) continue;
    if (mode < 0)
      malformed("coordinate word before any G00/G01 motion mode", line_no);
    if (mode == 1 && !feed_set) malformed("feed move without a feed rate", line_no);

    GSegment seg;
    seg.kind = mode == 0 ? MoveKind::rapid : MoveKind::feed;
    seg.target = current;
    if (words.has[0]) seg.target.tip.x() = words.value[0];
    if (words.has[1]) seg.target.tip.y() = words.value[1];
    if (words.has[2]) seg.target.tip.z() = words.value[2];
    if (words.has[3]) seg.target.alpha = words.value[3];
    if (words.has[4]) seg.target.beta = words.value[4];
    seg.feed = mode == 1 ? feed : 0.0;
    seg.line = line_no;
    out.push_back(seg);
    current = seg.target;
  }
  return out;
}

std::string serialize_gcode(const std::vector<GSegment>& segments) {
  std::string out;
  char buf[64];
  for (const GSegment& seg : segments) {
    out += seg.kind == MoveKind::rapid ? "G00" : "G01";
    const char axis[5] = {'X', 'Y', 'Z', 'A', 'B'};
    const double value[5] = {seg.target.tip.x() / k_mm, seg.target.tip.y() / k_mm,
                             seg.target.tip.z() / k_mm, seg.target.alpha / k_deg,
                             seg.target.beta / k_deg};
    for (int w = 0; w < 5; ++w) {
      std::snprintf(buf, sizeof(buf), " %c%.17g", axis[w], value[w]);
      out += buf;
    }
    if (seg.kind == MoveKind::feed) {
      std::snprintf(buf, sizeof(buf), " F%.17g", seg.feed / k_feed_unit);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

BlendedPath blend_corners(const std::vector<GSegment>& segments,
                          const MachineParams& params, double radius_cap,
                          const Pose& initial, double speed_ratio) {
  if (!(radius_cap > 0.0))
    raise(Errc::invalid_argument, "corner radius cap must be positive");

  // Collect nonzero-length edges with their cruise speeds.
  std::vector<Edge> edges;
  Pose prev = initial;
  for (const GSegment& seg : segments) {
    Edge e;
    e.from = prev.tip;
    e.to = seg.target.tip;
    e.length = (e.to - e.from).norm();
    if (e.length < 1e-12) {
      if (std::abs(seg.target.alpha - prev.alpha) > 1e-12 ||
          std::abs(seg.target.beta - prev.beta) > 1e-12)
        unsupported("pure-rotation block (zero tool motion)", seg.line);
      prev = seg.target;
      continue;
    }
    e.dir = (e.to - e.from) / e.length;
    e.tilt_from = Vec2(prev.alpha, prev.beta);
    e.tilt_to = Vec2(seg.target.alpha, seg.target.beta);
    e.cruise = seg.kind == MoveKind::rapid ? params.k_vt * speed_ratio
                                           : seg.feed;
    e.kind = seg.kind;
    e.line = seg.line;
    edges.push_back(e);
    prev = seg.target;
  }

  // Merge collinear same-speed constant-orientation neighbors.
  std::vector<Edge> merged;
  for (const Edge& e : edges) {
    if (!merged.empty()) {
      Edge& last = merged.back();
      const double angle =
          std::atan2(last.dir.cross(e.dir).norm(), last.dir.dot(e.dir));
      const bool same_tilt = (last.tilt_from - last.tilt_to).norm() == 0.0 &&
                             (e.tilt_from - e.tilt_to).norm() == 0.0 &&
                             (last.tilt_to - e.tilt_from).norm() == 0.0;
      if (angle < k_angle_tol && last.cruise == e.cruise &&
          last.kind == e.kind && same_tilt) {
        last.to = e.to;
        last.length = (last.to - last.from).norm();
        last.tilt_to = e.tilt_to;
        continue;
      }
    }
    merged.push_back(e);
  }

  BlendedPath path;
  if (merged.empty()) return path;

  // Corner pass: decide trims and arcs per interior junction.
  struct Junction {
    enum class Kind { smooth, stop, arc } kind = Kind::smooth;
    CornerBlend blend;
    Vec3 center = Vec3::Zero(), e1 = Vec3::Zero(), e2 = Vec3::Zero();
    double sweep = 0.0;
  };
  std::vector<Junction> junctions(merged.size() - 1);
  for (std::size_t j = 0; j + 1 < merged.size(); ++j) {
    Edge& in = merged[j];
    Edge& outgoing = merged[j + 1];
    Junction& junc = junctions[j];
    const double deflect =
        std::atan2(in.dir.cross(outgoing.dir).norm(), in.dir.dot(outgoing.dir));
    junc.blend.vertex = in.to;
    junc.blend.turn_angle = k_pi - deflect;  // interior angle between segments
    junc.blend.line = outgoing.line;
    if (deflect < k_angle_tol) {
      junc.kind = Junction::Kind::smooth;
      continue;
    }
    if (deflect > k_pi - k_angle_tol) {
      junc.kind = Junction::Kind::stop;  // reversal: come to rest
      continue;
    }
    junc.kind = Junction::Kind::arc;
    const double phi = junc.blend.turn_angle;
    const double d_max = 0.25 * std::min(in.length, outgoing.length);
    const double radius = std::min(radius_cap, d_max * std::tan(phi / 2.0));
    const double trim = radius / std::tan(phi / 2.0);
    junc.blend.radius = radius;
    junc.blend.trim = trim;
    junc.blend.speed = std::min({in.cruise, outgoing.cruise,
                                 std::sqrt(params.a_t_max * radius)});
    in.trim_end = trim;
    outgoing.trim_start = trim;

    const Vec3 bisector = (outgoing.dir - in.dir).normalized();
    junc.center = in.to + bisector * (radius / std::sin(phi / 2.0));
    const Vec3 entry = in.to - in.dir * trim;
    junc.e1 = (entry - junc.center) / radius;
    junc.e2 = in.dir;
    junc.sweep = deflect;
  }

  // Emit alternating line and arc primitives.
  for (std::size_t j = 0; j < merged.size(); ++j) {
    path.primitives.push_back(line_primitive(merged[j]));
    if (j + 1 >= merged.size()) break;
    const Junction& junc = junctions[j];
    if (junc.kind == Junction::Kind::arc) {
      PathPrimitive arc;
      arc.kind = PathPrimitive::Kind::arc;
      arc.center = junc.center;
      arc.e1 = junc.e1;
      arc.e2 = junc.e2;
      arc.radius = junc.blend.radius;
      arc.sweep = junc.sweep;
      arc.length = junc.blend.radius * junc.sweep;
      arc.cruise = junc.blend.speed;
      arc.tilt_start = merged[j].tilt_at(merged[j].length - merged[j].trim_end);
      arc.tilt_end = merged[j + 1].tilt_at(merged[j + 1].trim_start);
      path.primitives.push_back(arc);
    }
    if (junc.kind != Junction::Kind::smooth)
      path.corners.push_back(junc.blend);
  }
  for (const PathPrimitive& prim : path.primitives)
    path.total_length += prim.length;
  return path;
}

Plan plan_gcode(const std::string& text, const MachineParams& params,
                double radius_cap, const PlanOptions& opts) {
  return plan_gcode(parse_gcode(text, params, params.home()), params,
                    radius_cap, params.home(), opts);
}

Plan plan_gcode(const std::vector<GSegment>& segments,
                const MachineParams& params, double radius_cap,
                const Pose& initial, const PlanOptions& opts,
                BlendedPath* blended) {
  if (!(opts.speed_ratio > 0.0) || opts.speed_ratio > 1.0)
    raise(Errc::invalid_argument, "speed_ratio must lie in (0, 1]");
  if (!(opts.sample_rate > 0.0))
    raise(Errc::invalid_argument, "sample_rate must be positive");

  const BlendedPath path =
      blend_corners(segments, params, radius_cap, initial, opts.speed_ratio);
  if (blended) *blended = path;
  Plan plan;
  if (path.primitives.empty()) return plan;

  const std::size_t n = path.primitives.size();

  // Junction speed targets: rest at both path ends, reversal stops at zero,
  // otherwise the smaller neighboring cruise cap.
  std::vector<double> node(n + 1, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const PathPrimitive& a = path.primitives[j - 1];
    const PathPrimitive& b = path.primitives[j];
    const bool reversal =
        a.tangent_at(a.length).dot(b.tangent_at(0.0)) < -(1.0 - 1e-12);
    node[j] = reversal ? 0.0 : std::min(a.cruise, b.cruise);
  }

  // Reachability passes under the effective acceleration a_t_max / 1.875 (the
  // quintic ramp's peak slope then just touches a_t_max).
  const double accel = params.a_t_max / 1.875;
  for (std::size_t j = 0; j < n; ++j)
    node[j + 1] = std::min(
        node[j + 1],
        std::sqrt(node[j] * node[j] + 2.0 * accel * path.primitives[j].length));
  for (std::size_t j = n; j-- > 0;)
    node[j] = std::min(node[j],
                       std::sqrt(node[j + 1] * node[j + 1] +
                                 2.0 * accel * path.primitives[j].length));

  // Per-primitive ramp/cruise/ramp phases.
  SpeedPlan speed;
  for (std::size_t j = 0; j < n; ++j) {
    const PathPrimitive& prim = path.primitives[j];
    const double v_in = node[j], v_out = node[j + 1];
    // Arcs hold the entry/exit level instead of bulging up to the corner
    // speed, keeping tangential acceleration off the curve when possible.
    double peak = prim.kind == PathPrimitive::Kind::arc
                      ? std::max(v_in, v_out)
                      : prim.cruise;
    peak = std::min(
        peak, std::sqrt((v_in * v_in + v_out * v_out) / 2.0 +
                        accel * prim.length));
    const double d_up = std::max(0.0, (peak * peak - v_in * v_in) / (2.0 * accel));
    const double d_down =
        std::max(0.0, (peak * peak - v_out * v_out) / (2.0 * accel));
    const double d_cruise = std::max(0.0, prim.length - d_up - d_down);
    double s0 = 0.0;
    if (peak > v_in) {
      speed.phases.push_back(
          {1.875 * (peak - v_in) / params.a_t_max, v_in, peak, j, s0});
      s0 += d_up;
    }
    if (d_cruise > 0.0 && peak > 0.0) {
      speed.phases.push_back({d_cruise / peak, peak, peak, j, s0});
      s0 += d_cruise;
    }
    if (peak > v_out) {
      speed.phases.push_back(
          {1.875 * (peak - v_out) / params.a_t_max, peak, v_out, j, s0});
    }
  }
  speed.starts.resize(speed.phases.size());
  for (std::size_t k = 0; k < speed.phases.size(); ++k) {
    speed.starts[k] = speed.total;
    speed.total += speed.phases[k].duration;
  }
  if (speed.phases.empty()) return plan;

  // Uniform-rate sampler with exact time scaling, fed to the limit rescaler.
  const double tf_base = speed.total;
  auto sampler = [&](double T) {
    const double scale = T / tf_base;
    std::vector<TrajectorySample> samples;
    for (double t : sample_grid(T, opts.sample_rate)) {
      const double tb = std::clamp(t / scale, 0.0, tf_base);
      const std::size_t k =
          std::upper_bound(speed.starts.begin(), speed.starts.end(), tb) -
          speed.starts.begin() - 1;
      const Phase& ph = speed.phases[k];
      const double local = std::clamp(tb - speed.starts[k], 0.0, ph.duration);
      double v, a, s;
      eval_phase(ph, local, v, a, s);
      v /= scale;
      a /= scale * scale;
      const PathPrimitive& prim = path.primitives[ph.prim];
      const double arc_s = std::clamp(ph.s_offset + s, 0.0, prim.length);

      Pose pose;
      const Vec2 slope = prim.length > 0.0
                             ? Vec2((prim.tilt_end - prim.tilt_start) / prim.length)
                             : Vec2::Zero();
      const Vec2 tilt = prim.tilt_start + slope * arc_s;
      pose.alpha = tilt[0];
      pose.beta = tilt[1];
      pose.tip = prim.point_at(arc_s);
      const Vec3 tangent = prim.tangent_at(arc_s);

      Twist vel, acc;
      vel << slope[0] * v, slope[1] * v, v * tangent;
      Vec3 a_trans = a * tangent;
      if (prim.kind == PathPrimitive::Kind::arc)
        a_trans += (v * v / prim.radius) * ((prim.center - pose.tip) / prim.radius);
      acc << slope[0] * a, slope[1] * a, a_trans;
      samples.push_back(project_sample(t, pose, vel, acc, params, opts));
    }
    return samples;
  };

  double tf = tf_base;
  const double safety_scale = opts.safety_cap ? params.safety_speed_ratio : 1.0;
  const double multiplier =
      rescale_to_limits(sampler, tf, params, safety_scale, plan.samples);

  SegmentInfo info;
  info.label = "gcode";
  info.tf_initial = tf_base;
  info.tf_final = tf;
  info.multiplier = multiplier;
  plan.segments.push_back(info);
  return plan;
}

}  // namespace hpkm

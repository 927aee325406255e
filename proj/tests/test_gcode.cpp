#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "hpkm/error.hpp"
#include "hpkm/gcode.hpp"
#include "hpkm/trajectory.hpp"

using namespace hpkm;
using namespace hpkm::testing;

namespace {

// Code, message and 1-based source line of a parse/plan failure.
template <typename Fn>
Error capture(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an Error");
  return Error(Errc::ok, "");
}

double tip_speed(const TrajectorySample& s) {
  return s.vel.tail<3>().norm();
}

}  // namespace

TEST_CASE("parser handles words, units and modality") {
  const MachineParams m;
  const Pose home = m.home();

  SUBCASE("feed move with full words") {
    const auto segs = parse_gcode("G01 X10 Y0 Z-72 F600", m, home);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].kind == MoveKind::feed);
    CHECK(segs[0].target.tip.x() == doctest::Approx(0.010).epsilon(1e-15));
    CHECK(segs[0].target.tip.y() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(segs[0].target.tip.z() == doctest::Approx(-0.072).epsilon(1e-15));
    CHECK(segs[0].feed == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(segs[0].line == 1);
    CHECK(segs[0].target.alpha == 0.0);  // sticky from home
    CHECK(segs[0].target.beta == 0.0);
  }

  SUBCASE("modal motion mode and sticky coordinates") {
    const auto segs = parse_gcode("G1 X5 F600\nY5", m, home);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].target.tip.x() == doctest::Approx(0.005));
    CHECK(segs[0].target.tip.y() == 0.0);
    CHECK(segs[1].kind == MoveKind::feed);
    CHECK(segs[1].target.tip.x() == doctest::Approx(0.005));  // inherited X
    CHECK(segs[1].target.tip.y() == doctest::Approx(0.005));
    CHECK(segs[1].feed == doctest::Approx(0.01));  // modal F
    CHECK(segs[1].line == 2);
  }

  SUBCASE("rapid moves carry no feed") {
    const auto segs = parse_gcode("G0 X1 Y2\ng0 z-50", m, home);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].kind == MoveKind::rapid);
    CHECK(segs[0].feed == 0.0);
    CHECK(segs[1].target.tip.z() == doctest::Approx(-0.050));
    CHECK(segs[1].target.tip.x() == doctest::Approx(0.001));  // sticky
  }

  SUBCASE("orientation words are degrees") {
    const auto segs = parse_gcode("G1 A20 B-10 X1 F600", m, home);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].target.alpha == doctest::Approx(deg(20.0)).epsilon(1e-15));
    CHECK(segs[0].target.beta == doctest::Approx(deg(-10.0)).epsilon(1e-15));
  }

  SUBCASE("comments and blank lines are ignored") {
    const auto segs = parse_gcode(
        "( header )\n"
        "\n"
        "G1 (inline note) X3 F600 ; trailing\n"
        "; full-line comment\n",
        m, home);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].target.tip.x() == doctest::Approx(0.003));
    CHECK(segs[0].line == 3);
  }

  SUBCASE("mode and feed lines emit no segment by themselves") {
    CHECK(parse_gcode("G1 F600\nG0\nF1200", m, home).empty());
  }

  SUBCASE("empty text parses to no segments") {
    CHECK(parse_gcode("", m, home).empty());
  }
}

TEST_CASE("parser rejects unsupported and malformed input with line numbers") {
  const MachineParams m;
  const Pose home = m.home();

  SUBCASE("G02 is unsupported") {
    const Error e =
        capture([&] { parse_gcode("G01 X1 F600\nG02 X1 Y1", m, home); });
    CHECK(e.code() == Errc::gcode_unsupported);
    CHECK(e.index() == 2);
  }

  SUBCASE("M words are unsupported") {
    const Error e = capture([&] { parse_gcode("M30", m, home); });
    CHECK(e.code() == Errc::gcode_unsupported);
    CHECK(e.index() == 1);
  }

  SUBCASE("unknown word letter is unsupported") {
    const Error e = capture([&] { parse_gcode("G1 Q5 F600", m, home); });
    CHECK(e.code() == Errc::gcode_unsupported);
  }

  SUBCASE("coordinate before any motion mode") {
    const Error e = capture([&] { parse_gcode("X10", m, home); });
    CHECK(e.code() == Errc::gcode_malformed);
    CHECK(e.index() == 1);
  }

  SUBCASE("feed move without a feed rate") {
    const Error e = capture([&] { parse_gcode("G1 X10", m, home); });
    CHECK(e.code() == Errc::gcode_malformed);
  }

  SUBCASE("feed must be positive and within the machine cap") {
    CHECK(capture([&] { parse_gcode("G1 X1 F0", m, home); }).code() ==
          Errc::gcode_malformed);
    CHECK(capture([&] { parse_gcode("G1 X1 F-600", m, home); }).code() ==
          Errc::gcode_malformed);
    // k_vt = 1.2 m/s = 72000 mm/min.
    CHECK(capture([&] { parse_gcode("G1 X1 F72001", m, home); }).code() ==
          Errc::gcode_malformed);
    CHECK(parse_gcode("G1 X1 F72000", m, home).size() == 1);
  }

  SUBCASE("word without a number") {
    const Error e = capture([&] { parse_gcode("G1 X F600", m, home); });
    CHECK(e.code() == Errc::gcode_malformed);
  }

  SUBCASE("duplicate word on one line") {
    const Error e = capture([&] { parse_gcode("G1 X1 X2 F600", m, home); });
    CHECK(e.code() == Errc::gcode_malformed);
  }

  SUBCASE("stray characters") {
    CHECK(capture([&] { parse_gcode("G1 X1 F600 =", m, home); }).code() ==
          Errc::gcode_malformed);
  }

  SUBCASE("unbalanced comments") {
    CHECK(capture([&] { parse_gcode("G1 (open X1", m, home); }).code() ==
          Errc::gcode_malformed);
    CHECK(capture([&] { parse_gcode("G1 ) X1", m, home); }).code() ==
          Errc::gcode_malformed);
  }

  SUBCASE("value out of double range") {
    const std::string huge(400, '9');
    CHECK(capture([&] { parse_gcode("G1 X" + huge + " F600", m, home); })
              .code() == Errc::gcode_malformed);
  }
}

TEST_CASE("serializing parsed segments and re-parsing yields identical segments") {
  const MachineParams m;
  const Pose home = m.home();
  const std::string text =
      "G0 X20 Y20 Z-70\n"
      "G1 X80.5 F6000\n"
      "Y80.25 A10 B-5 F1234.5\n"
      "G0 X0 Y0 Z-90 A0 B0\n";
  const auto segs = parse_gcode(text, m, home);
  REQUIRE(segs.size() == 4);
  const auto again = parse_gcode(serialize_gcode(segs), m, home);
  REQUIRE(again.size() == segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(again[i].kind == segs[i].kind);
    CHECK(again[i].feed == segs[i].feed);  // exact
    CHECK((again[i].target.vector() - segs[i].target.vector()).norm() == 0.0);
    CHECK(again[i].line == static_cast<int>(i) + 1);
  }
}

TEST_CASE("right-angle corner blends into the documented arc") {
  MachineParams m;
  // Two 100 mm legs meeting at a right angle, feed 30000 mm/min = 0.5 m/s.
  std::vector<GSegment> segs;
  Pose start;  // tilt 0, tip at the origin of the fixture frame
  start.tip = Vec3(0.0, 0.0, 0.0);
  GSegment a;
  a.kind = MoveKind::feed;
  a.target.tip = Vec3(0.100, 0.0, 0.0);
  a.feed = 0.5;
  a.line = 1;
  GSegment b = a;
  b.target.tip = Vec3(0.100, 0.100, 0.0);
  b.line = 2;
  segs = {a, b};

  const BlendedPath path = blend_corners(segs, m, 0.010, start);
  REQUIRE(path.primitives.size() == 3);
  REQUIRE(path.corners.size() == 1);

  const CornerBlend& c = path.corners[0];
  CHECK(c.radius == doctest::Approx(0.010).epsilon(1e-12));  // cap binds: 25 mm tan45 > 10 mm
  CHECK(c.trim == doctest::Approx(0.010).epsilon(1e-12));    // r / tan(phi/2), phi = 90 deg
  CHECK(c.turn_angle == doctest::Approx(k_pi / 2).epsilon(1e-12));
  CHECK(c.speed == doctest::Approx(std::sqrt(13.0 * 0.010)).epsilon(1e-12));
  CHECK(c.speed == doctest::Approx(0.3606).epsilon(1e-3));
  CHECK(c.vertex.isApprox(Vec3(0.100, 0.0, 0.0), 1e-15));

  const PathPrimitive& arc = path.primitives[1];
  CHECK(arc.kind == PathPrimitive::Kind::arc);
  CHECK(arc.center.isApprox(Vec3(0.090, 0.010, 0.0), 1e-12));
  CHECK(arc.sweep == doctest::Approx(k_pi / 2).epsilon(1e-12));
  CHECK(arc.length == doctest::Approx(0.010 * k_pi / 2).epsilon(1e-12));
  // Arc endpoints sit on the original segments, trim away from the vertex.
  CHECK(arc.point_at(0.0).isApprox(Vec3(0.090, 0.0, 0.0), 1e-12));
  CHECK(arc.point_at(arc.length).isApprox(Vec3(0.100, 0.010, 0.0), 1e-12));
  // Trimmed legs.
  CHECK(path.primitives[0].length == doctest::Approx(0.090).epsilon(1e-12));
  CHECK(path.primitives[2].length == doctest::Approx(0.090).epsilon(1e-12));
  CHECK(path.total_length ==
        doctest::Approx(0.180 + 0.010 * k_pi / 2).epsilon(1e-12));
}

TEST_CASE("blended paths are position- and tangent-continuous") {
  const MachineParams m;
  const Pose home = m.home();
  // Irregular polyline with tilt changes and a rapid leg.
  const std::string text =
      "G0 X20 Y20 Z-70\n"
      "G1 X90 A5 F9000\n"
      "X120 Y60 B-4 F24000\n"
      "X40 Y110 A0 B0 F12000\n"
      "G0 X20 Y20\n";
  const BlendedPath path =
      blend_corners(parse_gcode(text, m, home), m, 0.008, home);
  REQUIRE(path.primitives.size() >= 5);
  for (std::size_t i = 0; i + 1 < path.primitives.size(); ++i) {
    const PathPrimitive& p = path.primitives[i];
    const PathPrimitive& q = path.primitives[i + 1];
    CHECK((p.point_at(p.length) - q.point_at(0.0)).norm() <= 1e-12);
    const Vec3 u = p.tangent_at(p.length);
    const Vec3 v = q.tangent_at(0.0);
    const double angle = std::atan2(u.cross(v).norm(), u.dot(v));
    CHECK(angle <= 1e-9);
    // Tilt is continuous across the junction as well.
    CHECK((p.tilt_end - q.tilt_start).norm() <= 1e-12);
  }
  // Every arc endpoint lies trim away from its vertex.
  std::size_t arc_index = 0;
  for (std::size_t i = 0; i < path.primitives.size(); ++i) {
    const PathPrimitive& p = path.primitives[i];
    if (p.kind != PathPrimitive::Kind::arc) continue;
    const CornerBlend& c = path.corners[arc_index++];
    CHECK((p.point_at(0.0) - c.vertex).norm() == doctest::Approx(c.trim).epsilon(1e-9));
    CHECK((p.point_at(p.length) - c.vertex).norm() ==
          doctest::Approx(c.trim).epsilon(1e-9));
    CHECK(p.radius * p.sweep == doctest::Approx(p.length).epsilon(1e-12));
  }
  CHECK(arc_index == path.corners.size());
}

TEST_CASE("collinear segments merge and single segments pass through") {
  const MachineParams m;
  const Pose home = m.home();

  SUBCASE("same feed merges into one primitive") {
    const auto segs = parse_gcode("G1 X50 F600\nX100", m, home);
    const BlendedPath path = blend_corners(segs, m, 0.01, home);
    REQUIRE(path.primitives.size() == 1);
    CHECK(path.primitives[0].length == doctest::Approx(0.100).epsilon(1e-12));
    CHECK(path.corners.empty());
  }

  SUBCASE("a feed change keeps two primitives but no corner") {
    const auto segs = parse_gcode("G1 X50 F600\nX100 F1200", m, home);
    const BlendedPath path = blend_corners(segs, m, 0.01, home);
    REQUIRE(path.primitives.size() == 2);
    CHECK(path.corners.empty());
    CHECK(path.primitives[0].cruise == doctest::Approx(0.01));
    CHECK(path.primitives[1].cruise == doctest::Approx(0.02));
  }

  SUBCASE("single segment passes through untrimmed") {
    const auto segs = parse_gcode("G1 X50 F600", m, home);
    const BlendedPath path = blend_corners(segs, m, 0.01, home);
    REQUIRE(path.primitives.size() == 1);
    CHECK(path.primitives[0].length == doctest::Approx(0.050).epsilon(1e-12));
    CHECK(path.corners.empty());
  }

  SUBCASE("zero-length moves are dropped") {
    const auto segs = parse_gcode("G1 X0 Y0 Z-90 F600\nX50", m, home);
    const BlendedPath path = blend_corners(segs, m, 0.01, home);
    REQUIRE(path.primitives.size() == 1);  // first block repeats the home tip
    CHECK(path.primitives[0].length == doctest::Approx(0.050).epsilon(1e-12));
  }

  SUBCASE("a pure-rotation block is rejected") {
    const auto segs = parse_gcode("G1 A10 F600", m, home);
    const Error e = capture([&] { blend_corners(segs, m, 0.01, home); });
    CHECK(e.code() == Errc::gcode_unsupported);
  }

  SUBCASE("an exact reversal becomes a full stop corner") {
    const auto segs = parse_gcode("G1 X50 F600\nX0", m, home);
    const BlendedPath path = blend_corners(segs, m, 0.01, home);
    REQUIRE(path.primitives.size() == 2);
    REQUIRE(path.corners.size() == 1);
    CHECK(path.corners[0].radius == 0.0);
    CHECK(path.corners[0].speed == 0.0);
    CHECK(path.primitives[0].length == doctest::Approx(0.050));
  }
}

TEST_CASE("planned square dips to the corner speed and honors the limits") {
  const MachineParams m;
  // 60 mm square at tip depth z = -70 mm (wrist center z = +20 mm), reached
  // by a feed move from home; F30000 = 0.5 m/s with 5 mm corner cap.
  const std::string text =
      "G1 X20 Y20 Z-70 F30000\n"
      "X80\n"
      "Y80\n"
      "X20\n"
      "Y20\n";
  BlendedPath path;
  Plan plan = plan_gcode(parse_gcode(text, m, m.home()), m, 0.005, m.home(),
                         PlanOptions{}, &path);
  REQUIRE(!plan.samples.empty());
  REQUIRE(plan.segments.size() == 1);
  CHECK(plan.segments[0].label == "gcode");
  // The corner-speed rule pins the Cartesian acceleration norm exactly at
  // a_t_max on the arcs; the prismatic coupling can push individual joint
  // accelerations a hair over, which the global rescale absorbs.
  const double mult = plan.segments[0].multiplier;
  CHECK(mult >= 1.0);
  CHECK(mult <= 1.02);

  // Four blended corners, each at the documented radius and speed.
  REQUIRE(path.corners.size() == 4);
  const double v_c = std::sqrt(m.a_t_max * 0.005);
  for (const CornerBlend& c : path.corners) {
    CHECK(c.radius == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(c.speed == doctest::Approx(v_c).epsilon(1e-12));
  }

  // Rest-to-rest.
  CHECK(tip_speed(plan.samples.front()) <= 1e-9);
  CHECK(tip_speed(plan.samples.back()) <= 1e-9);
  CHECK(plan.samples.front().pose.tip.isApprox(m.home().tip, 1e-12));
  CHECK(plan.samples.back().pose.tip.isApprox(Vec3(0.020, 0.020, -0.070), 1e-9));

  // Speed trace: cruises at the (rescaled) feed on edge interiors, dips to
  // the corner speed on the arcs, never exceeds either.
  const double v_feed = 0.5 / mult;
  const double v_arc = v_c / mult;
  double v_max = 0.0;
  std::size_t at_feed = 0, at_corner = 0;
  bool seen_feed_since_corner = false;
  std::size_t dips = 0;
  for (const TrajectorySample& s : plan.samples) {
    const double v = tip_speed(s);
    v_max = std::max(v_max, v);
    if (std::abs(v - v_feed) < v_feed * 1e-4) ++at_feed;
    if (std::abs(v - v_arc) < v_arc * 1e-4) {
      ++at_corner;
      if (seen_feed_since_corner) ++dips;
      seen_feed_since_corner = false;
    }
    if (std::abs(v - v_feed) < v_feed * 1e-4) seen_feed_since_corner = true;
  }
  CHECK(v_max <= 0.5 * (1.0 + 1e-9));
  CHECK(at_feed >= 50);    // sustained cruising on the edges
  CHECK(at_corner >= 40);  // sustained corner plateaus on the arcs
  CHECK(dips == 4);        // one dip per corner

  // Hardware limits hold on every sample.
  const LimitRatios ratios = limit_ratios(plan.samples, m);
  CHECK(ratios.vel <= 1.0 + 1e-9);
  CHECK(ratios.acc <= 1.0 + 1e-9);

  // Centripetal bound on every arc sample: ||V||^2 / r <= a_t_max (1+1e-9).
  // Identify arc samples geometrically: distance to the arc center equals the
  // radius while inside the arc's angular span.
  std::size_t arc_samples = 0;
  for (const TrajectorySample& s : plan.samples) {
    for (const PathPrimitive& p : path.primitives) {
      if (p.kind != PathPrimitive::Kind::arc) continue;
      const Vec3 rel = s.pose.tip - p.center;
      if (std::abs(rel.norm() - p.radius) > 1e-9) continue;
      const double psi = std::atan2(rel.dot(p.e2), rel.dot(p.e1));
      if (psi < -1e-9 || psi > p.sweep + 1e-9) continue;
      ++arc_samples;
      const double v2 = s.vel.tail<3>().squaredNorm();
      CHECK(v2 / p.radius <= m.a_t_max * (1.0 + 1e-9));
    }
  }
  CHECK(arc_samples >= 40);

  // Determinism.
  const Plan again = plan_gcode(parse_gcode(text, m, m.home()), m, 0.005,
                                m.home(), PlanOptions{});
  REQUIRE(again.samples.size() == plan.samples.size());
  for (std::size_t i = 0; i < plan.samples.size(); ++i)
    CHECK((again.samples[i].q.vector() - plan.samples[i].q.vector()).norm() ==
          0.0);
}

TEST_CASE("planned samples integrate consistently") {
  const MachineParams m;

  SUBCASE("tip position is C1 even when the tool tilts along the path") {
    const std::string text =
        "G1 X20 Y20 Z-70 F30000\n"
        "X120 A8\n"
        "Y120 A0 B6\n";
    const Plan plan = plan_gcode(text, m, 0.010);
    REQUIRE(plan.samples.size() >= 100);

    // Central differences of the tip position reproduce the tip velocity.
    // (Acceleration steps at arc boundaries bound the triple error by
    // ~a_t_max * dt / 8; the tilt rates themselves step at junctions.)
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < plan.samples.size(); ++i) {
      const TrajectorySample& a = plan.samples[i - 1];
      const TrajectorySample& b = plan.samples[i];
      const TrajectorySample& c = plan.samples[i + 1];
      if (std::abs((c.t - b.t) - (b.t - a.t)) > 1e-12) continue;
      const double dt = c.t - a.t;
      const Vec3 fd = (c.pose.tip - a.pose.tip) / dt;
      worst = std::max(worst, (fd - Vec3(b.vel.tail<3>())).norm());
    }
    CHECK(worst <= 2e-3);

    // Tilt is continuous and lands on the commanded end values.
    double worst_tilt_step = 0.0;
    for (std::size_t i = 1; i < plan.samples.size(); ++i) {
      const double da =
          plan.samples[i].pose.alpha - plan.samples[i - 1].pose.alpha;
      const double db =
          plan.samples[i].pose.beta - plan.samples[i - 1].pose.beta;
      worst_tilt_step = std::max(worst_tilt_step, std::hypot(da, db));
    }
    CHECK(worst_tilt_step <= 2e-3);  // ~ max tilt rate / sample rate
    CHECK(plan.samples.back().pose.alpha ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.samples.back().pose.beta ==
          doctest::Approx(deg(6.0)).epsilon(1e-9));
  }

  SUBCASE("with constant orientation the full pose and joints are C1") {
    const std::string text =
        "G1 X20 Y20 Z-70 F30000\n"
        "X120\n"
        "Y120\n";
    const Plan plan = plan_gcode(text, m, 0.010);
    REQUIRE(plan.samples.size() >= 100);

    double worst = 0.0, worst_q = 0.0;
    for (std::size_t i = 1; i + 1 < plan.samples.size(); ++i) {
      const TrajectorySample& a = plan.samples[i - 1];
      const TrajectorySample& b = plan.samples[i];
      const TrajectorySample& c = plan.samples[i + 1];
      if (std::abs((c.t - b.t) - (b.t - a.t)) > 1e-12) continue;
      const double dt = c.t - a.t;
      worst = std::max(
          worst, ((c.pose.vector() - a.pose.vector()) / dt - b.vel).norm());
      worst_q = std::max(
          worst_q, ((c.q.vector() - a.q.vector()) / dt - Vec5(b.qd)).norm());
    }
    CHECK(worst <= 2e-3);
    CHECK(worst_q <= 2e-3);
  }
}

TEST_CASE("rapid moves run at machine speed scaled by the speed ratio") {
  const MachineParams m;
  // Long rapid: home tip (0,0,-90) to (400, 380, -60) mm, far enough to reach
  // the k_vt plateau (ramp needs ~208 mm each way).
  const std::string text = "G0 X400 Y380 Z-60\n";

  PlanOptions opts;
  const Plan full = plan_gcode(text, m, 0.01, opts);
  double v_max = 0.0;
  for (const TrajectorySample& s : full.samples)
    v_max = std::max(v_max, tip_speed(s));
  CHECK(v_max == doctest::Approx(m.k_vt).epsilon(1e-9));

  opts.speed_ratio = 0.5;
  const Plan half = plan_gcode(text, m, 0.01, opts);
  double v_half = 0.0;
  for (const TrajectorySample& s : half.samples)
    v_half = std::max(v_half, tip_speed(s));
  CHECK(v_half == doctest::Approx(0.5 * m.k_vt).epsilon(1e-9));
}

TEST_CASE("safety cap rescales gcode plans to 10% machine speed") {
  const MachineParams m;
  const std::string text = "G1 X100 Y100 Z-70 F30000\n";
  PlanOptions opts;
  opts.safety_cap = true;
  const Plan plan = plan_gcode(text, m, 0.01, opts);
  double v_max = 0.0;
  for (const TrajectorySample& s : plan.samples)
    v_max = std::max(v_max, tip_speed(s));
  CHECK(v_max <= m.safety_speed_ratio * m.k_vt * (1.0 + 1e-9));
  CHECK(v_max >= 0.8 * m.safety_speed_ratio * m.k_vt);  // actually moves
  REQUIRE(plan.segments.size() == 1);
  CHECK(plan.segments[0].multiplier > 1.0);
}

TEST_CASE("gcode plans report workspace exits with the offending time") {
  const MachineParams m;
  // Drives the wrist center's x past the 0.5 m cube face.
  const std::string text = "G1 X600 F30000\n";
  const Error e = capture([&] { plan_gcode(text, m, 0.01); });
  CHECK(e.code() == Errc::workspace_exit);
  CHECK(std::string(e.what()).find("t = ") != std::string::npos);
}

TEST_CASE("empty programs plan to empty trajectories") {
  const MachineParams m;
  CHECK(plan_gcode("", m, 0.01).samples.empty());
  CHECK(plan_gcode("( no motion )\nF600\nG0\n", m, 0.01).samples.empty());
  CHECK(plan_gcode("", m, 0.01).segments.empty());
}

TEST_CASE("text and segment entry points agree") {
  const MachineParams m;
  const std::string text = "G1 X30 Y10 Z-70 F12000\nX60 B3\n";
  const Plan a = plan_gcode(text, m, 0.004);
  const Plan b = plan_gcode(parse_gcode(text, m, m.home()), m, 0.004, m.home(),
                            PlanOptions{});
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].t == b.samples[i].t);
    CHECK((a.samples[i].pose.vector() - b.samples[i].pose.vector()).norm() ==
          0.0);
  }
}

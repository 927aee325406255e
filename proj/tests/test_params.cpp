#include <doctest.h>

#include <cmath>
#include <string>

#include "helpers.hpp"
#include "hpkm/params.hpp"
#include "hpkm/wrist.hpp"

using namespace hpkm;

TEST_CASE("default parameters validate and give the expected home pose") {
  MachineParams p;
  CHECK_NOTHROW(p.validate());
  const Pose home = p.home();
  CHECK(home.alpha == 0.0);
  CHECK(home.beta == 0.0);
  CHECK(home.tip.z() == doctest::Approx(-0.09).epsilon(1e-15));
  CHECK(wrist_center_of(home, p).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("empty config keeps defaults") {
  const MachineParams p = parse_config("");
  CHECK(p.l1 == 0.75);
  CHECK(p.k_vt == 1.2);
  CHECK(p.gains.kp == 19200.0);
  CHECK(p.gains.kd == 240.0);
  CHECK(p.gains.ki == 512000.0);
  CHECK(p.mass == doctest::Approx(91.6278).epsilon(1e-15));
  CHECK(p.inertia == doctest::Approx(0.2772).epsilon(1e-15));
}

TEST_CASE("config assigns keys, converts tilt degrees, ignores comments") {
  const std::string text =
      "# machine under test\n"
      "l1 = 0.7\n"
      "l2 = 0.7   # trailing comment\n"
      "l3 = 0.7\n"
      "tilt_limit_deg = 30\n"
      "k_vt = 1.0\n"
      "kp = 10000\n";
  const MachineParams p = parse_config(text);
  CHECK(p.l1 == 0.7);
  CHECK(p.l2 == 0.7);
  CHECK(p.tilt_limit == doctest::Approx(k_pi / 6.0).epsilon(1e-15));
  CHECK(p.k_vt == 1.0);
  CHECK(p.gains.kp == 10000.0);
  CHECK(p.gains.kd == 240.0);  // untouched keys keep defaults
}

TEST_CASE("config rejects unknown keys and malformed values") {
  try {
    parse_config("lx = 0.7\n");
    FAIL("expected config_parse");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_parse);
    CHECK(std::string(e.what()).find("lx") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("l1 = fast\n"), Error);
  CHECK_THROWS_AS(parse_config("l1\n"), Error);
  CHECK_THROWS_AS(parse_config("l1 = 0.7 extra\n"), Error);
}

TEST_CASE("validation names the offending field") {
  try {
    parse_config("tool_length = 0.05\n");
    FAIL("expected invalid_argument");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
    const std::string what = e.what();
    CHECK(what.find("tool_length") != std::string::npos);
    CHECK(what.find("0.072") != std::string::npos);
  }
  try {
    parse_config("k_vt = 0\n");
    FAIL("expected invalid_argument");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
    CHECK(std::string(e.what()).find("k_vt") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("rho_min = 1.5\n"), Error);  // above rho_max
  CHECK_THROWS_AS(parse_config("tilt_limit_deg = 120\n"), Error);
  CHECK_THROWS_AS(parse_config("mass = -1\n"), Error);
  CHECK_THROWS_AS(parse_config("safety_speed_ratio = 1.5\n"), Error);
}

TEST_CASE("wrist center offsets the tip along the tool axis") {
  MachineParams p;
  SUBCASE("tilted pose, tool length 0.1") {
    p.tool_length = 0.1;
    const Pose pose{k_pi / 4.0, 0.0, Vec3::Zero()};
    const Vec3 c = wrist_center_of(pose, p);
    CHECK(c.x() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.y() == doctest::Approx(-0.07071067811865475).epsilon(1e-12));
    CHECK(c.z() == doctest::Approx(0.07071067811865477).epsilon(1e-12));
  }
  SUBCASE("offset distance always equals the tool length") {
    for (int i = 0; i < 1000; ++i) {
      const Pose pose = testing::random_pose(p);
      const double d = (pose.tip - wrist_center_of(pose, p)).norm();
      CHECK(d == doctest::Approx(p.tool_length).epsilon(1e-12));
    }
  }
}

TEST_CASE("workspace check reports the failing condition") {
  MachineParams p;
  CHECK(check_workspace(p.home(), p).inside);

  SUBCASE("tilt beyond the cone") {
    Pose pose = p.home();
    pose.alpha = p.tilt_limit + 0.01;
    const WorkspaceCheck c = check_workspace(pose, p);
    CHECK_FALSE(c.inside);
    CHECK(c.reason == WorkspaceReason::tilt);
  }
  SUBCASE("wrist center beyond a leg sphere") {
    Pose pose = p.home();
    pose.tip.y() = p.l1 + 1.0;
    const WorkspaceCheck c = check_workspace(pose, p);
    CHECK_FALSE(c.inside);
    CHECK(c.reason == WorkspaceReason::unreachable);
  }
  SUBCASE("prismatic extension outside its range") {
    MachineParams tight = p;
    tight.rho_max = 0.8;
    Pose pose;  // wrist center at (0.5, 0, 0) needs rho1 = 1.25
    pose.tip = Vec3(0.5, 0.0, 0.0) + tight.tool_length * tool_direction(0, 0);
    const WorkspaceCheck c = check_workspace(pose, tight);
    CHECK_FALSE(c.inside);
    CHECK(c.reason == WorkspaceReason::joint_limit);
    CHECK(c.leg == 0);
    CHECK(check_workspace(pose, p).inside);  // default range admits it
  }
}

TEST_CASE("workspace is monotone in the tilt limit") {
  MachineParams narrow;
  narrow.tilt_limit = 0.3;
  MachineParams wide;
  wide.tilt_limit = 0.6;
  for (int i = 0; i < 500; ++i) {
    Pose pose = testing::random_pose(wide);
    if (workspace_contains(pose, narrow)) CHECK(workspace_contains(pose, wide));
  }
}

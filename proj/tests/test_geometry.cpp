#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "courtloc/geometry.hpp"
#include "oracles.hpp"

using namespace courtloc;
using namespace courtloc::geometry;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("default court validates and matches the documented layout") {
  const CourtSpec court = default_court();
  CHECK(court.length == 15.0);
  CHECK(court.width == 8.0);
  CHECK(court.line_width == 0.05);
  CHECK(court.markings.size() == 8);  // 4 boundary + half line + circle + 2 arcs
  CHECK_NOTHROW(validate(court));
}

TEST_CASE("court validation rejects out-of-bounds and degenerate markings") {
  CourtSpec court = default_court();
  court.markings.push_back(Segment{{0.0, 0.0}, {20.0, 0.0}});
  CHECK_THROWS_AS(validate(court), DomainError);

  CourtSpec degenerate = default_court();
  degenerate.markings.push_back(Segment{{1.0, 1.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(validate(degenerate), DomainError);

  CourtSpec bad_arc = default_court();
  bad_arc.markings.push_back(Arc{{0.0, 0.0}, 1.0, 1.0, 1.0});  // zero span
  CHECK_THROWS_AS(validate(bad_arc), DomainError);
}

TEST_CASE("projection: principal point and frustum culling") {
  CameraRig rig;
  Pose2D pose;

  // Optical axis hits the floor mount_height/tan(pitch) ahead; that point
  // projects exactly to the principal point.
  const double ahead = rig.mount_height / std::tan(rig.mount_pitch);
  const auto px = project_floor_point(rig, pose, {ahead, 0.0});
  REQUIRE(px.has_value());
  CHECK(px->x == doctest::Approx(rig.cx).epsilon(1e-12));
  CHECK(px->y == doctest::Approx(rig.cy).epsilon(1e-12));

  // Point behind the camera.
  CHECK_FALSE(project_floor_point(rig, pose, {-1.0, 0.0}).has_value());
}

TEST_CASE("projection matches the homogeneous-transform oracle") {
  CameraRig rig;
  rig.fx = rig.fy = 500.0;
  rig.cx = 320.0;
  rig.cy = 240.0;
  rig.mount_height = 0.5;
  rig.mount_pitch = 0.3;
  const Pose2D origin;

  const auto lib = project_floor_point(rig, origin, {2.0, 0.0});
  const auto ref = oracles::project_homogeneous(rig, origin, {2.0, 0.0});
  REQUIRE(lib.has_value());
  REQUIRE(ref.has_value());
  CHECK(std::abs(lib->x - ref->x) < 1e-9);
  CHECK(std::abs(lib->y - ref->y) < 1e-9);

  // Random poses and points.
  Rng rng(99);
  int checked = 0;
  while (checked < 200) {
    Pose2D pose{rng.uniform(-7.0, 7.0), rng.uniform(-3.5, 3.5),
                rng.uniform(-kPi, kPi)};
    const Vec2 p{rng.uniform(-7.5, 7.5), rng.uniform(-4.0, 4.0)};
    const auto a = project_floor_point(rig, pose, p);
    const auto b = oracles::project_homogeneous(rig, pose, p);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(std::abs(a->x - b->x) < 1e-9);
      CHECK(std::abs(a->y - b->y) < 1e-9);
      ++checked;
    }
  }
}

TEST_CASE("projection is injective on the visible floor") {
  CameraRig rig;
  Pose2D pose{1.0, -0.5, 0.3};
  Rng rng(7);
  int pairs = 0;
  while (pairs < 200) {
    const Vec2 p{rng.uniform(-7.5, 7.5), rng.uniform(-4.0, 4.0)};
    const Vec2 q{rng.uniform(-7.5, 7.5), rng.uniform(-4.0, 4.0)};
    if ((p - q).norm() < 1e-6) continue;
    const auto pp = project_floor_point(rig, pose, p);
    const auto pq = project_floor_point(rig, pose, q);
    if (!pp || !pq) continue;
    CHECK((*pp - *pq).norm() > 1e-9);
    ++pairs;
  }
}

TEST_CASE("distance to markings: exact cases") {
  CourtSpec court;
  court.markings = {Segment{{-1.0, 0.0}, {1.0, 0.0}}};
  CHECK(distance_to_nearest_marking(court, {-1.0, 0.0}) == 0.0);  // endpoint
  CHECK(distance_to_nearest_marking(court, {0.0, 0.7}) ==
        doctest::Approx(0.7).epsilon(1e-12));  // perpendicular at midpoint
  CHECK(distance_to_nearest_marking(court, {2.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));  // beyond the endpoint

  CourtSpec circle;
  circle.markings = {Arc{{0.0, 0.0}, 2.0, 0.0, 2.0 * kPi}};
  CHECK(distance_to_nearest_marking(circle, {3.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(distance_to_nearest_marking(circle, {0.0, 0.0}) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // Half circle: points on the missing side go to the arc endpoints.
  CourtSpec half;
  half.markings = {Arc{{0.0, 0.0}, 2.0, 0.0, kPi}};
  CHECK(distance_to_nearest_marking(half, {0.0, -2.0}) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("distance to markings agrees with the dense-sampling oracle") {
  const CourtSpec court = default_court();
  Rng rng(17);
  for (int k = 0; k < 60; ++k) {
    const Vec2 p{rng.uniform(-8.0, 8.0), rng.uniform(-4.5, 4.5)};
    const double fast = distance_to_nearest_marking(court, p);
    const double slow = oracles::distance_by_sampling(court, p, 100000 / 8);
    CHECK(std::abs(fast - slow) < 1e-3);
  }
}

TEST_CASE("distance to markings is 1-Lipschitz") {
  const CourtSpec court = default_court();
  Rng rng(21);
  for (int k = 0; k < 400; ++k) {
    const Vec2 p{rng.uniform(-8.0, 8.0), rng.uniform(-4.5, 4.5)};
    const Vec2 q{rng.uniform(-8.0, 8.0), rng.uniform(-4.5, 4.5)};
    const double dp = distance_to_nearest_marking(court, p);
    const double dq = distance_to_nearest_marking(court, q);
    CHECK(std::abs(dp - dq) <= (p - q).norm() + 1e-12);
  }
}

TEST_CASE("pose sampling: determinism, bounds, yaw modes") {
  const CourtSpec court = default_court();

  const Pose2D a = sample_pose(court, std::uint64_t{5}, YawMode::fixed(0.0));
  const Pose2D b = sample_pose(court, std::uint64_t{5}, YawMode::fixed(0.0));
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.yaw == b.yaw);

  Rng rng(3);
  double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
  for (int k = 0; k < 10000; ++k) {
    const Pose2D p = sample_pose(court, rng, YawMode::fixed(0.0));
    CHECK(p.yaw == 0.0);
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  CHECK(min_x >= -7.2);
  CHECK(max_x <= 7.2);
  CHECK(min_x < -7.1);  // the sampler actually reaches the inset bounds
  CHECK(max_x > 7.1);
  CHECK(min_y >= -3.7);
  CHECK(max_y <= 3.7);

  Rng rng2(4);
  const Pose2D u = sample_pose(court, rng2, YawMode::uniform());
  CHECK(u.yaw >= -kPi);
  CHECK(u.yaw < kPi);
}

TEST_CASE("court file parsing round-trips and reports line numbers") {
  const CourtSpec court = default_court();
  std::istringstream in(court_to_text(court));
  const CourtSpec parsed = parse_court(in, "roundtrip");
  CHECK(parsed.markings.size() == court.markings.size());
  CHECK(court_hash(parsed) == court_hash(court));

  std::istringstream bad("length 15\nsegment 0 0 1\n");
  try {
    parse_court(bad, "bad");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("bad:2") != std::string::npos);
  }

  std::istringstream unknown("squiggle 1 2 3\n");
  CHECK_THROWS_AS(parse_court(unknown, "x"), ParseError);

  std::istringstream not_num("segment 0 0 1 foo\n");
  CHECK_THROWS_AS(parse_court(not_num, "x"), ParseError);
}

TEST_CASE("normalize_angle maps into [-pi, pi)") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(kPi) == doctest::Approx(-kPi));
  CHECK(normalize_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  CHECK(normalize_angle(-5.0 * kPi) == doctest::Approx(-kPi));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "courtloc/geometry.hpp"
#include "courtloc/parallel.hpp"
#include "courtloc/render.hpp"

using namespace courtloc;
using namespace courtloc::geometry;
using namespace courtloc::render;

namespace {

int count_color(const ImageBuffer& img, Rgb8 c) {
  int n = 0;
  for (int r = 0; r < img.height; ++r)
    for (int col = 0; col < img.width; ++col)
      if (img.pixel(r, col) == c) ++n;
  return n;
}

}  // namespace

TEST_CASE("backproject/project round-trip on random visible floor points") {
  CameraRig rig;
  Pose2D pose{0.5, -1.0, 0.7};
  Rng rng(11);
  int checked = 0;
  while (checked < 1000) {
    const Vec2 p{rng.uniform(-7.5, 7.5), rng.uniform(-4.0, 4.0)};
    const auto px = project_floor_point(rig, pose, p);
    if (!px) continue;
    const auto back = backproject_pixel(rig, pose, *px);
    REQUIRE(back.has_value());
    CHECK((*back - p).norm() < 1e-6);
    ++checked;
  }
}

TEST_CASE("backproject: horizontal rays and above-horizon pixels miss the floor") {
  CameraRig rig;
  rig.mount_pitch = 0.0;
  // Principal point with zero pitch: the ray is horizontal.
  CHECK_FALSE(backproject_pixel(rig, {}, {rig.cx, rig.cy}).has_value());

  CameraRig pitched;  // default pitch
  const double horizon = horizon_row(pitched);
  CHECK(horizon == doctest::Approx(pitched.cy - pitched.fy * std::tan(0.08)));
  for (int row = 0; row < static_cast<int>(horizon); ++row) {
    // Sample the row's center; rows strictly above the horizon never hit.
    const auto hit = backproject_pixel(pitched, {}, {pitched.cx, double(row)});
    CHECK_FALSE(hit.has_value());
  }
  // A row safely below the horizon hits the floor.
  CHECK(backproject_pixel(pitched, {}, {pitched.cx, horizon + 5.0}).has_value());
}

TEST_CASE("monotonic depth: lower rows back-project nearer") {
  CameraRig rig;
  Pose2D pose;
  const int col = 200;
  double prev = std::numeric_limits<double>::infinity();
  for (int row = static_cast<int>(horizon_row(rig)) + 2; row < rig.image_height;
       row += 7) {
    const auto p = backproject_pixel(rig, pose, {double(col), double(row)});
    REQUIRE(p.has_value());
    const double dist = p->norm();
    CHECK(dist < prev);
    prev = dist;
  }
}

TEST_CASE("empty marking list renders no line pixels") {
  CourtSpec court;  // no markings
  CameraRig rig;
  rig.image_width = 160;
  rig.image_height = 120;
  rig.fx = rig.fy = 125.0;
  rig.cx = 80.0;
  rig.cy = 60.0;
  RenderStyle style;
  const ImageBuffer img = render_view(court, rig, {}, style, 0);
  CHECK(count_color(img, style.line_color) == 0);
  CHECK(count_color(img, style.floor_color) > 0);
  CHECK(count_color(img, style.background_color) > 0);
}

TEST_CASE("facing away from every marking renders no line pixels") {
  CourtSpec court;
  court.markings = {Segment{{-7.0, -3.0}, {-7.0, 3.0}}};
  CameraRig rig;
  rig.image_width = 160;
  rig.image_height = 120;
  rig.fx = rig.fy = 125.0;
  rig.cx = 80.0;
  rig.cy = 60.0;
  RenderStyle style;
  // Robot east of the only marking, facing +x: the segment is behind it.
  const ImageBuffer img = render_view(court, rig, {5.0, 0.0, 0.0}, style, 0);
  CHECK(count_color(img, style.line_color) == 0);
}

TEST_CASE("line pixels back-project onto marking centerlines") {
  const CourtSpec court = default_court();
  CameraRig rig;
  Pose2D pose{-3.0, 0.0, 0.0};
  RenderStyle style;  // noise off; antialiased
  const ImageBuffer img = render_view(court, rig, pose, style, 1);

  // Footprint of one pixel on the floor at the pixel in question.
  auto footprint = [&](double col, double row) {
    const auto c = backproject_pixel(rig, pose, {col, row});
    const auto dx = backproject_pixel(rig, pose, {col + 1.0, row});
    const auto dy = backproject_pixel(rig, pose, {col, row + 1.0});
    double f = 0.0;
    if (c && dx) f = std::max(f, (*dx - *c).norm());
    if (c && dy) f = std::max(f, (*dy - *c).norm());
    return f;
  };

  Rng rng(5);
  int checked = 0;
  int guard = 0;
  while (checked < 100 && guard < 2000000) {
    ++guard;
    const int row = static_cast<int>(rng.below(rig.image_height));
    const int col = static_cast<int>(rng.below(rig.image_width));
    if (!(img.pixel(row, col) == style.line_color)) continue;
    const auto center = backproject_pixel(rig, pose, {col + 0.5, row + 0.5});
    REQUIRE(center.has_value());
    const double d = distance_to_nearest_marking(court, *center);
    CHECK(d <= court.line_width / 2.0 + footprint(col + 0.5, row + 0.5));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("rendering is deterministic and thread-count independent") {
  const CourtSpec court = default_court();
  CameraRig rig;
  rig.image_width = 160;
  rig.image_height = 120;
  rig.fx = rig.fy = 125.0;
  rig.cx = 80.0;
  rig.cy = 60.0;
  RenderStyle style;
  style.noise_std = 2.0;
  const Pose2D pose{1.0, 0.5, 0.2};

  const ImageBuffer a = render_view(court, rig, pose, style, 42);
  const ImageBuffer b = render_view(court, rig, pose, style, 42);
  CHECK(a == b);

  const int saved = par::max_threads();
  par::set_max_threads(1);  // serial reference path
  const ImageBuffer serial = render_view(court, rig, pose, style, 42);
  par::set_max_threads(saved > 1 ? saved : 4);
  const ImageBuffer parallel = render_view(court, rig, pose, style, 42);
  par::set_max_threads(saved);
  CHECK(serial == parallel);

  const ImageBuffer other_seed = render_view(court, rig, pose, style, 43);
  CHECK(other_seed != a);  // noise depends on the seed
}

TEST_CASE("style validation enforces the mask contract") {
  RenderStyle style;
  CHECK_NOTHROW(validate(style));
  RenderStyle bad = style;
  bad.line_color = {100, 100, 100};  // too dim to pass the white mask
  CHECK_THROWS_AS(validate(bad), DomainError);
  RenderStyle bad_floor = style;
  bad_floor.floor_color = {255, 255, 255};
  CHECK_THROWS_AS(validate(bad_floor), DomainError);
  RenderStyle bad_aa = style;
  bad_aa.antialias_samples = 0;
  CHECK_THROWS_AS(validate(bad_aa), DomainError);
}

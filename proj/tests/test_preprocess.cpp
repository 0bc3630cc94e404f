#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "courtloc/geometry.hpp"
#include "courtloc/parallel.hpp"
#include "courtloc/preprocess.hpp"
#include "courtloc/render.hpp"
#include "oracles.hpp"

using namespace courtloc;
using namespace courtloc::preprocess;

namespace {

ImageBuffer random_binary(int w, int h, Rng& rng, double white_fraction) {
  ImageBuffer img = ImageBuffer::gray(w, h);
  for (auto& b : img.data) b = rng.uniform() < white_fraction ? 255 : 0;
  return img;
}

int count_nonzero(const std::vector<float>& v) {
  return static_cast<int>(std::count_if(v.begin(), v.end(),
                                        [](float x) { return x != 0.0f; }));
}

}  // namespace

TEST_CASE("rgb_to_hsv: reference colors") {
  const HsvPixel white = rgb_to_hsv({255, 255, 255});
  CHECK(white.h == 0.0);
  CHECK(white.s == 0.0);
  CHECK(white.v == 1.0);

  const HsvPixel red = rgb_to_hsv({255, 0, 0});
  CHECK(red.h == 0.0);
  CHECK(red.s == 1.0);
  CHECK(red.v == 1.0);

  const HsvPixel green = rgb_to_hsv({0, 255, 0});
  CHECK(green.h == doctest::Approx(120.0));
  CHECK(green.s == 1.0);
  CHECK(green.v == 1.0);

  const HsvPixel black = rgb_to_hsv({0, 0, 0});
  CHECK(black.h == 0.0);
  CHECK(black.s == 0.0);
  CHECK(black.v == 0.0);

  const HsvPixel blue = rgb_to_hsv({0, 0, 255});
  CHECK(blue.h == doctest::Approx(240.0));
}

TEST_CASE("mask_white: all-white passes, floor green fails") {
  ImageBuffer white = ImageBuffer::rgb(8, 6, {255, 255, 255});
  const ImageBuffer mask = mask_white(white);
  CHECK(std::all_of(mask.data.begin(), mask.data.end(),
                    [](std::uint8_t v) { return v == 255; }));

  // Default floor green is rejected by both ranges: v = 110/255 ~ 0.43 is
  // below both value floors.
  const HsvPixel floor_hsv = rgb_to_hsv({45, 110, 60});
  const WhiteMaskConfig cfg;
  CHECK_FALSE(cfg.range_a.contains(floor_hsv));
  CHECK_FALSE(cfg.range_b.contains(floor_hsv));
  ImageBuffer green = ImageBuffer::rgb(8, 6, {45, 110, 60});
  const ImageBuffer green_mask = mask_white(green);
  CHECK(std::all_of(green_mask.data.begin(), green_mask.data.end(),
                    [](std::uint8_t v) { return v == 0; }));
}

TEST_CASE("mask_white support is idempotent over {0,255} reinterpretation") {
  Rng rng(3);
  ImageBuffer rgb = ImageBuffer::rgb(32, 24);
  for (auto& b : rgb.data) b = static_cast<std::uint8_t>(rng.below(256));
  const ImageBuffer mask = mask_white(rgb);
  // Feed the mask back as a gray-as-rgb image: {0,255} pixels are fixed points.
  ImageBuffer as_rgb = ImageBuffer::rgb(32, 24);
  for (int r = 0; r < 24; ++r)
    for (int c = 0; c < 32; ++c) {
      const std::uint8_t v = mask.at(r, c);
      as_rgb.set_pixel(r, c, {v, v, v});
    }
  const ImageBuffer mask2 = mask_white(as_rgb);
  CHECK(mask2.data == mask.data);
}

TEST_CASE("mask_white commutes with horizontal mirroring") {
  Rng rng(9);
  ImageBuffer rgb = ImageBuffer::rgb(31, 17);
  for (auto& b : rgb.data) b = static_cast<std::uint8_t>(rng.below(256));
  ImageBuffer mirrored = rgb;
  for (int r = 0; r < rgb.height; ++r)
    for (int c = 0; c < rgb.width; ++c)
      mirrored.set_pixel(r, c, rgb.pixel(r, rgb.width - 1 - c));
  const ImageBuffer a = mask_white(mirrored);
  const ImageBuffer b = mask_white(rgb);
  for (int r = 0; r < rgb.height; ++r)
    for (int c = 0; c < rgb.width; ++c)
      CHECK(a.at(r, c) == b.at(r, rgb.width - 1 - c));
}

TEST_CASE("mask_white rejects gray input") {
  CHECK_THROWS_AS(mask_white(ImageBuffer::gray(4, 4)), ShapeError);
}

TEST_CASE("radial_downsample: trivial inputs") {
  const ImageBuffer black = ImageBuffer::gray(64, 48, 0);
  const ImageBuffer out = radial_downsample(black);
  CHECK(std::all_of(out.data.begin(), out.data.end(),
                    [](std::uint8_t v) { return v == 0; }));

  const ImageBuffer white = ImageBuffer::gray(64, 48, 255);
  const ImageBuffer out2 = radial_downsample(white);
  CHECK(std::all_of(out2.data.begin(), out2.data.end(),
                    [](std::uint8_t v) { return v == 0; }));

  ImageBuffer non_binary = ImageBuffer::gray(8, 8, 0);
  non_binary.at(2, 2) = 7;
  CHECK_THROWS_AS(radial_downsample(non_binary), DomainError);
}

TEST_CASE("radial_downsample matches the independent reference implementation") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const double fraction = rng.uniform(0.05, 0.95);
    const ImageBuffer img = random_binary(64, 48, rng, fraction);
    const ImageBuffer lib = radial_downsample(img);
    const ImageBuffer ref = oracles::radial_downsample_reference(img);
    REQUIRE(lib.data == ref.data);
  }
}

TEST_CASE("radial_downsample serial and parallel paths agree") {
  Rng rng(77);
  const ImageBuffer img = random_binary(96, 64, rng, 0.4);
  const int saved = par::max_threads();
  par::set_max_threads(1);
  const ImageBuffer serial = radial_downsample(img);
  par::set_max_threads(saved > 1 ? saved : 4);
  const ImageBuffer parallel = radial_downsample(img);
  par::set_max_threads(saved);
  CHECK(serial.data == parallel.data);
}

TEST_CASE("radial_downsample output is bounded by rays x transitions") {
  Rng rng(31);
  const ImageBuffer img = random_binary(64, 48, rng, 0.5);
  const ImageBuffer out = radial_downsample(img);
  int marks = 0;
  for (auto v : out.data)
    if (v == 255) ++marks;
  // 91 rays, at most ceil(max_d / 2) + 1 transitions each.
  const int max_transitions_per_ray = 64 / 2 + 2;
  CHECK(marks <= 91 * max_transitions_per_ray);
}

TEST_CASE("crop_top: arithmetic, identity, row mapping, errors") {
  ImageBuffer img = ImageBuffer::gray(640, 480);
  Rng rng(8);
  for (auto& b : img.data) b = static_cast<std::uint8_t>(rng.below(256));

  const ImageBuffer cropped = crop_top(img, 200);
  CHECK(cropped.width == 640);
  CHECK(cropped.height == 280);
  for (int k = 0; k < 50; ++k) {
    const int c = static_cast<int>(rng.below(640));
    CHECK(cropped.at(0, c) == img.at(200, c));
    CHECK(cropped.at(79, c) == img.at(279, c));
  }

  const ImageBuffer same = crop_top(img, 0);
  CHECK(same == img);

  CHECK_THROWS_AS(crop_top(img, 480), ShapeError);
  CHECK_THROWS_AS(crop_top(img, 481), ShapeError);

  // Composition: crop a then b == crop a+b.
  const ImageBuffer two_step = crop_top(crop_top(img, 120), 80);
  CHECK(two_step == cropped);
}

TEST_CASE("normalize_flatten: values, layout, errors") {
  ImageBuffer img = ImageBuffer::gray(640, 280, 0);
  const std::vector<float> zeros = normalize_flatten(img);
  CHECK(zeros.size() == 179200);
  CHECK(std::all_of(zeros.begin(), zeros.end(), [](float v) { return v == 0.0f; }));

  img.at(0, 0) = 255;
  const std::vector<float> onehot = normalize_flatten(img);
  CHECK(onehot[0] == 1.0f);
  CHECK(count_nonzero(onehot) == 1);

  ImageBuffer small = ImageBuffer::gray(4, 3, 128);
  const std::vector<float> v = normalize_flatten(small);
  CHECK(v.size() == 12);
  CHECK(v[0] == doctest::Approx(128.0 / 255.0));

  CHECK_THROWS_AS(normalize_flatten(ImageBuffer::rgb(4, 3)), ShapeError);
}

TEST_CASE("preprocess_pipeline equals the chained stages") {
  const geometry::CourtSpec court = geometry::default_court();
  geometry::CameraRig rig;
  render::RenderStyle style;
  const ImageBuffer frame =
      render::render_view(court, rig, {-2.0, 0.3, 0.1}, style, 3);

  PipelineConfig cfg;
  const std::vector<float> direct = preprocess_pipeline(frame, cfg);
  const std::vector<float> chained = normalize_flatten(
      crop_top(radial_downsample(mask_white(frame, cfg.mask), cfg.scan),
               cfg.crop_rows));
  CHECK(direct == chained);
  CHECK(direct.size() == 179200);
}

TEST_CASE("all-black frame maps to the zero vector") {
  // A markings-free court rendered with a black floor and background would
  // violate the style contract, so drive the stages directly.
  ImageBuffer black = ImageBuffer::rgb(640, 480, {0, 0, 0});
  const std::vector<float> features = preprocess_pipeline(black, {});
  CHECK(count_nonzero(features) == 0);
}

TEST_CASE("single line crossing the view yields at most one mark per ray") {
  // One marking orthogonal to the camera axis renders as a single white band;
  // each of the 91 rays crosses it at most once.
  geometry::CourtSpec court;
  court.markings = {geometry::Segment{{2.0, -4.0}, {2.0, 4.0}}};
  geometry::CameraRig rig;
  rig.mount_pitch = 0.35;  // steep view keeps the band fully below the crop
  render::RenderStyle style;
  const ImageBuffer frame = render::render_view(court, rig, {}, style, 0);

  PipelineConfig cfg;
  const std::vector<float> features = preprocess_pipeline(frame, cfg);
  const int nonzero = count_nonzero(features);
  CHECK(nonzero >= 1);
  CHECK(nonzero <= 91);
}

TEST_CASE("pipeline config file parsing") {
  std::istringstream in(
      "# comment\n"
      "mask_a 0 360 0 0.2 0.8 1\n"
      "mask_b 0 360 0 0.5 0.45 1\n"
      "scan 0 180 2\n"
      "crop_rows 100\n");
  const PipelineConfig cfg = parse_pipeline_config(in, "cfg");
  CHECK(cfg.mask.range_a.s_hi == 0.2);
  CHECK(cfg.mask.range_b.v_lo == 0.45);
  CHECK(cfg.crop_rows == 100);
  CHECK(cfg.scan.ray_count() == 91);

  std::istringstream bad("mask_a 1 2 3\n");
  CHECK_THROWS_AS(parse_pipeline_config(bad, "bad"), ParseError);

  std::istringstream inverted("mask_a 360 0 0 1 0 1\n");
  CHECK_THROWS_AS(parse_pipeline_config(inverted, "inv"), DomainError);
}

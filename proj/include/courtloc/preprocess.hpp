#pragma once

#include <filesystem>
#include <vector>

#include "courtloc/image.hpp"

namespace courtloc::preprocess {

// h in degrees [0, 360) with achromatic pixels at 0; s, v in [0, 1].
struct HsvPixel {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

HsvPixel rgb_to_hsv(Rgb8 p);

struct HsvRange {
  double h_lo = 0.0, h_hi = 360.0;
  double s_lo = 0.0, s_hi = 1.0;
  double v_lo = 0.0, v_hi = 1.0;

  bool contains(const HsvPixel& p) const {
    return p.h >= h_lo && p.h <= h_hi && p.s >= s_lo && p.s <= s_hi &&
           p.v >= v_lo && p.v <= v_hi;
  }
};

// A pixel is white iff it falls in range_a or range_b. Defaults: range_a
// catches bright near-achromatic white, range_b the dimmer blends that thin
// far-away lines produce under antialiasing.
struct WhiteMaskConfig {
  HsvRange range_a = {0.0, 360.0, 0.0, 0.25, 0.75, 1.0};
  HsvRange range_b = {0.0, 360.0, 0.0, 0.45, 0.50, 1.0};
};

void validate(const WhiteMaskConfig& cfg);  // throws DomainError

// Gray8 output in {0, 255}; 255 where the pixel is white.
ImageBuffer mask_white(const ImageBuffer& rgb, const WhiteMaskConfig& cfg = {});

// Ray fan for the downsampling scan: angles from angle_start to angle_end
// inclusive in angle_step increments (degrees), origin at the image's
// bottom-center (W/2, H). The bottom row is sampled at H-1.
struct RadialScanConfig {
  double angle_start_deg = 0.0;
  double angle_end_deg = 180.0;
  double angle_step_deg = 2.0;

  int ray_count() const {
    return static_cast<int>((angle_end_deg - angle_start_deg) / angle_step_deg) + 1;
  }
};

void validate(const RadialScanConfig& cfg);  // throws DomainError

// Marks white-to-nonwhite transitions along each ray on a black canvas.
// Ray samples are (lround(cx + d*cos a), lround(cy - d*sin a)) for integer
// d = 0..max(H, W), with the row index clamped to H-1; the last-seen value
// resets to 0 per ray and updates on every in-bounds sample.
ImageBuffer radial_downsample(const ImageBuffer& binary,
                              const RadialScanConfig& cfg = {});

// Removes `rows` rows from the top; the rest is byte-identical.
ImageBuffer crop_top(const ImageBuffer& img, int rows = 200);

// Row-major flatten of a gray image, bytes scaled to [0, 1].
std::vector<float> normalize_flatten(const ImageBuffer& gray);

struct PipelineConfig {
  WhiteMaskConfig mask;
  RadialScanConfig scan;
  int crop_rows = 200;
};

// mask_white -> radial_downsample -> crop_top -> normalize_flatten.
std::vector<float> preprocess_pipeline(const ImageBuffer& rgb,
                                       const PipelineConfig& cfg = {});

// Key/value configuration file: `mask_a h_lo h_hi s_lo s_hi v_lo v_hi`,
// `mask_b ...`, `scan start end step`, `crop_rows n`. '#' comments allowed.
PipelineConfig parse_pipeline_config(std::istream& in,
                                     const std::string& name = "<config>");
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace courtloc::preprocess

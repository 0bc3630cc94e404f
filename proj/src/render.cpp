#include "courtloc/render.hpp"

#include <algorithm>
#include <cmath>

#include "courtloc/parallel.hpp"
#include "courtloc/preprocess.hpp"
#include "courtloc/rng.hpp"

namespace courtloc::render {

using geometry::CameraRig;
using geometry::CourtSpec;
using geometry::Pose2D;
using geometry::Vec2;

void validate(const RenderStyle& style) {
  if (style.noise_std < 0.0) throw DomainError("noise_std must be >= 0");
  if (style.antialias_samples < 1)
    throw DomainError("antialias_samples must be >= 1");
  // The preprocessing mask must separate lines from everything else.
  const preprocess::WhiteMaskConfig mask;
  auto is_white = [&](Rgb8 c) {
    const auto hsv = preprocess::rgb_to_hsv(c);
    return mask.range_a.contains(hsv) || mask.range_b.contains(hsv);
  };
  if (!is_white(style.line_color))
    throw DomainError("line_color must pass the default white mask");
  if (is_white(style.floor_color))
    throw DomainError("floor_color must fail the default white mask");
  if (is_white(style.background_color))
    throw DomainError("background_color must fail the default white mask");
}

std::optional<Vec2> backproject_pixel(const CameraRig& rig, const Pose2D& pose,
                                      Vec2 pixel) {
  const double xc = (pixel.x - rig.cx) / rig.fx;
  const double yc = (pixel.y - rig.cy) / rig.fy;
  const double cp = std::cos(rig.mount_pitch);
  const double sp = std::sin(rig.mount_pitch);
  // Ray direction in robot coordinates (x forward, y left, z up):
  // dir = xc*right + yc*down + forward with right=(0,-1,0),
  // down=(-sp,0,-cp), forward=(cp,0,-sp).
  const double dx = yc * -sp + cp;
  const double dy = -xc;
  const double dz = yc * -cp - sp;
  if (dz >= -1e-12) return std::nullopt;  // at or above the horizon
  const double s = rig.mount_height / -dz;
  const double rx = s * dx;
  const double ry = s * dy;
  const double c = std::cos(pose.yaw);
  const double sy = std::sin(pose.yaw);
  return Vec2{pose.x + c * rx - sy * ry, pose.y + sy * rx + c * ry};
}

double horizon_row(const CameraRig& rig) {
  return rig.cy - rig.fy * std::tan(rig.mount_pitch);
}

namespace {

struct RowContext {
  const CourtSpec* court;
  const CameraRig* rig;
  const Pose2D* pose;
  const RenderStyle* style;
  std::uint64_t seed;
  int grid;  // AA sample grid side, ceil(sqrt(samples))
};

void render_row(const RowContext& ctx, int row, ImageBuffer& out) {
  const RenderStyle& style = *ctx.style;
  const double half_line = ctx.court->line_width / 2.0;
  const int samples = style.antialias_samples;
  Rng noise_rng(Rng::mix(ctx.seed, static_cast<std::uint64_t>(row)));
  for (int col = 0; col < out.width; ++col) {
    int acc_r = 0, acc_g = 0, acc_b = 0;
    for (int s = 0; s < samples; ++s) {
      const double ox = (s % ctx.grid + 0.5) / ctx.grid;
      const double oy = (s / ctx.grid + 0.5) / ctx.grid;
      const Vec2 px{col + ox, row + oy};
      Rgb8 c = style.background_color;
      if (auto floor_pt = backproject_pixel(*ctx.rig, *ctx.pose, px)) {
        c = geometry::distance_to_nearest_marking(*ctx.court, *floor_pt) <=
                    half_line
                ? style.line_color
                : style.floor_color;
      }
      acc_r += c.r;
      acc_g += c.g;
      acc_b += c.b;
    }
    // Integer rounding keeps the averaged pixel deterministic.
    Rgb8 c{static_cast<std::uint8_t>((acc_r + samples / 2) / samples),
           static_cast<std::uint8_t>((acc_g + samples / 2) / samples),
           static_cast<std::uint8_t>((acc_b + samples / 2) / samples)};
    if (style.noise_std > 0.0) {
      auto perturb = [&](std::uint8_t v) {
        const long n = std::lround(noise_rng.gaussian(0.0, style.noise_std));
        return static_cast<std::uint8_t>(std::clamp<long>(v + n, 0, 255));
      };
      c = {perturb(c.r), perturb(c.g), perturb(c.b)};
    }
    out.set_pixel(row, col, c);
  }
}

void render_rows_serial(const RowContext& ctx, ImageBuffer& out) {
  for (int row = 0; row < out.height; ++row) render_row(ctx, row, out);
}

void render_rows_omp(const RowContext& ctx, ImageBuffer& out) {
#pragma omp parallel for schedule(static)
  for (int row = 0; row < out.height; ++row) render_row(ctx, row, out);
}

}  // namespace

ImageBuffer render_view(const CourtSpec& court, const CameraRig& rig,
                        const Pose2D& pose, const RenderStyle& style,
                        std::uint64_t seed) {
  geometry::validate(court);
  geometry::validate(rig);
  validate(style);
  ImageBuffer out = ImageBuffer::rgb(rig.image_width, rig.image_height);
  RowContext ctx{&court, &rig, &pose, &style, seed,
                 static_cast<int>(
                     std::ceil(std::sqrt(double(style.antialias_samples))))};
  if (par::parallel_enabled())
    render_rows_omp(ctx, out);
  else
    render_rows_serial(ctx, out);
  return out;
}

}  // namespace courtloc::render

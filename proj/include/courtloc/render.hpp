#pragma once

#include <cstdint>
#include <optional>

#include "courtloc/geometry.hpp"
#include "courtloc/image.hpp"

namespace courtloc::render {

struct RenderStyle {
  Rgb8 floor_color = {45, 110, 60};
  Rgb8 line_color = {255, 255, 255};
  Rgb8 background_color = {20, 20, 20};  // above-horizon fill
  double noise_std = 0.0;                // gray levels
  int antialias_samples = 4;
};

void validate(const RenderStyle& style);  // throws DomainError

// Floor intersection of the viewing ray through a (sub-)pixel, or nothing
// when the ray points at or above the horizon. Inverse of
// geometry::project_floor_point.
std::optional<geometry::Vec2> backproject_pixel(const geometry::CameraRig& rig,
                                                const geometry::Pose2D& pose,
                                                geometry::Vec2 pixel);

// Image row of the horizon for a rig; rays through rows above it never reach
// the floor.
double horizon_row(const geometry::CameraRig& rig);

// Synthesizes the camera view of the court floor for a pose. Deterministic
// for fixed inputs and seed, independent of the thread count.
ImageBuffer render_view(const geometry::CourtSpec& court,
                        const geometry::CameraRig& rig,
                        const geometry::Pose2D& pose, const RenderStyle& style,
                        std::uint64_t seed);

}  // namespace courtloc::render

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "courtloc/errors.hpp"
#include "courtloc/rng.hpp"

namespace courtloc::geometry {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

struct Segment {
  Vec2 p0;
  Vec2 p1;
};

// Circular arc from start_angle to end_angle (radians, counter-clockwise,
// end > start, span at most 2*pi). A full circle is (0, 2*pi).
struct Arc {
  Vec2 center;
  double radius = 0.0;
  double start_angle = 0.0;
  double end_angle = 0.0;
  double span() const { return end_angle - start_angle; }
};

using LineMark = std::variant<Segment, Arc>;

// Court frame: origin at center, x along the long axis, y along the short
// axis. All modules share this frame.
struct CourtSpec {
  double length = 15.0;      // extent along x, meters
  double width = 8.0;        // extent along y, meters
  double line_width = 0.05;  // painted line width, meters
  std::vector<LineMark> markings;

  double half_length() const { return length / 2.0; }
  double half_width() const { return width / 2.0; }
};

// Boundary rectangle, half-court line, center circle, and two three-point
// arcs clipped at the short edges.
CourtSpec default_court();

void validate(const CourtSpec& court);  // throws DomainError

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;  // radians, 0 faces +x
};

// Normalizes an angle into [-pi, pi).
double normalize_angle(double radians);

// Pinhole camera rigidly mounted on the robot at mount_height above the
// floor, pitched down by mount_pitch, looking along the robot's +x axis.
struct CameraRig {
  double fx = 500.0;
  double fy = 500.0;
  double cx = 320.0;
  double cy = 240.0;
  int image_width = 640;
  int image_height = 480;
  double mount_height = 0.5;  // meters
  // Chosen so the horizon sits at the crop row used downstream
  // (cy - fy*tan(pitch) ~ crop row for both resolution profiles).
  double mount_pitch = 0.08;  // radians, downward positive
};

void validate(const CameraRig& rig);  // throws DomainError

// Pinhole projection of a floor point into the image: court frame -> robot
// frame -> camera frame -> perspective divide -> pixel. Returns nothing when
// the point is behind the camera or outside the frame.
std::optional<Vec2> project_floor_point(const CameraRig& rig, const Pose2D& pose,
                                        Vec2 point);

// Exact Euclidean distance from a point to the nearest marking centerline.
double distance_to_mark(const LineMark& mark, Vec2 point);
double distance_to_nearest_marking(const CourtSpec& court, Vec2 point);

struct YawMode {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  double fixed_value = 0.0;

  static YawMode fixed(double yaw) { return {Kind::Fixed, yaw}; }
  static YawMode uniform() { return {Kind::Uniform, 0.0}; }
};

// Margin kept between sampled positions and the court boundary.
inline constexpr double kPoseMargin = 0.3;

// (x, y) uniform over the court rectangle inset by kPoseMargin; yaw per mode.
Pose2D sample_pose(const CourtSpec& court, Rng& rng, YawMode yaw_mode);
Pose2D sample_pose(const CourtSpec& court, std::uint64_t seed, YawMode yaw_mode);

// Court definition file: `length|width|line_width <v>` plus one marking per
// line, `segment x0 y0 x1 y1` or `arc cx cy r a0 a1` (meters/radians).
// Blank lines and lines starting with '#' are ignored.
CourtSpec parse_court(std::istream& in, const std::string& name = "<court>");
CourtSpec load_court_file(const std::filesystem::path& path);
std::string court_to_text(const CourtSpec& court);
std::uint64_t court_hash(const CourtSpec& court);  // FNV-1a of court_to_text

}  // namespace courtloc::geometry

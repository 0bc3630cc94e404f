#include "courtloc/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace courtloc::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

// Camera basis in robot coordinates (x forward, y left, z up). The triad is
// right-handed with x_cam = right, y_cam = down, z_cam = forward (optical
// axis), pitched down by `pitch` about the right axis.
struct CameraFrame {
  double fwd_x, fwd_z;  // forward = (cos p, 0, -sin p)
  double dwn_x, dwn_z;  // down    = (-sin p, 0, -cos p)

  explicit CameraFrame(double pitch)
      : fwd_x(std::cos(pitch)),
        fwd_z(-std::sin(pitch)),
        dwn_x(-std::sin(pitch)),
        dwn_z(-std::cos(pitch)) {}
};

Vec2 court_to_robot(const Pose2D& pose, Vec2 p) {
  const double tx = p.x - pose.x;
  const double ty = p.y - pose.y;
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  return {c * tx + s * ty, -s * tx + c * ty};
}

double bound_abs(double lo, double hi) { return std::max(std::abs(lo), std::abs(hi)); }

// Axis-aligned extent of an arc along one axis, accounting for which cardinal
// directions the angular span covers.
bool arc_covers_angle(const Arc& arc, double angle) {
  double a = angle;
  while (a < arc.start_angle) a += 2.0 * kPi;
  return a <= arc.end_angle;
}

void arc_extent(const Arc& arc, double& min_x, double& max_x, double& min_y,
                double& max_y) {
  const Vec2 p0 = {arc.center.x + arc.radius * std::cos(arc.start_angle),
                   arc.center.y + arc.radius * std::sin(arc.start_angle)};
  const Vec2 p1 = {arc.center.x + arc.radius * std::cos(arc.end_angle),
                   arc.center.y + arc.radius * std::sin(arc.end_angle)};
  min_x = std::min(p0.x, p1.x);
  max_x = std::max(p0.x, p1.x);
  min_y = std::min(p0.y, p1.y);
  max_y = std::max(p0.y, p1.y);
  if (arc_covers_angle(arc, 0.0)) max_x = arc.center.x + arc.radius;
  if (arc_covers_angle(arc, kPi / 2.0)) max_y = arc.center.y + arc.radius;
  if (arc_covers_angle(arc, kPi)) min_x = arc.center.x - arc.radius;
  if (arc_covers_angle(arc, 3.0 * kPi / 2.0)) min_y = arc.center.y - arc.radius;
}

double point_segment_distance(Vec2 p, const Segment& seg) {
  const Vec2 d = seg.p1 - seg.p0;
  const double len2 = d.dot(d);
  if (len2 == 0.0) return (p - seg.p0).norm();
  double t = (p - seg.p0).dot(d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (seg.p0 + d * t)).norm();
}

double point_arc_distance(Vec2 p, const Arc& arc) {
  const Vec2 rel = p - arc.center;
  const double r = rel.norm();
  if (arc.span() >= 2.0 * kPi - 1e-12) return std::abs(r - arc.radius);
  const double angle = std::atan2(rel.y, rel.x);  // [-pi, pi]
  if (arc_covers_angle(arc, angle)) return std::abs(r - arc.radius);
  const Vec2 e0 = {arc.center.x + arc.radius * std::cos(arc.start_angle),
                   arc.center.y + arc.radius * std::sin(arc.start_angle)};
  const Vec2 e1 = {arc.center.x + arc.radius * std::cos(arc.end_angle),
                   arc.center.y + arc.radius * std::sin(arc.end_angle)};
  return std::min((p - e0).norm(), (p - e1).norm());
}

}  // namespace

CourtSpec default_court() {
  CourtSpec court;
  const double hx = court.half_length();  // 7.5
  const double hy = court.half_width();   // 4.0

  // Boundary rectangle.
  court.markings.push_back(Segment{{-hx, -hy}, {hx, -hy}});
  court.markings.push_back(Segment{{hx, -hy}, {hx, hy}});
  court.markings.push_back(Segment{{hx, hy}, {-hx, hy}});
  court.markings.push_back(Segment{{-hx, hy}, {-hx, -hy}});
  // Half-court line.
  court.markings.push_back(Segment{{0.0, -hy}, {0.0, hy}});
  // Center circle.
  court.markings.push_back(Arc{{0.0, 0.0}, 1.8, 0.0, 2.0 * kPi});

  // Three-point arcs, centered 1.575 m inside each short edge and clipped
  // where they meet the baseline (|x| = half length).
  const double r3 = 3.0;
  const double cx = hx - 1.575;  // 5.925
  const double clip = std::acos((hx - cx) / r3);
  // Right arc bulges toward center court (covers angle pi).
  court.markings.push_back(Arc{{cx, 0.0}, r3, clip, 2.0 * kPi - clip});
  // Left arc bulges toward center court (covers angle 0).
  court.markings.push_back(Arc{{-cx, 0.0}, r3, -(kPi - clip), kPi - clip});
  return court;
}

void validate(const CourtSpec& court) {
  if (!(court.length > 0.0) || !(court.width > 0.0) || !(court.line_width > 0.0))
    throw DomainError("court length, width and line_width must be positive");
  const double bx = court.half_length() + court.line_width;
  const double by = court.half_width() + court.line_width;
  int index = 0;
  for (const auto& mark : court.markings) {
    double min_x, max_x, min_y, max_y;
    if (const auto* seg = std::get_if<Segment>(&mark)) {
      if ((seg->p1 - seg->p0).norm() == 0.0)
        throw DomainError("marking " + std::to_string(index) +
                          ": segment endpoints must be distinct");
      min_x = std::min(seg->p0.x, seg->p1.x);
      max_x = std::max(seg->p0.x, seg->p1.x);
      min_y = std::min(seg->p0.y, seg->p1.y);
      max_y = std::max(seg->p0.y, seg->p1.y);
    } else {
      const auto& arc = std::get<Arc>(mark);
      if (!(arc.radius > 0.0))
        throw DomainError("marking " + std::to_string(index) +
                          ": arc radius must be positive");
      const double span = arc.span();
      if (!(span > 0.0) || span > 2.0 * kPi + 1e-12)
        throw DomainError("marking " + std::to_string(index) +
                          ": arc span must be in (0, 2*pi]");
      arc_extent(arc, min_x, max_x, min_y, max_y);
    }
    if (bound_abs(min_x, max_x) > bx + 1e-9 || bound_abs(min_y, max_y) > by + 1e-9)
      throw DomainError("marking " + std::to_string(index) +
                        " extends outside the court rectangle");
    ++index;
  }
}

double normalize_angle(double radians) {
  double a = std::fmod(radians + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

void validate(const CameraRig& rig) {
  if (!(rig.fx > 0.0) || !(rig.fy > 0.0))
    throw DomainError("focal lengths must be positive");
  if (rig.image_width <= 0 || rig.image_height <= 0)
    throw DomainError("image size must be positive");
  if (rig.cx < 0.0 || rig.cx >= rig.image_width || rig.cy < 0.0 ||
      rig.cy >= rig.image_height)
    throw DomainError("principal point must lie inside the image");
  if (!(rig.mount_height > 0.0))
    throw DomainError("mount height must be positive");
  if (rig.mount_pitch < 0.0 || rig.mount_pitch >= kPi / 2.0)
    throw DomainError("mount pitch must be in [0, pi/2)");
}

std::optional<Vec2> project_floor_point(const CameraRig& rig, const Pose2D& pose,
                                        Vec2 point) {
  const Vec2 pr = court_to_robot(pose, point);
  // Vector from camera center to the floor point, robot coordinates.
  const double vx = pr.x, vy = pr.y, vz = -rig.mount_height;
  const CameraFrame cam(rig.mount_pitch);
  const double xc = -vy;  // right = (0, -1, 0)
  const double yc = cam.dwn_x * vx + cam.dwn_z * vz;
  const double zc = cam.fwd_x * vx + cam.fwd_z * vz;
  if (zc <= 1e-9) return std::nullopt;
  const double u = rig.cx + rig.fx * xc / zc;
  const double v = rig.cy + rig.fy * yc / zc;
  if (u < 0.0 || u >= rig.image_width || v < 0.0 || v >= rig.image_height)
    return std::nullopt;
  return Vec2{u, v};
}

double distance_to_mark(const LineMark& mark, Vec2 point) {
  if (const auto* seg = std::get_if<Segment>(&mark))
    return point_segment_distance(point, *seg);
  return point_arc_distance(point, std::get<Arc>(mark));
}

double distance_to_nearest_marking(const CourtSpec& court, Vec2 point) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& mark : court.markings)
    best = std::min(best, distance_to_mark(mark, point));
  return best;
}

Pose2D sample_pose(const CourtSpec& court, Rng& rng, YawMode yaw_mode) {
  const double hx = court.half_length() - kPoseMargin;
  const double hy = court.half_width() - kPoseMargin;
  Pose2D pose;
  pose.x = rng.uniform(-hx, hx);
  pose.y = rng.uniform(-hy, hy);
  pose.yaw = yaw_mode.kind == YawMode::Kind::Fixed
                 ? normalize_angle(yaw_mode.fixed_value)
                 : rng.uniform(-kPi, kPi);
  return pose;
}

Pose2D sample_pose(const CourtSpec& court, std::uint64_t seed, YawMode yaw_mode) {
  Rng rng(seed);
  return sample_pose(court, rng, yaw_mode);
}

namespace {

double parse_double(const std::string& token, const std::string& source, int line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError(source, line, "expected a number, got '" + token + "'");
  }
  if (used != token.size())
    throw ParseError(source, line, "trailing characters in number '" + token + "'");
  return value;
}

}  // namespace

CourtSpec parse_court(std::istream& in, const std::string& name) {
  CourtSpec court;
  court.markings.clear();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    std::vector<std::string> args;
    std::string tok;
    while (ls >> tok) args.push_back(tok);
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError(name, line_no,
                         key + " expects " + std::to_string(n) + " values, got " +
                             std::to_string(args.size()));
    };
    if (key == "length" || key == "width" || key == "line_width") {
      need(1);
      const double v = parse_double(args[0], name, line_no);
      if (key == "length")
        court.length = v;
      else if (key == "width")
        court.width = v;
      else
        court.line_width = v;
    } else if (key == "segment") {
      need(4);
      Segment seg;
      seg.p0 = {parse_double(args[0], name, line_no),
                parse_double(args[1], name, line_no)};
      seg.p1 = {parse_double(args[2], name, line_no),
                parse_double(args[3], name, line_no)};
      court.markings.push_back(seg);
    } else if (key == "arc") {
      need(5);
      Arc arc;
      arc.center = {parse_double(args[0], name, line_no),
                    parse_double(args[1], name, line_no)};
      arc.radius = parse_double(args[2], name, line_no);
      arc.start_angle = parse_double(args[3], name, line_no);
      arc.end_angle = parse_double(args[4], name, line_no);
      court.markings.push_back(arc);
    } else {
      throw ParseError(name, line_no, "unknown directive '" + key + "'");
    }
  }
  validate(court);
  return court;
}

CourtSpec load_court_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open court file: " + path.string());
  return parse_court(in, path.string());
}

std::string court_to_text(const CourtSpec& court) {
  std::ostringstream out;
  out.precision(17);
  out << "length " << court.length << "\n";
  out << "width " << court.width << "\n";
  out << "line_width " << court.line_width << "\n";
  for (const auto& mark : court.markings) {
    if (const auto* seg = std::get_if<Segment>(&mark)) {
      out << "segment " << seg->p0.x << " " << seg->p0.y << " " << seg->p1.x
          << " " << seg->p1.y << "\n";
    } else {
      const auto& arc = std::get<Arc>(mark);
      out << "arc " << arc.center.x << " " << arc.center.y << " " << arc.radius
          << " " << arc.start_angle << " " << arc.end_angle << "\n";
    }
  }
  return out.str();
}

std::uint64_t court_hash(const CourtSpec& court) {
  const std::string text = court_to_text(court);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace courtloc::geometry

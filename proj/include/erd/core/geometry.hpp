#pragma once

#include <cmath>
#include <string_view>

namespace erd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

/// Agent pose. Heading is degrees counterclockwise from +x, kept in [0, 360).
/// z, pitch and roll are carried but stay 0 for the ground agent.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double heading = 0.0;
  double pitch = 0.0;
  double roll = 0.0;

  Point2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Axis-aligned rectangle, bounds inclusive.
struct Rect {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  bool contains(Point2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  Point2 center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
  double distance_to(Point2 p) const {
    const double dx = p.x < x0 ? x0 - p.x : (p.x > x1 ? p.x - x1 : 0.0);
    const double dy = p.y < y0 ? y0 - p.y : (p.y > y1 ? p.y - y1 : 0.0);
    return std::hypot(dx, dy);
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class Wall { North, South, East, West };

std::string_view to_string(Wall wall);
/// Accepts "N", "S", "E", "W" (case-sensitive). Returns false on anything else.
bool parse_wall(std::string_view text, Wall& out);

/// Depth of the exit strip measured from its wall.
inline constexpr double kExitDepth = 1.0;

/// Single rectangular room spanning [0, width] x [0, depth]. The exit is a
/// strip kExitDepth deep along `exit_wall`, centred `exit_center_offset`
/// metres along that wall (measured from the wall's low-coordinate end).
struct RoomGeometry {
  double width = 10.0;
  double depth = 10.0;
  Wall exit_wall = Wall::East;
  double exit_center_offset = 5.0;
  double exit_half_width = 1.0;

  double wall_length(Wall wall) const {
    return (wall == Wall::North || wall == Wall::South) ? width : depth;
  }
  Rect exit_region() const;
  Point2 clamp(Point2 p) const;
  bool contains(Point2 p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= depth; }
  friend bool operator==(const RoomGeometry&, const RoomGeometry&) = default;
};

/// Exact cos/sin for headings in degrees; multiples of 90 come out as exact 0/±1.
double cos_deg(double degrees);
double sin_deg(double degrees);

/// Wrap into [0, 360).
double wrap_heading(double degrees);

/// Signed smallest difference target - from, in (-180, 180].
double heading_difference(double from, double target);

}  // namespace erd

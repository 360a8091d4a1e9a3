#include "erd/core/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace erd {

std::string_view to_string(Wall wall) {
  switch (wall) {
    case Wall::North: return "N";
    case Wall::South: return "S";
    case Wall::East: return "E";
    case Wall::West: return "W";
  }
  return "?";
}

bool parse_wall(std::string_view text, Wall& out) {
  if (text == "N") out = Wall::North;
  else if (text == "S") out = Wall::South;
  else if (text == "E") out = Wall::East;
  else if (text == "W") out = Wall::West;
  else return false;
  return true;
}

Rect RoomGeometry::exit_region() const {
  const double lo = exit_center_offset - exit_half_width;
  const double hi = exit_center_offset + exit_half_width;
  switch (exit_wall) {
    case Wall::North: return {lo, hi, depth - kExitDepth, depth};
    case Wall::South: return {lo, hi, 0.0, kExitDepth};
    case Wall::East: return {width - kExitDepth, width, lo, hi};
    case Wall::West: return {0.0, kExitDepth, lo, hi};
  }
  return {};
}

Point2 RoomGeometry::clamp(Point2 p) const {
  return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, depth)};
}

double wrap_heading(double degrees) {
  double h = std::fmod(degrees, 360.0);
  if (h < 0.0) h += 360.0;
  // fmod of a tiny negative can round up to exactly 360
  if (h >= 360.0) h = 0.0;
  return h;
}

double heading_difference(double from, double target) {
  double d = std::fmod(target - from, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

namespace {

// Reduce to [0, 90) plus a quadrant so the axis directions are exact.
void quadrant_reduce(double degrees, int& quadrant, double& rest) {
  const double h = wrap_heading(degrees);
  quadrant = static_cast<int>(h / 90.0);
  if (quadrant > 3) quadrant = 3;
  rest = h - 90.0 * quadrant;
}

}  // namespace

double cos_deg(double degrees) {
  int q = 0;
  double rest = 0.0;
  quadrant_reduce(degrees, q, rest);
  const double r = rest * std::numbers::pi / 180.0;
  const double c = rest == 0.0 ? 1.0 : std::cos(r);
  const double s = rest == 0.0 ? 0.0 : std::sin(r);
  switch (q) {
    case 0: return c;
    case 1: return -s;
    case 2: return -c;
    default: return s;
  }
}

double sin_deg(double degrees) {
  int q = 0;
  double rest = 0.0;
  quadrant_reduce(degrees, q, rest);
  const double r = rest * std::numbers::pi / 180.0;
  const double c = rest == 0.0 ? 1.0 : std::cos(r);
  const double s = rest == 0.0 ? 0.0 : std::sin(r);
  switch (q) {
    case 0: return s;
    case 1: return c;
    case 2: return -s;
    default: return -c;
  }
}

}  // namespace erd

#pragma once

#include "vroad/geometry.hpp"
#include "vroad/route_following.hpp"

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace vroad {

/// Rasterized world. Anything outside the grid counts as occupied.
class OccupancyGrid {
 public:
  OccupancyGrid(double resolution, int width, int height, Point2 origin = Point2::Zero());

  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const Point2& origin() const { return origin_; }

  bool in_bounds(int cx, int cy) const { return cx >= 0 && cy >= 0 && cx < width_ && cy < height_; }
  bool occupied_cell(int cx, int cy) const;
  bool occupied(const Point2& p) const;
  void set_cell(int cx, int cy, bool value);

  /// Cell containing `p` (may be out of bounds).
  Eigen::Vector2i cell_of(const Point2& p) const;
  std::size_t linear_index(int cx, int cy) const { return static_cast<std::size_t>(cy) * width_ + cx; }
  bool occupied_linear(std::size_t i) const { return cells_[i] != 0; }
  void set_linear(std::size_t i, bool value) { cells_[i] = value ? 1 : 0; }

 private:
  double resolution_;
  int width_;
  int height_;
  Point2 origin_;
  std::vector<std::uint8_t> cells_;
};

/// Axis-aligned box with (x, y) at its minimum corner.
struct RectShape {
  double x = 0, y = 0, w = 0, h = 0;
};

struct CircleShape {
  double x = 0, y = 0, r = 0;
};

using Shape = std::variant<RectShape, CircleShape>;

/// A shape, optionally looping along closed waypoints at constant speed.
/// For a moving shape the waypoints give successive positions of its
/// reference point (circle centre, rectangle minimum corner).
struct Obstacle {
  Shape shape;
  std::vector<Point2> waypoints;
  double speed = 0.0;

  bool dynamic() const { return waypoints.size() >= 1 && speed > 0.0; }
  /// Shape placed where it is at simulated time `t` seconds.
  Shape at_time(double t) const;
};

/// Calls `fn(linear_index)` for every grid cell the shape overlaps.
template <typename Fn>
void for_each_covered_cell(const OccupancyGrid& grid, const Shape& shape, Fn&& fn);

void stamp(OccupancyGrid& grid, const Shape& shape);

struct Environment {
  double resolution = 0.05;
  int width = 0;
  int height = 0;
  Point2 origin = Point2::Zero();
  std::vector<Obstacle> obstacles;

  /// Grid with every obstacle drawn at time `t`.
  OccupancyGrid rasterize(double t = 0.0) const;
};

/// Per-run world that re-draws the moving obstacles each tick on top of the
/// static raster.
class DynamicWorld {
 public:
  explicit DynamicWorld(const Environment& env);

  void advance_to(double t);
  const OccupancyGrid& grid() const { return grid_; }

 private:
  const Environment* env_;
  OccupancyGrid grid_;
  std::vector<std::size_t> stamped_;
};

struct DepthCameraModel {
  double half_fov = deg2rad(30.0);
  double max_depth = 4.0;
  double clear_depth = 1.5;
  double corridor_halfwidth = 0.35;
  double angular_step = deg2rad(5.0);

  void validate() const;
};

struct PoseNoiseModel {
  double position_sigma = 0.03;
  double heading_sigma = 0.01;
  std::uint64_t seed = 0;
};

/// Distance along the ray to the first occupied cell, or `max_range` when
/// clear. Exact cell-by-cell traversal; 0 when starting inside an obstacle.
double ray_cast(const OccupancyGrid& grid, const Point2& from, GlobalAngle angle, double max_range);

/// Relative headings on the camera's angular lattice whose corridor (centre
/// ray plus two rays offset by the corridor half-width) is clear for
/// `clear_depth`. Returned in ascending angle order.
CandidateDirections candidate_directions(const OccupancyGrid& grid, const Pose& pose, const DepthCameraModel& cam);

/// Minimum range over five rays spanning the ultrasonic cone, clamped to
/// [0.03, 4.25] m.
UltrasonicReading ultrasonic_reading(const OccupancyGrid& grid, const Pose& pose, double half_fov_deg = 7.5);

/// Independent random stream for (seed, tick, stream id).
std::mt19937_64 tick_stream(std::uint64_t seed, std::uint64_t tick, std::uint32_t stream);

/// Localization stand-in: the true pose plus Gaussian noise drawn from the
/// (seed, tick) stream.
Pose noisy_pose(const Pose& true_pose, const PoseNoiseModel& noise, std::uint64_t tick);

// ---------------------------------------------------------------------------

template <typename Fn>
void for_each_covered_cell(const OccupancyGrid& grid, const Shape& shape, Fn&& fn) {
  const double res = grid.resolution();
  auto clamp_x = [&](int c) { return std::clamp(c, 0, grid.width() - 1); };
  auto clamp_y = [&](int c) { return std::clamp(c, 0, grid.height() - 1); };
  if (grid.width() == 0 || grid.height() == 0) return;

  if (const auto* r = std::get_if<RectShape>(&shape)) {
    const Eigen::Vector2i lo = grid.cell_of(Point2(r->x, r->y));
    // Cells whose interiors overlap the box; a box edge lying on a cell edge does not spill over.
    const double hx = (r->x + r->w - grid.origin().x()) / res;
    const double hy = (r->y + r->h - grid.origin().y()) / res;
    const int cx_hi = static_cast<int>(std::ceil(hx)) - 1;
    const int cy_hi = static_cast<int>(std::ceil(hy)) - 1;
    if (cx_hi < 0 || cy_hi < 0 || lo.x() >= grid.width() || lo.y() >= grid.height()) return;
    for (int cy = clamp_y(lo.y()); cy <= clamp_y(cy_hi); ++cy) {
      for (int cx = clamp_x(lo.x()); cx <= clamp_x(cx_hi); ++cx) fn(grid.linear_index(cx, cy));
    }
    return;
  }
  const auto& c = std::get<CircleShape>(shape);
  const Eigen::Vector2i lo = grid.cell_of(Point2(c.x - c.r, c.y - c.r));
  const Eigen::Vector2i hi = grid.cell_of(Point2(c.x + c.r, c.y + c.r));
  if (hi.x() < 0 || hi.y() < 0 || lo.x() >= grid.width() || lo.y() >= grid.height()) return;
  for (int cy = clamp_y(lo.y()); cy <= clamp_y(hi.y()); ++cy) {
    for (int cx = clamp_x(lo.x()); cx <= clamp_x(hi.x()); ++cx) {
      const double x0 = grid.origin().x() + cx * res;
      const double y0 = grid.origin().y() + cy * res;
      const double nx = std::clamp(c.x, x0, x0 + res);
      const double ny = std::clamp(c.y, y0, y0 + res);
      if (std::hypot(nx - c.x, ny - c.y) < c.r) fn(grid.linear_index(cx, cy));
    }
  }
}

}  // namespace vroad

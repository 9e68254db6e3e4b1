#include "vroad/sensors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vroad {

OccupancyGrid::OccupancyGrid(double resolution, int width, int height, Point2 origin)
    : resolution_(resolution), width_(width), height_(height), origin_(std::move(origin)) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  if (width < 0 || height < 0) throw std::invalid_argument("grid dimensions must be non-negative");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

bool OccupancyGrid::occupied_cell(int cx, int cy) const {
  if (!in_bounds(cx, cy)) return true;
  return cells_[linear_index(cx, cy)] != 0;
}

bool OccupancyGrid::occupied(const Point2& p) const {
  const Eigen::Vector2i c = cell_of(p);
  return occupied_cell(c.x(), c.y());
}

void OccupancyGrid::set_cell(int cx, int cy, bool value) {
  if (!in_bounds(cx, cy)) throw std::out_of_range("cell outside the grid");
  cells_[linear_index(cx, cy)] = value ? 1 : 0;
}

Eigen::Vector2i OccupancyGrid::cell_of(const Point2& p) const {
  const Point2 local = (p - origin_) / resolution_;
  return {static_cast<int>(std::floor(local.x())), static_cast<int>(std::floor(local.y()))};
}

Shape Obstacle::at_time(double t) const {
  if (!dynamic()) return shape;

  double loop = 0.0;
  const std::size_t n = waypoints.size();
  for (std::size_t i = 0; i < n; ++i) loop += (waypoints[(i + 1) % n] - waypoints[i]).norm();

  Point2 at = waypoints.front();
  if (loop > 0.0) {
    double s = std::fmod(speed * t, loop);
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = waypoints[i];
      const Point2& b = waypoints[(i + 1) % n];
      const double len = (b - a).norm();
      if (s <= len) {
        at = len > 0.0 ? Point2(a + (s / len) * (b - a)) : a;
        break;
      }
      s -= len;
    }
  }
  return std::visit(
      [&](auto moved) -> Shape {
        moved.x = at.x();
        moved.y = at.y();
        return moved;
      },
      shape);
}

void stamp(OccupancyGrid& grid, const Shape& shape) {
  for_each_covered_cell(grid, shape, [&](std::size_t i) { grid.set_linear(i, true); });
}

OccupancyGrid Environment::rasterize(double t) const {
  OccupancyGrid grid(resolution, width, height, origin);
  for (const auto& o : obstacles) stamp(grid, o.at_time(t));
  return grid;
}

DynamicWorld::DynamicWorld(const Environment& env) : env_(&env), grid_(env.resolution, env.width, env.height, env.origin) {
  for (const auto& o : env.obstacles) {
    if (!o.dynamic()) stamp(grid_, o.shape);
  }
  advance_to(0.0);
}

void DynamicWorld::advance_to(double t) {
  for (std::size_t i : stamped_) grid_.set_linear(i, false);
  stamped_.clear();
  for (const auto& o : env_->obstacles) {
    if (!o.dynamic()) continue;
    for_each_covered_cell(grid_, o.at_time(t), [&](std::size_t i) {
      if (!grid_.occupied_linear(i)) {
        grid_.set_linear(i, true);
        stamped_.push_back(i);
      }
    });
  }
}

void DepthCameraModel::validate() const {
  const bool ok = half_fov > 0.0 && max_depth > 0.0 && clear_depth > 0.0 && corridor_halfwidth > 0.0 &&
                  angular_step > 0.0 && angular_step < half_fov;
  if (!ok) throw std::invalid_argument("depth camera values must be positive with angular_step < half_fov");
}

double ray_cast(const OccupancyGrid& grid, const Point2& from, GlobalAngle angle, double max_range) {
  if (!(max_range > 0.0)) throw std::invalid_argument("ray range must be positive");
  Eigen::Vector2i cell = grid.cell_of(from);
  if (grid.occupied_cell(cell.x(), cell.y())) return 0.0;

  const double res = grid.resolution();
  const Point2 dir(std::cos(angle.radians()), std::sin(angle.radians()));
  const Point2 local = (from - grid.origin()) / res;
  constexpr double inf = std::numeric_limits<double>::infinity();

  const int step_x = dir.x() > 0.0 ? 1 : -1;
  const int step_y = dir.y() > 0.0 ? 1 : -1;
  // Distances (meters) along the ray to the next vertical / horizontal cell boundary.
  double next_x = dir.x() != 0.0 ? ((cell.x() + (step_x > 0 ? 1 : 0)) - local.x()) * res / dir.x() : inf;
  double next_y = dir.y() != 0.0 ? ((cell.y() + (step_y > 0 ? 1 : 0)) - local.y()) * res / dir.y() : inf;
  const double delta_x = dir.x() != 0.0 ? res / std::abs(dir.x()) : inf;
  const double delta_y = dir.y() != 0.0 ? res / std::abs(dir.y()) : inf;

  while (true) {
    double t;
    if (next_x < next_y) {
      t = next_x;
      next_x += delta_x;
      cell.x() += step_x;
    } else {
      t = next_y;
      next_y += delta_y;
      cell.y() += step_y;
    }
    if (t >= max_range) return max_range;
    if (grid.occupied_cell(cell.x(), cell.y())) return std::max(0.0, t);
  }
}

CandidateDirections candidate_directions(const OccupancyGrid& grid, const Pose& pose, const DepthCameraModel& cam) {
  const int k_max = static_cast<int>(std::floor(cam.half_fov / cam.angular_step + 1e-9));
  const double range = std::min(cam.clear_depth, cam.max_depth);
  CandidateDirections out;
  for (int k = -k_max; k <= k_max; ++k) {
    const RelativeAngle theta(k * cam.angular_step);
    const GlobalAngle heading = pose.heading + theta;
    const Point2 normal(-std::sin(heading.radians()), std::cos(heading.radians()));
    bool clear = true;
    for (double offset : {0.0, cam.corridor_halfwidth, -cam.corridor_halfwidth}) {
      if (ray_cast(grid, pose.position + offset * normal, heading, range) < range) {
        clear = false;
        break;
      }
    }
    if (clear) out.push_back(theta);
  }
  return out;
}

UltrasonicReading ultrasonic_reading(const OccupancyGrid& grid, const Pose& pose, double half_fov_deg) {
  double nearest = kUltrasonicMax;
  for (double frac : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const GlobalAngle dir = pose.heading + RelativeAngle::from_degrees(frac * half_fov_deg);
    nearest = std::min(nearest, ray_cast(grid, pose.position, dir, kUltrasonicMax));
  }
  return UltrasonicReading(nearest);
}

std::mt19937_64 tick_stream(std::uint64_t seed, std::uint64_t tick, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tick), static_cast<std::uint32_t>(tick >> 32), stream};
  return std::mt19937_64(seq);
}

Pose noisy_pose(const Pose& true_pose, const PoseNoiseModel& noise, std::uint64_t tick) {
  if (noise.position_sigma == 0.0 && noise.heading_sigma == 0.0) return true_pose;
  auto rng = tick_stream(noise.seed, tick, 0x706f7365u);
  std::normal_distribution<double> unit(0.0, 1.0);
  const double dx = unit(rng) * noise.position_sigma;
  const double dy = unit(rng) * noise.position_sigma;
  const double dh = unit(rng) * noise.heading_sigma;
  return Pose{true_pose.position + Point2(dx, dy), GlobalAngle(true_pose.heading.radians() + dh)};
}

}  // namespace vroad

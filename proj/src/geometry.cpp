#include "vroad/geometry.hpp"

#include "vroad/errors.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace vroad {

GlobalAngle::GlobalAngle(double radians) {
  if (!std::isfinite(radians)) throw std::invalid_argument("angle must be finite");
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // -tiny + 2pi can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  value_ = r;
}

double wrap_relative(double raw) {
  if (!std::isfinite(raw)) throw std::invalid_argument("angle must be finite");
  double r = std::fmod(raw, kTwoPi);
  if (r > kPi) {
    r -= kTwoPi;
  } else if (r <= -kPi) {
    r += kTwoPi;
  }
  return r;
}

RelativeAngle::RelativeAngle(double radians) : value_(wrap_relative(radians)) {}

GlobalAngle normalize_global(double raw) { return GlobalAngle(raw); }

RelativeAngle angular_diff(GlobalAngle a, GlobalAngle b) {
  return RelativeAngle(a.radians() - b.radians());
}

GlobalAngle expected_angle(const Point2& current, const Point2& sub_goal) {
  const double dx = sub_goal.x() - current.x();
  const double dy = sub_goal.y() - current.y();
  if (dx == 0.0 && dy == 0.0) {
    throw DegenerateDirection("expected angle undefined: current position equals sub-goal");
  }
  // The explicit quadrant table collapses to atan2 once shifted into [0, 2pi).
  return GlobalAngle(std::atan2(dy, dx));
}

Polyline::Polyline(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("polyline needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) {
      throw std::invalid_argument("polyline point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && (points_[i] - points_[i - 1]).norm() < kCoincidentEps) {
      throw std::invalid_argument("polyline points " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) + " coincide");
    }
  }
}

double Polyline::length() const { return polyline_arc_length(*this, 0, points_.size() - 1); }

double polyline_arc_length(const Polyline& p, std::size_t i, std::size_t j) {
  if (i > j || j >= p.size()) {
    throw std::out_of_range("arc length indices out of range");
  }
  double sum = 0.0;
  for (std::size_t k = i + 1; k <= j; ++k) sum += (p[k] - p[k - 1]).norm();
  return sum;
}

namespace {

constexpr double kCornerTolerance = 1e-6;

std::vector<Point2> corner_vertices(const Polyline& p) {
  std::vector<Point2> kept{p.front()};
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    // Measured against the last kept vertex so slow curves cannot be flattened away.
    const Point2 in = p[i] - kept.back();
    const Point2 out = p[i + 1] - p[i];
    if (angle_between(in, out) > kCornerTolerance) kept.push_back(p[i]);
  }
  kept.push_back(p.back());
  return kept;
}

}  // namespace

Polyline resample(const Polyline& p, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("resample spacing must be positive");
  if (p.size() < 2) return p;

  const std::vector<Point2> corners = corner_vertices(p);
  std::vector<Point2> out{corners.front()};
  for (std::size_t k = 1; k < corners.size(); ++k) {
    const Point2& a = corners[k - 1];
    const Point2& b = corners[k];
    const double len = (b - a).norm();
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing - 1e-12)));
    for (std::size_t s = 1; s < pieces; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(pieces);
      out.emplace_back(a + t * (b - a));
    }
    out.push_back(b);
  }
  return Polyline(std::move(out));
}

double distance_to_polyline(const Point2& p, const Polyline& line) {
  if (line.size() == 1) return (p - line.front()).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < line.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line[i - 1], line[i]));
  }
  return best;
}

}  // namespace vroad

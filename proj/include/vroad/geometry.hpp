#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace vroad {

using Point2 = Eigen::Vector2d;

inline constexpr double kPi = EIGEN_PI;
inline constexpr double kTwoPi = 2.0 * EIGEN_PI;

// Minimum spacing between consecutive polyline vertices, meters.
inline constexpr double kCoincidentEps = 1e-6;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Heading in the global frame, always in [0, 2pi).
class GlobalAngle {
 public:
  GlobalAngle() = default;
  /// Normalizes `radians` into [0, 2pi). Throws std::invalid_argument if not finite.
  explicit GlobalAngle(double radians);

  double radians() const { return value_; }

  friend bool operator==(GlobalAngle, GlobalAngle) = default;

 private:
  double value_ = 0.0;
};

/// Angle relative to the current heading, in (-pi, pi]. Positive turns left (CCW).
class RelativeAngle {
 public:
  RelativeAngle() = default;
  explicit RelativeAngle(double radians);

  static RelativeAngle from_degrees(double deg) { return RelativeAngle(deg2rad(deg)); }

  double radians() const { return value_; }
  double degrees() const { return rad2deg(value_); }

  friend bool operator==(RelativeAngle, RelativeAngle) = default;

 private:
  double value_ = 0.0;
};

GlobalAngle normalize_global(double raw);

/// Wraps any finite angle into (-pi, pi].
double wrap_relative(double raw);

/// Signed minimal rotation carrying `b` onto `a`; the +-pi tie resolves to +pi.
RelativeAngle angular_diff(GlobalAngle a, GlobalAngle b);

/// Heading composed with a relative offset.
inline GlobalAngle operator+(GlobalAngle heading, RelativeAngle offset) {
  return GlobalAngle(heading.radians() + offset.radians());
}

/// Bearing from `current` to `sub_goal` in [0, 2pi). Throws DegenerateDirection
/// when the points coincide.
GlobalAngle expected_angle(const Point2& current, const Point2& sub_goal);

/// Unsigned angle in [0, pi] between directions `u` and `v`.
template <typename DerivedU, typename DerivedV>
double angle_between(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  const double cross = u.x() * v.y() - u.y() * v.x();
  return std::atan2(std::abs(cross), u.dot(v));
}

/// Euclidean distance from `p` to the closed segment [a, b].
template <typename DerivedP, typename DerivedA, typename DerivedB>
double point_segment_distance(const Eigen::MatrixBase<DerivedP>& p,
                              const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

/// Ordered vertex chain with no two consecutive vertices closer than kCoincidentEps.
class Polyline {
 public:
  /// Throws std::invalid_argument on an empty list, a non-finite coordinate,
  /// or coincident consecutive vertices.
  explicit Polyline(std::vector<Point2> points);

  const std::vector<Point2>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  const Point2& front() const { return points_.front(); }
  const Point2& back() const { return points_.back(); }

  double length() const;

 private:
  std::vector<Point2> points_;
};

/// Arc length between vertex indices i <= j. Throws std::out_of_range.
double polyline_arc_length(const Polyline& p, std::size_t i, std::size_t j);

/// Drops collinear vertices, then subdivides each remaining segment evenly so
/// no gap exceeds `spacing`. Endpoints and corners are kept bit-exact.
Polyline resample(const Polyline& p, double spacing);

/// Distance from `p` to the nearest point on any segment of `line`.
double distance_to_polyline(const Point2& p, const Polyline& line);

}  // namespace vroad

#include "vroad/route_following.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vroad {

void FollowerConfig::validate() const {
  const bool ok = subgoal_distance > 0.0 && turn_angle > 0.0 && arrival_radius > 0.0 &&
                  deviation_threshold > 0.0 && heading_threshold > 0.0 && ultra_fov_half_deg > 0.0 &&
                  ultra_fov_half_deg <= 90.0 && ultra_obstacle_threshold > 0.0;
  if (!ok) throw std::invalid_argument("follower config values must be positive (ultrasonic cone <= 90 deg)");
}

std::string_view to_string(SubGoalKind kind) {
  switch (kind) {
    case SubGoalKind::Spaced: return "spaced";
    case SubGoalKind::Turning: return "turning";
    case SubGoalKind::Destination: return "destination";
  }
  return "?";
}

std::string_view to_string(Cue cue) {
  switch (cue) {
    case Cue::Straight: return "straight";
    case Cue::SlightLeft: return "slight_left";
    case Cue::Left: return "left";
    case Cue::SlightRight: return "slight_right";
    case Cue::Right: return "right";
    case Cue::Stop: return "stop";
    case Cue::Arrived: return "arrived";
  }
  return "?";
}

UltrasonicReading::UltrasonicReading(double meters) {
  if (std::isnan(meters)) throw std::invalid_argument("ultrasonic reading is NaN");
  meters_ = std::clamp(meters, kUltrasonicMin, kUltrasonicMax);
}

ClosestPoint closest_point(const GlobalPath& path, const Point2& current) {
  const Polyline& w = path.points;
  ClosestPoint best{0, w[0], (w[0] - current).norm()};
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double d = (w[i] - current).norm();
    if (d < best.deviation) best = ClosestPoint{i, w[i], d};
  }
  return best;
}

SubGoalState select_sub_goal(const GlobalPath& path, std::size_t cls_index,
                             const std::optional<SubGoalState>& prev, const FollowerConfig& cfg) {
  const Polyline& w = path.points;
  if (cls_index >= w.size()) throw std::out_of_range("closest index past the end of the path");

  std::optional<std::size_t> consumed = prev ? prev->consumed_turn : std::nullopt;
  if (prev && prev->locked) {
    const bool reached = cls_index >= prev->path_index ||
                         (w[cls_index] - prev->sub_goal).norm() <= cfg.turn_reached_radius();
    if (!reached) return *prev;
    consumed = std::max(consumed.value_or(0), prev->path_index);
  }

  const std::size_t last = w.size() - 1;
  const Point2& cls = w[cls_index];
  // A gentle bend can pass the corner test only once the user is close to it; never stepping back
  // behind the previous sub-goal keeps the target from jumping backward when that happens.
  const std::size_t floor = prev ? prev->path_index : 0;
  double arc = 0.0;
  for (std::size_t s = cls_index + 1; s < last; ++s) {
    arc += (w[s] - w[s - 1]).norm();
    if (s < floor) continue;
    const bool corner_allowed = !consumed || s > *consumed;
    if (corner_allowed && angle_between(w[s] - cls, w[s + 1] - w[s]) >= cfg.turn_angle) {
      return SubGoalState{w[s], SubGoalKind::Turning, true, s, consumed};
    }
    if (arc >= cfg.subgoal_distance) {
      return SubGoalState{w[s], SubGoalKind::Spaced, false, s, consumed};
    }
  }
  return SubGoalState{w[last], SubGoalKind::Destination, false, last, consumed};
}

namespace {

// Strict-weak "a is preferred over b" for candidate selection.
bool preferred(double cost_a, RelativeAngle a, double cost_b, RelativeAngle b) {
  if (cost_a != cost_b) return cost_a < cost_b;
  const double mag_a = std::abs(a.radians());
  const double mag_b = std::abs(b.radians());
  if (mag_a != mag_b) return mag_a < mag_b;
  return a.radians() > b.radians();
}

}  // namespace

std::optional<RelativeAngle> optimal_direction(const CandidateDirections& candidates, GlobalAngle expected,
                                               const Pose& pose, double deviation, const FollowerConfig& cfg) {
  if (candidates.empty()) return std::nullopt;

  const double heading_error = std::abs(angular_diff(expected, pose.heading).radians());
  const bool correcting = deviation > cfg.deviation_threshold || heading_error >= cfg.heading_threshold;

  auto cost = [&](RelativeAngle theta) {
    return correcting ? std::abs(angular_diff(expected, pose.heading + theta).radians())
                      : std::abs(theta.radians());
  };

  RelativeAngle best = candidates.front();
  double best_cost = cost(best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double c = cost(candidates[i]);
    if (preferred(c, candidates[i], best_cost, best)) {
      best = candidates[i];
      best_cost = c;
    }
  }
  return best;
}

std::optional<RelativeAngle> fuse_ultrasonic(std::optional<RelativeAngle> direction, UltrasonicReading reading,
                                             const FollowerConfig& cfg) {
  if (!direction) return std::nullopt;
  const bool in_cone = std::abs(direction->radians()) <= deg2rad(cfg.ultra_fov_half_deg);
  if (!in_cone) return direction;
  if (reading.meters() > cfg.ultra_obstacle_threshold) return direction;
  return std::nullopt;
}

Cue render_cue(std::optional<RelativeAngle> direction, bool arrived) {
  if (arrived) return Cue::Arrived;
  if (!direction) return Cue::Stop;
  const double r = direction->radians();
  const double mag = std::abs(r);
  if (mag < deg2rad(7.5)) return Cue::Straight;
  if (mag < deg2rad(30.0)) return r > 0.0 ? Cue::SlightLeft : Cue::SlightRight;
  return r > 0.0 ? Cue::Left : Cue::Right;
}

StepResult guidance_step(const Pose& pose, const GlobalPath& path, const CandidateDirections& candidates,
                         UltrasonicReading reading, const std::optional<SubGoalState>& state,
                         const FollowerConfig& cfg) {
  StepResult result;
  const ClosestPoint cls = closest_point(path, pose.position);
  result.state = select_sub_goal(path, cls.index, state, cfg);
  result.trace.cls_index = cls.index;
  result.trace.candidates = candidates;
  result.trace.ultrasonic = reading.meters();

  GuidanceOutput& out = result.output;
  out.deviation = cls.deviation;
  out.distance_to_subgoal = (result.state.sub_goal - pose.position).norm();

  if ((pose.position - path.points.back()).norm() < cfg.arrival_radius) {
    out.arrived = true;
    out.cue = Cue::Arrived;
    return result;
  }

  const GlobalAngle expected = expected_angle(pose.position, result.state.sub_goal);
  out.subgoal_bearing = angular_diff(expected, pose.heading);
  const auto optimal = optimal_direction(candidates, expected, pose, cls.deviation, cfg);
  out.walk_direction = fuse_ultrasonic(optimal, reading, cfg);
  out.cue = render_cue(out.walk_direction, false);

  result.trace.expected = expected;
  result.trace.optimal = optimal;
  result.trace.walk = out.walk_direction;
  return result;
}

}  // namespace vroad

#pragma once

#include "vroad/geometry.hpp"
#include "vroad/wayfinding.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace vroad {

/// Position plus heading of the camera optical axis, global frame.
struct Pose {
  Point2 position = Point2::Zero();
  GlobalAngle heading;
};

struct FollowerConfig {
  double subgoal_distance = 3.0;          // spacing of look-ahead sub-goals, m
  double turn_angle = kPi / 6.0;          // a vertex turning at least this much is a corner
  double arrival_radius = 1.0;            // destination reached inside this radius, m
  double deviation_threshold = 1.0;       // off-path distance that forces correction, m
  double heading_threshold = kPi / 6.0;   // heading error that forces correction
  double ultra_fov_half_deg = 7.5;        // ultrasonic cone half-angle, degrees
  double ultra_obstacle_threshold = 2.0;  // cone obstacles nearer than this block, m

  /// Radius at which a locked corner counts as reached.
  double turn_reached_radius() const { return 0.5 * arrival_radius; }

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

enum class SubGoalKind { Spaced, Turning, Destination };

std::string_view to_string(SubGoalKind kind);

struct SubGoalState {
  Point2 sub_goal = Point2::Zero();
  SubGoalKind kind = SubGoalKind::Spaced;
  bool locked = false;
  std::size_t path_index = 0;
  /// Highest path index of a corner already reached; corners at or before it
  /// are not selected again.
  std::optional<std::size_t> consumed_turn;

  friend bool operator==(const SubGoalState&, const SubGoalState&) = default;
};

/// Obstacle-free headings relative to the camera axis.
using CandidateDirections = std::vector<RelativeAngle>;

inline constexpr double kUltrasonicMin = 0.03;
inline constexpr double kUltrasonicMax = 4.25;

/// Range reported by the ultrasonic rangefinder, clamped to its working range.
class UltrasonicReading {
 public:
  explicit UltrasonicReading(double meters);
  double meters() const { return meters_; }

 private:
  double meters_;
};

enum class Cue { Straight, SlightLeft, Left, SlightRight, Right, Stop, Arrived };

std::string_view to_string(Cue cue);

struct GuidanceOutput {
  std::optional<RelativeAngle> walk_direction;  // absent means stop
  Cue cue = Cue::Stop;
  double distance_to_subgoal = 0.0;
  double deviation = 0.0;
  bool arrived = false;
  /// Bearing of the sub-goal relative to the heading; tells the user which
  /// side to search when stopped.
  RelativeAngle subgoal_bearing;
};

struct ClosestPoint {
  std::size_t index = 0;
  Point2 point = Point2::Zero();
  double deviation = 0.0;
};

/// Path vertex nearest to `current`; ties go to the lowest index.
ClosestPoint closest_point(const GlobalPath& path, const Point2& current);

/// Dynamic sub-goal: the first vertex past `cls_index` that is either a
/// corner (locked until reached) or `subgoal_distance` of arc ahead, else the
/// destination. A locked corner is kept while the closest vertex is before it
/// and further than turn_reached_radius() from it. The result never lies
/// before `prev`'s sub-goal.
SubGoalState select_sub_goal(const GlobalPath& path, std::size_t cls_index,
                             const std::optional<SubGoalState>& prev, const FollowerConfig& cfg);

/// Picks the walking direction from the candidate set. When off the path or
/// facing away from the sub-goal, minimizes the wrapped angle between the
/// candidate heading and `expected`; otherwise takes the straightest candidate.
/// Ties: lower cost, then smaller |angle|, then the left (positive) one.
std::optional<RelativeAngle> optimal_direction(const CandidateDirections& candidates, GlobalAngle expected,
                                               const Pose& pose, double deviation, const FollowerConfig& cfg);

/// Vetoes a direction inside the ultrasonic cone (edges included) unless the
/// measured range strictly exceeds the obstacle threshold.
std::optional<RelativeAngle> fuse_ultrasonic(std::optional<RelativeAngle> direction, UltrasonicReading reading,
                                             const FollowerConfig& cfg);

Cue render_cue(std::optional<RelativeAngle> direction, bool arrived);

/// Internals of one guidance tick, for tracing.
struct StepTrace {
  std::size_t cls_index = 0;
  std::optional<GlobalAngle> expected;
  CandidateDirections candidates;
  std::optional<RelativeAngle> optimal;
  double ultrasonic = 0.0;
  std::optional<RelativeAngle> walk;
};

struct StepResult {
  GuidanceOutput output;
  SubGoalState state;
  StepTrace trace;
};

/// One pass of the follower loop: closest point, sub-goal, expected angle,
/// optimal direction, ultrasonic gate. Pure in its arguments.
StepResult guidance_step(const Pose& pose, const GlobalPath& path, const CandidateDirections& candidates,
                         UltrasonicReading reading, const std::optional<SubGoalState>& state,
                         const FollowerConfig& cfg);

}  // namespace vroad

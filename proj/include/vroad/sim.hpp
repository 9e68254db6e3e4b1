#pragma once

#include "vroad/blind_road.hpp"
#include "vroad/route_following.hpp"
#include "vroad/sensors.hpp"
#include "vroad/wayfinding.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vroad {

/// Simulated user executing guidance cues.
struct WalkerModel {
  double speed = 0.8;              // m/s
  double max_turn_rate = kPi / 2;  // rad/s
  double dt = 0.1;                 // s
  double compliance_noise = 0.05;  // rad std on the executed stepping direction
  double scan_rate = kPi / 4;      // rad/s while stopped

  void validate() const;
};

/// Walker pose plus the memory of an in-progress stop scan.
struct WalkerState {
  Pose pose;
  int scan_dir = 0;             // 0 when not scanning
  double scan_offset = 0.0;     // rotation accumulated in the current scan, rad
  double scan_amplitude = 0.0;  // reverse once |scan_offset| reaches this; 0 keeps one direction
};

/// Advances the walker by one tick. Stopped walkers rotate in place toward the
/// side the sub-goal was on when the stop began (a widening back-and-forth
/// sweep when it was dead ahead); moving walkers turn toward the commanded
/// direction (rate limited) and step forward along it with Gaussian direction
/// noise.
WalkerState walker_step(WalkerState state, const GuidanceOutput& guidance, const WalkerModel& model,
                        std::uint64_t tick, std::uint64_t seed);

/// Everything a scenario run is parameterized by.
struct SimConfig {
  FollowerConfig follower;
  WalkerModel walker;
  DepthCameraModel camera;
  PoseNoiseModel noise;
  double timeout = 120.0;  // simulated seconds
  double path_spacing = kDefaultPathSpacing;

  void validate() const;
};

enum class Outcome { Arrived, Timeout, Collision };

std::string_view to_string(Outcome outcome);

struct TrajectorySample {
  std::uint64_t tick = 0;
  Pose pose;  // ground truth
  GuidanceOutput guidance;
  SubGoalState sub_goal;
  StepTrace trace;
};

struct TrajectoryRecord {
  NodeRoute route;
  std::vector<Point2> path;  // the planned global path vertices
  std::vector<TrajectorySample> samples;
  Outcome outcome = Outcome::Timeout;
};

/// Plans between two labelled PoIs and closes the loop sensor -> follower ->
/// walker every dt until arrival, collision, or timeout. Deterministic in
/// `seed`. Throws UnknownLabel or NoPath.
TrajectoryRecord run_scenario(const Environment& env, const MapData& map, const std::string& start_label,
                              const std::string& goal_label, const SimConfig& cfg, std::uint64_t seed);

struct DeviationStats {
  double max_dev = 0.0;
  double avg_dev = 0.0;
  double variance = 0.0;  // population variance
};

/// Segment-projected distance of each position to the path, summarized.
/// Throws std::invalid_argument on an empty sample set.
DeviationStats deviation_stats(std::span<const Point2> positions, const Polyline& path);
DeviationStats deviation_stats(const TrajectoryRecord& traj, const GlobalPath& path);

}  // namespace vroad

#include "vroad/sim.hpp"

#include "vroad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace vroad {

void WalkerModel::validate() const {
  if (!(speed > 0.0 && max_turn_rate > 0.0 && dt > 0.0 && compliance_noise >= 0.0 && scan_rate > 0.0)) {
    throw std::invalid_argument("walker model values must be positive");
  }
}

void SimConfig::validate() const {
  follower.validate();
  walker.validate();
  camera.validate();
  if (noise.position_sigma < 0.0 || noise.heading_sigma < 0.0) {
    throw std::invalid_argument("pose noise sigmas must be non-negative");
  }
  if (!(timeout > 0.0) || !(path_spacing > 0.0)) {
    throw std::invalid_argument("timeout and path spacing must be positive");
  }
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Arrived: return "arrived";
    case Outcome::Timeout: return "timeout";
    case Outcome::Collision: return "collision";
  }
  return "?";
}

namespace {

constexpr std::uint32_t kWalkerStream = 0x77616c6bu;
constexpr double kFirstScanAmplitude = kPi / 4;

}  // namespace

WalkerState walker_step(WalkerState state, const GuidanceOutput& guidance, const WalkerModel& model,
                        std::uint64_t tick, std::uint64_t seed) {
  if (guidance.arrived) return state;

  if (!guidance.walk_direction) {
    if (state.scan_dir == 0) {
      // The side is latched when the stop begins; re-reading it every tick would dither in front of
      // an obstacle that sits right on the sub-goal bearing.
      const double bearing = guidance.subgoal_bearing.radians();
      state.scan_dir = bearing > 0.0 ? 1 : (bearing < 0.0 ? -1 : 1);
      state.scan_offset = 0.0;
      state.scan_amplitude = bearing == 0.0 ? kFirstScanAmplitude : 0.0;
    }
    const double rot = state.scan_dir * model.scan_rate * model.dt;
    state.pose.heading = GlobalAngle(state.pose.heading.radians() + rot);
    state.scan_offset += rot;
    // Side unknown: sweep back and forth, widening each time.
    if (state.scan_amplitude > 0.0 && state.scan_offset * state.scan_dir >= state.scan_amplitude) {
      state.scan_dir = -state.scan_dir;
      state.scan_amplitude = std::min(2.0 * state.scan_amplitude, kPi);
    }
    return state;
  }

  state.scan_dir = 0;
  const double max_turn = model.max_turn_rate * model.dt;
  const double turn = std::clamp(guidance.walk_direction->radians(), -max_turn, max_turn);
  state.pose.heading = GlobalAngle(state.pose.heading.radians() + turn);

  double executed = state.pose.heading.radians();
  if (model.compliance_noise > 0.0) {
    auto rng = tick_stream(seed, tick, kWalkerStream);
    executed += std::normal_distribution<double>(0.0, model.compliance_noise)(rng);
  }
  const double step = model.speed * model.dt;
  state.pose.position += step * Point2(std::cos(executed), std::sin(executed));
  return state;
}

TrajectoryRecord run_scenario(const Environment& env, const MapData& map, const std::string& start_label,
                              const std::string& goal_label, const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const PoINode* start = map.graph.find_label(start_label);
  if (start == nullptr) throw UnknownLabel(start_label);
  const PoINode* goal = map.graph.find_label(goal_label);
  if (goal == nullptr) throw UnknownLabel(goal_label);

  TrajectoryRecord record;
  record.route = astar(map.graph, start->id, goal->id);
  const GlobalPath path = expand_path(map.graph, record.route, cfg.path_spacing);
  record.path = path.points.points();

  WalkerState walker;
  walker.pose.position = path.points.front();
  if (path.points.size() > 1) walker.pose.heading = expected_angle(path.points[0], path.points[1]);

  PoseNoiseModel noise = cfg.noise;
  noise.seed = seed;
  DynamicWorld world(env);
  std::optional<SubGoalState> sub_goal;
  const auto max_ticks = static_cast<std::uint64_t>(std::llround(cfg.timeout / cfg.walker.dt));

  for (std::uint64_t tick = 0;; ++tick) {
    world.advance_to(static_cast<double>(tick) * cfg.walker.dt);
    const OccupancyGrid& grid = world.grid();
    if (grid.occupied(walker.pose.position)) {
      record.outcome = Outcome::Collision;
      break;
    }

    const Pose sensed = noisy_pose(walker.pose, noise, tick);
    const CandidateDirections candidates = candidate_directions(grid, walker.pose, cfg.camera);
    const UltrasonicReading range = ultrasonic_reading(grid, walker.pose, cfg.follower.ultra_fov_half_deg);
    StepResult step = guidance_step(sensed, path, candidates, range, sub_goal, cfg.follower);

    record.samples.push_back(TrajectorySample{tick, walker.pose, step.output, step.state, std::move(step.trace)});
    if (step.output.arrived) {
      record.outcome = Outcome::Arrived;
      break;
    }
    if (tick >= max_ticks) {
      record.outcome = Outcome::Timeout;
      break;
    }
    walker = walker_step(walker, step.output, cfg.walker, tick, seed);
    sub_goal = step.state;
  }
  return record;
}

DeviationStats deviation_stats(std::span<const Point2> positions, const Polyline& path) {
  if (positions.empty()) throw std::invalid_argument("deviation statistics need at least one sample");
  DeviationStats stats;
  std::vector<double> devs;
  devs.reserve(positions.size());
  double sum = 0.0;
  for (const auto& p : positions) {
    const double d = distance_to_polyline(p, path);
    devs.push_back(d);
    sum += d;
    stats.max_dev = std::max(stats.max_dev, d);
  }
  const double n = static_cast<double>(devs.size());
  stats.avg_dev = sum / n;
  double sq = 0.0;
  for (double d : devs) sq += (d - stats.avg_dev) * (d - stats.avg_dev);
  stats.variance = sq / n;
  return stats;
}

DeviationStats deviation_stats(const TrajectoryRecord& traj, const GlobalPath& path) {
  std::vector<Point2> positions;
  positions.reserve(traj.samples.size());
  for (const auto& s : traj.samples) positions.push_back(s.pose.position);
  return deviation_stats(positions, path.points);
}

}  // namespace vroad

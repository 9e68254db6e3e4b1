#pragma once

#include "vroad/blind_road.hpp"
#include "vroad/sensors.hpp"
#include "vroad/sim.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace vroad::fixtures {

/// Axis-aligned free-space box, min/max corners.
struct Hall {
  double x0, y0, x1, y1;
};

/// An authored office floor: the walks recorded through it, the PoI tags,
/// the free hallways, and the route exercised by the experiments.
struct Office {
  std::string name;
  std::vector<std::vector<Point2>> walks;
  std::vector<TagSpec> tags;
  std::vector<Hall> halls;
  std::string from;
  std::string to;
  double route_length = 0.0;
};

/// Dense recording along the corner polyline at exactly `spacing`; every
/// corner is hit exactly.
std::vector<Point2> sample_walk(const std::vector<Point2>& corners, double spacing = kDefaultRecordSpacing);

/// Walls fill everything in the bounding box (plus margin) outside the halls.
Environment hallway_environment(const std::vector<Hall>& halls, double margin = 1.0, double resolution = 0.05);

MapData build(const Office& office);

Office straight_office();
Office l_office();
Office junction_office();  // several junctions, route J,I,K,H,Room3311
std::vector<Office> all_offices();

/// Same floor with 2-4 obstacles on the route, one of them moving.
Environment obstacle_environment(const Office& office);

/// The default experiment configuration.
SimConfig experiment_config();

/// Whether every excursion beyond `exceed` m returns below `settle` m within
/// `window` simulated seconds. An excursion still open when the run ends fails.
struct RecoveryCheck {
  bool ok = true;
  int excursions = 0;
  double worst_seconds = 0.0;  // longest time to settle
};
RecoveryCheck check_recovery(const TrajectoryRecord& record, double dt, double exceed = 0.5, double settle = 0.3,
                             double window = 15.0);

/// Writes `<name>_walks.json`, `<name>_tags.json`, `<name>_env.json` and
/// `<name>_obstacles_env.json` into `dir`; returns nothing, throws IoError.
void export_office(const Office& office, const std::filesystem::path& dir);

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout only
};
/// Runs a shell command, capturing stdout.
CommandResult run_command(const std::string& command);

/// Fresh empty directory under the system temp directory.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace vroad::fixtures

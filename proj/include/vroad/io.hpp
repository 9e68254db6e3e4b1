#pragma once

#include "vroad/blind_road.hpp"
#include "vroad/sensors.hpp"
#include "vroad/sim.hpp"
#include "vroad/wayfinding.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vroad {

/// Rounds to `digits` significant decimal digits (the precision written to JSON).
double round_significant(double v, int digits = 9);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// `{"points": [[x, y], ...]}`
std::string save_path(const GlobalPath& path);
GlobalPath load_path(std::string_view document);

/// Raw recorded walks: either `{"points": [...]}` for one walk or
/// `{"walks": [[[x, y], ...], ...]}`; an optional `spacing` sets the
/// recording spacing.
struct RecordedWalks {
  std::vector<std::vector<Point2>> walks;
  double spacing = kDefaultRecordSpacing;
};
RecordedWalks load_walks(std::string_view document);

/// `{"snap_radius": r, "tags": [{"label", "x", "y", "id"?}, ...]}` or a bare tag array.
struct TagFile {
  std::vector<TagSpec> tags;
  double snap_radius = kDefaultSnapRadius;
};
TagFile load_tags(std::string_view document);

/// `{resolution, width, height, origin: [x, y], obstacles: [...]}`; rect
/// obstacles carry x, y, w, h and circles x, y, r; either may add
/// `waypoints` and `speed` to move along a closed loop.
Environment load_environment(std::string_view document);
std::string save_environment(const Environment& env);

/// Sections follower / walker / camera / noise plus timeout and path_spacing;
/// absent fields keep their defaults, unknown fields are rejected.
SimConfig load_config(std::string_view document);

/// Columns: tick,x,y,theta,cue,walk_dir,deviation (6 decimals). `deviation`
/// is the segment-projected distance of the true position to the path.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);

/// Per-tick follower internals: closest index, sub-goal, expected angle,
/// candidates (`;`-separated), optimal and final directions, ultrasonic range.
void write_trace_csv(std::ostream& out, const TrajectoryRecord& record);

struct CsvSample {
  std::uint64_t tick = 0;
  Point2 position = Point2::Zero();
};
/// Reads the trajectory CSV back; throws ParseError naming the line.
std::vector<CsvSample> read_trajectory_csv(std::istream& in);

/// Fixed-format summary table printed by the `stats` command.
std::string format_stats(const DeviationStats& stats);

}  // namespace vroad

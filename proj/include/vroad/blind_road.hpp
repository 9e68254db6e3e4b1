#pragma once

#include "vroad/geometry.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vroad {

inline constexpr double kDefaultRecordSpacing = 0.1;
inline constexpr double kDefaultSnapRadius = 0.5;

/// A recorded walk: the trajectory a sighted guide traced through the building.
class VirtualBlindRoad {
 public:
  explicit VirtualBlindRoad(double min_record_spacing = kDefaultRecordSpacing);
  /// Adopts an existing point list verbatim (used when loading maps).
  VirtualBlindRoad(std::vector<Point2> points, double min_record_spacing);

  const std::vector<Point2>& points() const { return points_; }
  double recorded_spacing() const { return spacing_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// The road as a polyline. Throws if the road is empty.
  Polyline trail() const { return Polyline(points_); }

 private:
  friend VirtualBlindRoad record_point(VirtualBlindRoad road, const Point2& p);

  std::vector<Point2> points_;
  double spacing_;
};

/// Appends `p` when it lies at least the recording spacing from the last point.
VirtualBlindRoad record_point(VirtualBlindRoad road, const Point2& p);

struct PoINode {
  std::string id;
  std::string label;
  Point2 position = Point2::Zero();
  std::size_t trail_index = 0;
};

struct PoIEdge {
  std::string from;
  std::string to;
  Polyline segment;
  double weight = 0.0;
};

/// Undirected PoI graph. Construction validates ids, labels, edge endpoints,
/// and that no edge is shorter than its chord (A* relies on that).
class PoIGraph {
 public:
  PoIGraph(std::vector<PoINode> nodes, std::vector<PoIEdge> edges);

  const std::vector<PoINode>& nodes() const { return nodes_; }
  const std::vector<PoIEdge>& edges() const { return edges_; }

  const PoINode* find_node(std::string_view id) const;
  const PoINode* find_label(std::string_view label) const;
  /// Throws UnknownNode.
  const PoINode& node(std::string_view id) const;

 private:
  std::vector<PoINode> nodes_;
  std::vector<PoIEdge> edges_;
};

/// Snaps a labelled PoI onto the nearest road vertex (ties to the lowest index).
/// Throws DuplicateLabel or TooFarFromRoad. `id` defaults to the label.
PoINode tag_poi(const VirtualBlindRoad& road, const Point2& position, const std::string& label,
                std::span<const PoINode> existing, double snap_radius = kDefaultSnapRadius,
                std::optional<std::string> id = std::nullopt);

/// One edge per pair of trail-consecutive nodes, carrying the trail slice between them.
PoIGraph build_graph(const VirtualBlindRoad& road, std::vector<PoINode> nodes);

struct MapData {
  VirtualBlindRoad road;
  PoIGraph graph;
};

/// One recording session and the PoIs tagged on it.
struct Walk {
  VirtualBlindRoad road;
  std::vector<PoINode> nodes;
};

/// Joins several walks into one map by label identity. Same-label nodes must
/// agree within `snap_radius`; later walks are pinned to the first position
/// seen. The merged road is the concatenation of all walks, so node indices
/// and edge slices refer to that concatenation.
MapData merge_walks(std::span<const Walk> walks, double snap_radius = kDefaultSnapRadius);

/// Checks node positions against road vertices and that every edge segment
/// is a contiguous (possibly reversed) slice of the road. Throws ValidationError.
void validate_map(const MapData& map);

/// A labelled PoI location as authored before snapping.
struct TagSpec {
  std::string label;
  Point2 position = Point2::Zero();
  std::optional<std::string> id;
};

/// Records each raw walk through record_point, tags every PoI on each walk
/// passing within `snap_radius` of it, and merges the walks. Throws
/// TooFarFromRoad for a tag no walk passes, ValidationError for a walk that
/// carries fewer than two PoIs.
MapData build_map(std::span<const std::vector<Point2>> walks, std::span<const TagSpec> tags,
                  double record_spacing = kDefaultRecordSpacing, double snap_radius = kDefaultSnapRadius);

/// Map document: JSON with keys version, road, nodes, edges.
std::string save_map(const MapData& map);
/// Throws ParseError (malformed / unknown version) or ValidationError.
MapData load_map(std::string_view document);

}  // namespace vroad

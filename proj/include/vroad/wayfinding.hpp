#pragma once

#include "vroad/blind_road.hpp"
#include "vroad/geometry.hpp"

#include <string>
#include <vector>

namespace vroad {

inline constexpr double kDefaultPathSpacing = 0.25;

struct NodeRoute {
  std::vector<std::string> node_ids;
  double total_cost = 0.0;
};

/// Dense global path handed to the follower.
struct GlobalPath {
  Polyline points;
};

/// Shortest route by A* with a straight-line heuristic. Equal-cost routes are
/// ordered by their node-id sequence, lexicographically.
/// Throws UnknownNode or NoPath.
NodeRoute astar(const PoIGraph& graph, const std::string& start, const std::string& goal);

/// Exhaustive enumeration of simple paths; reference for astar on small graphs.
NodeRoute brute_force_shortest(const PoIGraph& graph, const std::string& start, const std::string& goal);

/// Concatenates the route's edge segments (oriented along the route) and
/// resamples the result at `path_spacing`.
GlobalPath expand_path(const PoIGraph& graph, const NodeRoute& route,
                       double path_spacing = kDefaultPathSpacing);

}  // namespace vroad

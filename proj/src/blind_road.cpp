#include "vroad/blind_road.hpp"

#include "vroad/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace vroad {

namespace {

constexpr double kPositionTolerance = 1e-6;

bool same_point(const Point2& a, const Point2& b, double tol = kPositionTolerance) {
  return (a - b).norm() <= tol;
}

}  // namespace

VirtualBlindRoad::VirtualBlindRoad(double min_record_spacing) : spacing_(min_record_spacing) {
  if (!(min_record_spacing > 0.0)) throw std::invalid_argument("record spacing must be positive");
}

VirtualBlindRoad::VirtualBlindRoad(std::vector<Point2> points, double min_record_spacing)
    : points_(std::move(points)), spacing_(min_record_spacing) {
  if (!(min_record_spacing > 0.0)) throw std::invalid_argument("record spacing must be positive");
}

VirtualBlindRoad record_point(VirtualBlindRoad road, const Point2& p) {
  // The relative slack keeps points laid out at exactly the spacing from being dropped by rounding.
  if (road.points_.empty() || (p - road.points_.back()).norm() >= road.spacing_ * (1.0 - 1e-9)) {
    road.points_.push_back(p);
  }
  return road;
}

PoIGraph::PoIGraph(std::vector<PoINode> nodes, std::vector<PoIEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::set<std::string> ids;
  std::set<std::string> labels;
  for (const auto& n : nodes_) {
    if (n.id.empty()) throw ValidationError("node with empty id");
    if (!ids.insert(n.id).second) throw ValidationError("duplicate node id: " + n.id);
    if (!labels.insert(n.label).second) throw DuplicateLabel(n.label);
  }
  for (const auto& e : edges_) {
    const PoINode* a = find_node(e.from);
    const PoINode* b = find_node(e.to);
    if (a == nullptr || b == nullptr) {
      throw ValidationError("edge " + e.from + "-" + e.to + " references an unknown node");
    }
    if (e.from == e.to) throw ValidationError("self-loop edge at " + e.from);
    if (!same_point(e.segment.front(), a->position) || !same_point(e.segment.back(), b->position)) {
      throw ValidationError("edge " + e.from + "-" + e.to + " segment does not join its nodes");
    }
    if (!(e.weight > 0.0)) throw ValidationError("edge " + e.from + "-" + e.to + " has non-positive weight");
    const double arc = e.segment.length();
    const double scale = std::max(1.0, e.weight);
    if (std::abs(arc - e.weight) > kPositionTolerance * scale) {
      throw ValidationError("edge " + e.from + "-" + e.to + " weight differs from its segment length");
    }
    const double chord = (b->position - a->position).norm();
    if (e.weight < chord - 1e-7 * scale) {
      throw ValidationError("edge " + e.from + "-" + e.to + " weight is below the straight-line distance");
    }
  }
}

const PoINode* PoIGraph::find_node(std::string_view id) const {
  auto it = std::find_if(nodes_.begin(), nodes_.end(), [&](const PoINode& n) { return n.id == id; });
  return it == nodes_.end() ? nullptr : &*it;
}

const PoINode* PoIGraph::find_label(std::string_view label) const {
  auto it = std::find_if(nodes_.begin(), nodes_.end(), [&](const PoINode& n) { return n.label == label; });
  return it == nodes_.end() ? nullptr : &*it;
}

const PoINode& PoIGraph::node(std::string_view id) const {
  const PoINode* n = find_node(id);
  if (n == nullptr) throw UnknownNode(std::string(id));
  return *n;
}

PoINode tag_poi(const VirtualBlindRoad& road, const Point2& position, const std::string& label,
                std::span<const PoINode> existing, double snap_radius, std::optional<std::string> id) {
  for (const auto& n : existing) {
    if (n.label == label) throw DuplicateLabel(label);
  }
  if (road.empty()) throw TooFarFromRoad("cannot tag '" + label + "' on an empty road");

  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < road.size(); ++i) {
    const double d = (road.points()[i] - position).norm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  if (best_dist > snap_radius) {
    throw TooFarFromRoad("PoI '" + label + "' is " + std::to_string(best_dist) +
                         " m from the road (snap radius " + std::to_string(snap_radius) + " m)");
  }
  return PoINode{id.value_or(label), label, road.points()[best], best};
}

namespace {

Polyline road_slice(const VirtualBlindRoad& road, std::size_t i, std::size_t j) {
  return Polyline(std::vector<Point2>(road.points().begin() + static_cast<std::ptrdiff_t>(i),
                                      road.points().begin() + static_cast<std::ptrdiff_t>(j) + 1));
}

}  // namespace

PoIGraph build_graph(const VirtualBlindRoad& road, std::vector<PoINode> nodes) {
  if (nodes.size() < 2) throw ValidationError("a PoI graph needs at least two nodes");
  std::sort(nodes.begin(), nodes.end(),
            [](const PoINode& a, const PoINode& b) { return a.trail_index < b.trail_index; });
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].trail_index >= road.size()) {
      throw ValidationError("node " + nodes[k].id + " trail index is past the end of the road");
    }
    if (k > 0 && nodes[k].trail_index == nodes[k - 1].trail_index) {
      throw ValidationError("nodes " + nodes[k - 1].id + " and " + nodes[k].id + " share a trail index");
    }
  }

  std::vector<PoIEdge> edges;
  edges.reserve(nodes.size() - 1);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    Polyline segment = road_slice(road, nodes[k - 1].trail_index, nodes[k].trail_index);
    const double weight = segment.length();
    edges.push_back(PoIEdge{nodes[k - 1].id, nodes[k].id, std::move(segment), weight});
  }
  return PoIGraph(std::move(nodes), std::move(edges));
}

MapData merge_walks(std::span<const Walk> walks, double snap_radius) {
  if (walks.empty()) throw ValidationError("no walks to merge");

  std::vector<Point2> merged_points;
  std::vector<PoINode> merged_nodes;
  std::map<std::pair<std::string, std::string>, PoIEdge> merged_edges;
  std::vector<std::pair<std::string, std::string>> edge_order;
  std::map<std::string, std::string> id_of_label;
  const double spacing = walks.front().road.recorded_spacing();

  for (const Walk& walk : walks) {
    std::vector<Point2> points = walk.road.points();
    std::vector<PoINode> nodes = walk.nodes;
    for (auto& n : nodes) {
      if (n.trail_index >= points.size()) throw ValidationError("node " + n.id + " is off its walk");
      const PoINode* seen = nullptr;
      for (const auto& m : merged_nodes) {
        if (m.label == n.label) seen = &m;
      }
      if (seen != nullptr) {
        if ((seen->position - n.position).norm() > snap_radius) {
          throw ValidationError("label '" + n.label + "' tagged at positions further apart than the snap radius");
        }
        points[n.trail_index] = seen->position;
        n.position = seen->position;
        n.id = seen->id;
      } else {
        n.position = points[n.trail_index];
      }
    }

    const VirtualBlindRoad local(points, walk.road.recorded_spacing());
    const PoIGraph local_graph = build_graph(local, nodes);
    const std::size_t offset = merged_points.size();

    for (const auto& n : local_graph.nodes()) {
      if (id_of_label.contains(n.label)) continue;
      if (merged_nodes.end() != std::find_if(merged_nodes.begin(), merged_nodes.end(),
                                             [&](const PoINode& m) { return m.id == n.id; })) {
        throw ValidationError("node id " + n.id + " reused for a different label");
      }
      PoINode copy = n;
      copy.trail_index += offset;
      id_of_label[n.label] = n.id;
      merged_nodes.push_back(std::move(copy));
    }
    for (const auto& e : local_graph.edges()) {
      auto key = std::minmax(e.from, e.to);
      auto it = merged_edges.find(key);
      if (it == merged_edges.end()) {
        merged_edges.emplace(key, e);
        edge_order.push_back(key);
      } else if (e.weight < it->second.weight) {
        it->second = e;
      }
    }
    merged_points.insert(merged_points.end(), points.begin(), points.end());
  }

  std::vector<PoIEdge> edges;
  edges.reserve(edge_order.size());
  for (const auto& key : edge_order) edges.push_back(merged_edges.at(key));
  std::sort(merged_nodes.begin(), merged_nodes.end(),
            [](const PoINode& a, const PoINode& b) { return a.trail_index < b.trail_index; });
  MapData map{VirtualBlindRoad(std::move(merged_points), spacing),
              PoIGraph(std::move(merged_nodes), std::move(edges))};
  validate_map(map);
  return map;
}

MapData build_map(std::span<const std::vector<Point2>> walks, std::span<const TagSpec> tags,
                  double record_spacing, double snap_radius) {
  std::vector<Walk> tagged;
  std::vector<bool> used(tags.size(), false);
  for (std::size_t w = 0; w < walks.size(); ++w) {
    VirtualBlindRoad road(record_spacing);
    for (const auto& p : walks[w]) road = record_point(std::move(road), p);

    std::vector<PoINode> nodes;
    for (std::size_t t = 0; t < tags.size(); ++t) {
      try {
        nodes.push_back(tag_poi(road, tags[t].position, tags[t].label, nodes, snap_radius, tags[t].id));
        used[t] = true;
      } catch (const TooFarFromRoad&) {
        // Only some walks pass each PoI.
      }
    }
    if (nodes.size() < 2) {
      throw ValidationError("walk " + std::to_string(w) + " carries fewer than two PoIs");
    }
    tagged.push_back(Walk{std::move(road), std::move(nodes)});
  }
  for (std::size_t t = 0; t < tags.size(); ++t) {
    if (!used[t]) throw TooFarFromRoad("PoI '" + tags[t].label + "' is not within the snap radius of any walk");
  }
  return merge_walks(tagged, snap_radius);
}

namespace {

bool slice_matches(const std::vector<Point2>& road, const Polyline& seg, std::size_t start, bool reversed) {
  const std::size_t n = seg.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point2& s = reversed ? seg[n - 1 - k] : seg[k];
    if (!same_point(road[start + k], s, 1e-9)) return false;
  }
  return true;
}

}  // namespace

void validate_map(const MapData& map) {
  const auto& pts = map.road.points();
  for (const auto& n : map.graph.nodes()) {
    if (n.trail_index >= pts.size()) throw ValidationError("node " + n.id + " index is past the end of the road");
    if (!same_point(pts[n.trail_index], n.position)) {
      throw ValidationError("node " + n.id + " does not sit on its road vertex");
    }
  }
  for (const auto& e : map.graph.edges()) {
    const std::size_t n = e.segment.size();
    bool found = false;
    for (std::size_t start = 0; !found && start + n <= pts.size(); ++start) {
      found = slice_matches(pts, e.segment, start, false) || slice_matches(pts, e.segment, start, true);
    }
    if (!found) throw ValidationError("edge " + e.from + "-" + e.to + " segment is not a slice of the road");
  }
}

// ---------------------------------------------------------------------------
// JSON document

namespace {

using nlohmann::json;

constexpr int kMapVersion = 1;

double round_sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

json point_array(const std::vector<Point2>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back({round_sig9(p.x()), round_sig9(p.y())});
  return arr;
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + (where.empty() ? key : where + "." + key) + "'");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw ParseError("field '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

std::string text(const json& obj, const std::string& key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ParseError("field '" + where + "." + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<Point2> points_from(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError("field '" + where + "' must be an array of [x, y] pairs");
  std::vector<Point2> pts;
  pts.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& p = arr[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError("field '" + where + "[" + std::to_string(i) + "]' must be an [x, y] pair");
    }
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return pts;
}

}  // namespace

std::string save_map(const MapData& map) {
  json doc;
  doc["version"] = kMapVersion;
  doc["road"] = {{"spacing", round_sig9(map.road.recorded_spacing())},
                 {"points", point_array(map.road.points())}};
  json nodes = json::array();
  for (const auto& n : map.graph.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"index", n.trail_index},
                     {"x", round_sig9(n.position.x())},
                     {"y", round_sig9(n.position.y())}});
  }
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto& e : map.graph.edges()) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"weight", round_sig9(e.weight)},
                     {"segment", point_array(e.segment.points())}});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

MapData load_map(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("map is not valid JSON: ") + e.what());
  }
  const json& version = field(doc, "version", "");
  if (!version.is_number_integer()) throw ParseError("field 'version' must be an integer");
  if (version.get<int>() != kMapVersion) {
    throw ParseError("unsupported map version " + std::to_string(version.get<int>()));
  }

  const json& road_json = field(doc, "road", "");
  const double spacing = number(road_json, "spacing", "road");
  std::vector<Point2> road_points = points_from(field(road_json, "points", "road"), "road.points");

  const json& nodes_json = field(doc, "nodes", "");
  if (!nodes_json.is_array()) throw ParseError("field 'nodes' must be an array");
  std::vector<PoINode> nodes;
  for (std::size_t i = 0; i < nodes_json.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const json& n = nodes_json[i];
    const json& index = field(n, "index", where);
    if (!index.is_number_unsigned()) throw ParseError("field '" + where + ".index' must be a non-negative integer");
    nodes.push_back(PoINode{text(n, "id", where), text(n, "label", where),
                            Point2(number(n, "x", where), number(n, "y", where)), index.get<std::size_t>()});
  }

  const json& edges_json = field(doc, "edges", "");
  if (!edges_json.is_array()) throw ParseError("field 'edges' must be an array");
  std::vector<PoIEdge> edges;
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& e = edges_json[i];
    std::vector<Point2> seg = points_from(field(e, "segment", where), where + ".segment");
    try {
      edges.push_back(PoIEdge{text(e, "from", where), text(e, "to", where), Polyline(std::move(seg)),
                              number(e, "weight", where)});
    } catch (const std::invalid_argument& ex) {
      throw ParseError("field '" + where + ".segment': " + ex.what());
    }
  }

  MapData map{VirtualBlindRoad(std::move(road_points), spacing), PoIGraph(std::move(nodes), std::move(edges))};
  validate_map(map);
  return map;
}

}  // namespace vroad

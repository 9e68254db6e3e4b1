#include "vroad/io.hpp"

#include "vroad/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace vroad {

using nlohmann::json;

double round_significant(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

json parse(std::string_view document, const char* what) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError((where.empty() ? std::string("document") : where) + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + (where.empty() ? key : where + "." + key) + "'");
  return *it;
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ParseError("field '" + (where.empty() ? key : where + "." + key) + "' must be a number");
  return v.get<double>();
}

int require_int(const json& obj, const std::string& key) {
  const json& v = require(obj, key, "");
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ParseError("field '" + key + "' must be a non-negative integer");
  return v.get<int>();
}

Point2 to_point(const json& p, const std::string& where) {
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
    throw ParseError("field '" + where + "' must be an [x, y] pair");
  }
  return {p[0].get<double>(), p[1].get<double>()};
}

std::vector<Point2> to_points(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError("field '" + where + "' must be an array of [x, y] pairs");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < arr.size(); ++i) pts.push_back(to_point(arr[i], where + "[" + std::to_string(i) + "]"));
  return pts;
}

json from_points(const std::vector<Point2>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back({round_significant(p.x()), round_significant(p.y())});
  return arr;
}

}  // namespace

std::string save_path(const GlobalPath& path) {
  json doc;
  doc["points"] = from_points(path.points.points());
  return doc.dump() + "\n";
}

GlobalPath load_path(std::string_view document) {
  const json doc = parse(document, "path");
  std::vector<Point2> pts = to_points(require(doc, "points", ""), "points");
  try {
    return GlobalPath{Polyline(std::move(pts))};
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("field 'points': ") + e.what());
  }
}

RecordedWalks load_walks(std::string_view document) {
  const json doc = parse(document, "trajectory");
  if (!doc.is_object()) throw ParseError("trajectory must be an object");
  RecordedWalks out;
  if (doc.contains("spacing")) out.spacing = require_number(doc, "spacing", "");
  if (doc.contains("walks")) {
    const json& walks = doc["walks"];
    if (!walks.is_array()) throw ParseError("field 'walks' must be an array");
    for (std::size_t i = 0; i < walks.size(); ++i) out.walks.push_back(to_points(walks[i], "walks[" + std::to_string(i) + "]"));
  } else {
    out.walks.push_back(to_points(require(doc, "points", ""), "points"));
  }
  return out;
}

TagFile load_tags(std::string_view document) {
  const json doc = parse(document, "tags");
  TagFile out;
  const json* list = &doc;
  if (doc.is_object()) {
    if (doc.contains("snap_radius")) out.snap_radius = require_number(doc, "snap_radius", "");
    list = &require(doc, "tags", "");
  }
  if (!list->is_array()) throw ParseError("field 'tags' must be an array");
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string where = "tags[" + std::to_string(i) + "]";
    const json& t = (*list)[i];
    const json& label = require(t, "label", where);
    if (!label.is_string()) throw ParseError("field '" + where + ".label' must be a string");
    TagSpec spec{label.get<std::string>(), Point2(require_number(t, "x", where), require_number(t, "y", where)),
                 std::nullopt};
    if (t.contains("id")) {
      if (!t["id"].is_string()) throw ParseError("field '" + where + ".id' must be a string");
      spec.id = t["id"].get<std::string>();
    }
    out.tags.push_back(std::move(spec));
  }
  return out;
}

Environment load_environment(std::string_view document) {
  const json doc = parse(document, "environment");
  Environment env;
  env.resolution = require_number(doc, "resolution", "");
  if (!(env.resolution > 0.0)) throw ParseError("field 'resolution' must be positive");
  env.width = require_int(doc, "width");
  env.height = require_int(doc, "height");
  if (doc.contains("origin")) env.origin = to_point(doc["origin"], "origin");

  if (doc.contains("obstacles")) {
    const json& obs = doc["obstacles"];
    if (!obs.is_array()) throw ParseError("field 'obstacles' must be an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string where = "obstacles[" + std::to_string(i) + "]";
      const json& o = obs[i];
      const json& type = require(o, "type", where);
      Obstacle obstacle;
      const bool moving = o.contains("waypoints");
      auto coord = [&](const char* key) {
        return moving && !o.contains(key) ? 0.0 : require_number(o, key, where);
      };
      if (type == "rect") {
        obstacle.shape = RectShape{coord("x"), coord("y"), require_number(o, "w", where), require_number(o, "h", where)};
      } else if (type == "circle") {
        obstacle.shape = CircleShape{coord("x"), coord("y"), require_number(o, "r", where)};
      } else {
        throw ParseError("field '" + where + ".type' must be \"rect\" or \"circle\"");
      }
      if (moving) {
        obstacle.waypoints = to_points(o["waypoints"], where + ".waypoints");
        if (obstacle.waypoints.empty()) throw ParseError("field '" + where + ".waypoints' must not be empty");
        obstacle.speed = require_number(o, "speed", where);
        if (obstacle.speed < 0.0) throw ParseError("field '" + where + ".speed' must be non-negative");
      }
      env.obstacles.push_back(std::move(obstacle));
    }
  }
  return env;
}

std::string save_environment(const Environment& env) {
  json doc;
  doc["resolution"] = env.resolution;
  doc["width"] = env.width;
  doc["height"] = env.height;
  doc["origin"] = {round_significant(env.origin.x()), round_significant(env.origin.y())};
  json obs = json::array();
  for (const auto& o : env.obstacles) {
    json j;
    if (const auto* r = std::get_if<RectShape>(&o.shape)) {
      j = {{"type", "rect"}, {"x", round_significant(r->x)}, {"y", round_significant(r->y)},
           {"w", round_significant(r->w)}, {"h", round_significant(r->h)}};
    } else {
      const auto& c = std::get<CircleShape>(o.shape);
      j = {{"type", "circle"}, {"x", round_significant(c.x)}, {"y", round_significant(c.y)},
           {"r", round_significant(c.r)}};
    }
    if (!o.waypoints.empty()) {
      j["waypoints"] = from_points(o.waypoints);
      j["speed"] = round_significant(o.speed);
    }
    obs.push_back(std::move(j));
  }
  doc["obstacles"] = std::move(obs);
  return doc.dump(2) + "\n";
}

namespace {

void read_section(const json& doc, const std::string& name, const std::map<std::string, double*>& fields) {
  if (!doc.contains(name)) return;
  const json& sec = doc[name];
  if (!sec.is_object()) throw ParseError("field '" + name + "' must be an object");
  for (const auto& [key, value] : sec.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError("unknown field '" + name + "." + key + "'");
    if (!value.is_number()) throw ParseError("field '" + name + "." + key + "' must be a number");
    *it->second = value.get<double>();
  }
}

}  // namespace

SimConfig load_config(std::string_view document) {
  const json doc = parse(document, "config");
  if (!doc.is_object()) throw ParseError("config must be an object");
  SimConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    static const char* known[] = {"follower", "walker", "camera", "noise", "timeout", "path_spacing"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ParseError("unknown field '" + key + "'");
    }
  }
  FollowerConfig& f = cfg.follower;
  read_section(doc, "follower", {{"subgoal_distance", &f.subgoal_distance},
                                 {"turn_angle", &f.turn_angle},
                                 {"arrival_radius", &f.arrival_radius},
                                 {"deviation_threshold", &f.deviation_threshold},
                                 {"heading_threshold", &f.heading_threshold},
                                 {"ultra_fov_half_deg", &f.ultra_fov_half_deg},
                                 {"ultra_obstacle_threshold", &f.ultra_obstacle_threshold}});
  WalkerModel& w = cfg.walker;
  read_section(doc, "walker", {{"speed", &w.speed},
                               {"max_turn_rate", &w.max_turn_rate},
                               {"dt", &w.dt},
                               {"compliance_noise", &w.compliance_noise},
                               {"scan_rate", &w.scan_rate}});
  DepthCameraModel& c = cfg.camera;
  read_section(doc, "camera", {{"half_fov", &c.half_fov},
                               {"max_depth", &c.max_depth},
                               {"clear_depth", &c.clear_depth},
                               {"corridor_halfwidth", &c.corridor_halfwidth},
                               {"angular_step", &c.angular_step}});
  read_section(doc, "noise", {{"position_sigma", &cfg.noise.position_sigma},
                              {"heading_sigma", &cfg.noise.heading_sigma}});
  if (doc.contains("timeout")) cfg.timeout = require_number(doc, "timeout", "");
  if (doc.contains("path_spacing")) cfg.path_spacing = require_number(doc, "path_spacing", "");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

namespace {

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string opt_angle(const std::optional<RelativeAngle>& a) { return a ? fixed6(a->radians()) : std::string(); }

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  const Polyline path(record.path);
  out << "tick,x,y,theta,cue,walk_dir,deviation\n";
  for (const auto& s : record.samples) {
    out << s.tick << ',' << fixed6(s.pose.position.x()) << ',' << fixed6(s.pose.position.y()) << ','
        << fixed6(s.pose.heading.radians()) << ',' << to_string(s.guidance.cue) << ','
        << opt_angle(s.guidance.walk_direction) << ',' << fixed6(distance_to_polyline(s.pose.position, path))
        << '\n';
  }
}

void write_trace_csv(std::ostream& out, const TrajectoryRecord& record) {
  out << "tick,cls_index,subgoal_x,subgoal_y,subgoal_kind,locked,theta_exp,candidates,theta_opt,d_ultra,theta_walk\n";
  for (const auto& s : record.samples) {
    std::string cands;
    for (std::size_t i = 0; i < s.trace.candidates.size(); ++i) {
      if (i > 0) cands += ';';
      cands += fixed6(s.trace.candidates[i].radians());
    }
    out << s.tick << ',' << s.trace.cls_index << ',' << fixed6(s.sub_goal.sub_goal.x()) << ','
        << fixed6(s.sub_goal.sub_goal.y()) << ',' << to_string(s.sub_goal.kind) << ','
        << (s.sub_goal.locked ? 1 : 0) << ',' << (s.trace.expected ? fixed6(s.trace.expected->radians()) : "")
        << ',' << cands << ',' << opt_angle(s.trace.optimal) << ',' << fixed6(s.trace.ultrasonic) << ','
        << opt_angle(s.trace.walk) << '\n';
  }
}

std::vector<CsvSample> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "tick,x,y,theta,cue,walk_dir,deviation") throw ParseError("trajectory CSV header mismatch: " + line);

  std::vector<CsvSample> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw ParseError("trajectory CSV line " + std::to_string(lineno) + ": expected 7 columns");
    try {
      std::size_t used = 0;
      CsvSample s;
      s.tick = std::stoull(cells[0], &used);
      const double x = std::stod(cells[1]);
      const double y = std::stod(cells[2]);
      s.position = Point2(x, y);
      rows.push_back(s);
    } catch (const std::exception&) {
      throw ParseError("trajectory CSV line " + std::to_string(lineno) + ": bad number");
    }
  }
  return rows;
}

std::string format_stats(const DeviationStats& stats) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s%-16s%-16s\n%-16.4f%-16.4f%-16.4f\n", "max_dev(m)", "avg_dev(m)",
                "variance(m^2)", stats.max_dev, stats.avg_dev, stats.variance);
  return buf;
}

}  // namespace vroad

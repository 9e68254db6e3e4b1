#include "fixtures.hpp"

#include "vroad/io.hpp"

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>

namespace vroad::fixtures {

namespace {

constexpr double kHalfWidth = 0.6;  // corridor half-width, m
constexpr double kLobby = 2.0;      // half-size of the square lobby at each turn, m
constexpr double kAtrium = 1.8;     // half-width of the open sections holding obstacles, m
constexpr double kRunout = 3.0;     // hallway continuing past each turn and destination, m

Hall hband(double x0, double x1, double y, double hw = kHalfWidth) { return {x0, y - hw, x1, y + hw}; }
Hall vband(double x, double y0, double y1, double hw = kHalfWidth) { return {x - hw, y0, x + hw, y1}; }
Hall lobby(double x, double y) { return {x - kLobby, y - kLobby, x + kLobby, y + kLobby}; }

double polyline_length(const std::vector<Point2>& corners) {
  double len = 0.0;
  for (std::size_t i = 1; i < corners.size(); ++i) len += (corners[i] - corners[i - 1]).norm();
  return len;
}

}  // namespace

std::vector<Point2> sample_walk(const std::vector<Point2>& corners, double spacing) {
  std::vector<Point2> out;
  if (corners.empty()) return out;
  out.push_back(corners.front());
  for (std::size_t i = 1; i < corners.size(); ++i) {
    const Point2 a = corners[i - 1];
    const Point2 b = corners[i];
    const int n = std::max(1, static_cast<int>(std::lround((b - a).norm() / spacing)));
    for (int k = 1; k <= n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  return out;
}

Environment hallway_environment(const std::vector<Hall>& halls, double margin, double resolution) {
  double x0 = halls.front().x0, y0 = halls.front().y0, x1 = halls.front().x1, y1 = halls.front().y1;
  for (const auto& h : halls) {
    x0 = std::min(x0, h.x0);
    y0 = std::min(y0, h.y0);
    x1 = std::max(x1, h.x1);
    y1 = std::max(y1, h.y1);
  }
  x0 -= margin;
  y0 -= margin;
  x1 += margin;
  y1 += margin;

  Environment env;
  env.resolution = resolution;
  env.origin = Point2(x0, y0);
  env.width = static_cast<int>(std::ceil((x1 - x0) / resolution - 1e-9));
  env.height = static_cast<int>(std::ceil((y1 - y0) / resolution - 1e-9));

  // Compress coordinates so the wall set is the finite union of cells not inside any hall.
  std::set<double> xs{x0, x1}, ys{y0, y1};
  for (const auto& h : halls) {
    xs.insert(h.x0);
    xs.insert(h.x1);
    ys.insert(h.y0);
    ys.insert(h.y1);
  }
  const std::vector<double> vx(xs.begin(), xs.end()), vy(ys.begin(), ys.end());
  auto free_at = [&](double x, double y) {
    return std::any_of(halls.begin(), halls.end(),
                       [&](const Hall& h) { return x > h.x0 && x < h.x1 && y > h.y0 && y < h.y1; });
  };
  for (std::size_t j = 0; j + 1 < vy.size(); ++j) {
    const double cy = 0.5 * (vy[j] + vy[j + 1]);
    std::size_t i = 0;
    while (i + 1 < vx.size()) {
      if (free_at(0.5 * (vx[i] + vx[i + 1]), cy)) {
        ++i;
        continue;
      }
      std::size_t k = i + 1;
      while (k + 1 < vx.size() && !free_at(0.5 * (vx[k] + vx[k + 1]), cy)) ++k;
      env.obstacles.push_back(Obstacle{RectShape{vx[i], vy[j], vx[k] - vx[i], vy[j + 1] - vy[j]}, {}, 0.0});
      i = k;
    }
  }
  return env;
}

MapData build(const Office& office) { return build_map(office.walks, office.tags); }

Office straight_office() {
  Office o;
  o.name = "straight";
  const std::vector<Point2> route{{0, 0}, {20, 0}};
  o.walks = {sample_walk(route)};
  o.tags = {{"Entrance", {0, 0}, std::nullopt}, {"Lobby", {10, 0}, std::nullopt}, {"Office201", {20, 0}, std::nullopt}};
  o.halls = {hband(-3, 20 + kRunout, 0), hband(2.5, 9.5, 0, kAtrium), hband(12, 18.5, 0, kAtrium)};
  o.from = "Entrance";
  o.to = "Office201";
  o.route_length = polyline_length(route);
  return o;
}

Office l_office() {
  Office o;
  o.name = "L";
  const std::vector<Point2> route{{0, 0}, {12, 0}, {12, 13}};
  o.walks = {sample_walk(route)};
  o.tags = {{"Stairs", {0, 0}, std::nullopt}, {"Corner", {12, 0}, std::nullopt}, {"Lab5", {12, 13}, std::nullopt}};
  // The runout past the corner keeps the far wall out of ultrasonic range while turning.
  o.halls = {hband(-3, 12 + kRunout, 0), vband(12, -kRunout, 13 + kRunout), lobby(12, 0), hband(2.5, 9.5, 0, kAtrium),
             vband(12, 4.5, 9.5, kAtrium)};
  o.from = "Stairs";
  o.to = "Lab5";
  o.route_length = polyline_length(route);
  return o;
}

Office junction_office() {
  Office o;
  o.name = "junction";
  const std::vector<Point2> main{{0, 0}, {14, 0}, {14, 6}, {20, 6}, {20, 9.5}};
  o.walks = {sample_walk(main), sample_walk({{14, 0}, {14, -3}, {20, -3}, {20, 6}}), sample_walk({{8, 6}, {14, 6}})};
  o.tags = {{"J", {0, 0}, std::nullopt},  {"I", {14, 0}, std::nullopt},         {"K", {14, 6}, std::nullopt},
            {"H", {20, 6}, std::nullopt}, {"Room3311", {20, 9.5}, std::nullopt}, {"L", {17, -3}, std::nullopt},
            {"M", {8, 6}, std::nullopt}};
  // The atrium ends well before the first lobby so a walker leaving a bypass is realigned before turning.
  o.halls = {hband(-3, 14 + kRunout, 0),
             vband(14, -3 - kHalfWidth, 6 + kRunout),
             hband(7, 20 + kRunout, 6),
             vband(20, -3 - kHalfWidth, 9.5 + kRunout),
             hband(14, 20, -3),
             lobby(14, 0),
             lobby(14, 6),
             lobby(20, 6),
             hband(2.5, 9.5, 0, kAtrium)};
  o.from = "J";
  o.to = "Room3311";
  o.route_length = polyline_length(main);
  return o;
}

std::vector<Office> all_offices() { return {straight_office(), l_office(), junction_office()}; }

Environment obstacle_environment(const Office& office) {
  Environment env = hallway_environment(office.halls);
  auto add_static = [&](Shape s) { env.obstacles.push_back(Obstacle{s, {}, 0.0}); };
  auto add_moving = [&](double r, std::vector<Point2> loop, double speed) {
    env.obstacles.push_back(Obstacle{CircleShape{0, 0, r}, std::move(loop), speed});
  };
  // Obstacles sit in the open sections so a bypass exists; each one overlaps the route.
  if (office.name == "straight") {
    add_static(RectShape{5.0, -0.3, 0.5, 0.6});
    add_moving(0.25, {{8.0, 0.0}, {8.0, -1.4}}, 0.15);
    add_static(CircleShape{15.0, 0.1, 0.3});
  } else if (office.name == "L") {
    add_static(RectShape{5.0, -0.3, 0.5, 0.6});
    add_moving(0.25, {{8.0, 0.0}, {8.0, -1.4}}, 0.15);
    add_static(CircleShape{12.1, 7.0, 0.3});
  } else {
    add_static(RectShape{5.0, -0.3, 0.5, 0.6});
    add_moving(0.25, {{8.0, 0.0}, {8.0, -1.4}}, 0.15);
  }
  return env;
}

SimConfig experiment_config() { return SimConfig{}; }

RecoveryCheck check_recovery(const TrajectoryRecord& record, double dt, double exceed, double settle, double window) {
  RecoveryCheck out;
  const Polyline path(record.path);
  std::optional<std::uint64_t> opened;
  for (const auto& s : record.samples) {
    const double d = distance_to_polyline(s.pose.position, path);
    if (!opened && d > exceed) {
      opened = s.tick;
      ++out.excursions;
    } else if (opened && d < settle) {
      out.worst_seconds = std::max(out.worst_seconds, static_cast<double>(s.tick - *opened) * dt);
      opened.reset();
    }
  }
  if (opened) {
    out.worst_seconds = std::max(out.worst_seconds, static_cast<double>(record.samples.back().tick - *opened) * dt);
    out.ok = false;
  }
  if (out.worst_seconds > window) out.ok = false;
  return out;
}

void export_office(const Office& office, const std::filesystem::path& dir) {
  using nlohmann::json;
  auto points = [](const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({round_significant(p.x()), round_significant(p.y())});
    return arr;
  };
  json walks = json::array();
  for (const auto& w : office.walks) walks.push_back(points(w));
  write_text_file(dir / (office.name + "_walks.json"),
                  json{{"spacing", kDefaultRecordSpacing}, {"walks", walks}}.dump() + "\n");

  json tags = json::array();
  for (const auto& t : office.tags) {
    json j{{"label", t.label}, {"x", t.position.x()}, {"y", t.position.y()}};
    if (t.id) j["id"] = *t.id;
    tags.push_back(j);
  }
  write_text_file(dir / (office.name + "_tags.json"),
                  json{{"snap_radius", kDefaultSnapRadius}, {"tags", tags}}.dump(2) + "\n");
  write_text_file(dir / (office.name + "_env.json"), save_environment(hallway_environment(office.halls)));
  write_text_file(dir / (office.name + "_obstacles_env.json"), save_environment(obstacle_environment(office)));
}

CommandResult run_command(const std::string& command) {
  CommandResult out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.output.append(buf.data(), n);
  const int status = pclose(pipe);
  out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / (name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace vroad::fixtures

// Command-line front end: build-road, plan, simulate, stats.

#include "vroad/blind_road.hpp"
#include "vroad/errors.hpp"
#include "vroad/io.hpp"
#include "vroad/sim.hpp"
#include "vroad/wayfinding.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRoute = 2;
constexpr int kExitIo = 3;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(text, &used, 0);
  if (used != text.size()) throw std::invalid_argument("bad seed");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual blind road: map building, planning, and closed-loop walking simulation"};
  app.require_subcommand(1);

  std::string traj_in, tags_in, map_out;
  auto* build = app.add_subcommand("build-road", "build a PoI map from recorded walks and tags");
  build->add_option("trajectory", traj_in, "recorded walk JSON")->required();
  build->add_option("--tags", tags_in, "PoI tag JSON")->required();
  build->add_option("-o,--output", map_out, "map JSON to write")->required();

  std::string map_in, from, to, path_out;
  auto* plan = app.add_subcommand("plan", "plan the shortest route between two PoIs");
  plan->add_option("map", map_in, "map JSON")->required();
  plan->add_option("--from", from, "start label")->required();
  plan->add_option("--to", to, "goal label")->required();
  plan->add_option("-o,--output", path_out, "path JSON to write")->required();

  std::string sim_map, env_in, cfg_in, csv_out, seed_text = "0";
  bool trace = false;
  auto* sim = app.add_subcommand("simulate", "walk a simulated user along a planned route");
  sim->add_option("map", sim_map, "map JSON")->required();
  sim->add_option("env", env_in, "environment JSON")->required();
  sim->add_option("--from", from, "start label")->required();
  sim->add_option("--to", to, "goal label")->required();
  sim->add_option("--seed", seed_text, "random seed (VROAD_SEED overrides)");
  sim->add_option("--config", cfg_in, "config JSON");
  sim->add_option("-o,--output", csv_out, "trajectory CSV to write")->required();
  sim->add_flag("--trace", trace, "print per-tick follower internals as CSV on stdout");

  std::string stats_csv, stats_path;
  auto* stats = app.add_subcommand("stats", "deviation statistics of a trajectory against a path");
  stats->add_option("trajectory", stats_csv, "trajectory CSV")->required();
  stats->add_option("path", stats_path, "path JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) {
      const vroad::RecordedWalks walks = vroad::load_walks(vroad::read_text_file(traj_in));
      const vroad::TagFile tags = vroad::load_tags(vroad::read_text_file(tags_in));
      const vroad::MapData map = vroad::build_map(walks.walks, tags.tags, walks.spacing, tags.snap_radius);
      vroad::write_text_file(map_out, vroad::save_map(map));
      std::printf("nodes=%zu edges=%zu road_points=%zu\n", map.graph.nodes().size(), map.graph.edges().size(),
                  map.road.size());
    } else if (*plan) {
      const vroad::MapData map = vroad::load_map(vroad::read_text_file(map_in));
      const vroad::PoINode* a = map.graph.find_label(from);
      if (a == nullptr) throw vroad::UnknownLabel(from);
      const vroad::PoINode* b = map.graph.find_label(to);
      if (b == nullptr) throw vroad::UnknownLabel(to);
      const vroad::NodeRoute route = vroad::astar(map.graph, a->id, b->id);
      const vroad::GlobalPath path = vroad::expand_path(map.graph, route);
      vroad::write_text_file(path_out, vroad::save_path(path));
      std::vector<std::string> labels;
      for (const auto& id : route.node_ids) labels.push_back(map.graph.node(id).label);
      std::printf("route %s\ncost %.6f\n", join(labels).c_str(), route.total_cost);
    } else if (*sim) {
      if (const char* env_seed = std::getenv("VROAD_SEED"); env_seed != nullptr && *env_seed != '\0') {
        seed_text = env_seed;
      }
      std::uint64_t seed = 0;
      try {
        seed = parse_seed(seed_text);
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: seed must be a non-negative integer, got '%s'\n", seed_text.c_str());
        return kExitUsage;
      }
      const vroad::MapData map = vroad::load_map(vroad::read_text_file(sim_map));
      const vroad::Environment env = vroad::load_environment(vroad::read_text_file(env_in));
      const vroad::SimConfig cfg = cfg_in.empty() ? vroad::SimConfig{} : vroad::load_config(vroad::read_text_file(cfg_in));
      const vroad::TrajectoryRecord record = vroad::run_scenario(env, map, from, to, cfg, seed);
      std::ostringstream csv;
      vroad::write_trajectory_csv(csv, record);
      vroad::write_text_file(csv_out, csv.str());
      if (trace) {
        vroad::write_trace_csv(std::cout, record);
      } else {
        std::printf("outcome %s ticks %zu\n", std::string(vroad::to_string(record.outcome)).c_str(),
                    record.samples.size());
      }
    } else if (*stats) {
      std::ifstream in(stats_csv);
      if (!in) throw vroad::IoError("cannot open " + stats_csv);
      const std::vector<vroad::CsvSample> rows = vroad::read_trajectory_csv(in);
      if (rows.empty()) throw vroad::ParseError("trajectory CSV has no samples");
      const vroad::GlobalPath path = vroad::load_path(vroad::read_text_file(stats_path));
      std::vector<vroad::Point2> positions;
      for (const auto& r : rows) positions.push_back(r.position);
      std::fputs(vroad::format_stats(vroad::deviation_stats(positions, path.points)).c_str(), stdout);
    }
  } catch (const vroad::NoPath& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRoute;
  } catch (const vroad::UnknownLabel& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRoute;
  } catch (const vroad::UnknownNode& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRoute;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}

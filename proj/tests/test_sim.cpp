#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vroad/errors.hpp"
#include "vroad/sim.hpp"
#include "fixtures.hpp"

#include <cmath>

using namespace vroad;

namespace {

WalkerModel quiet_walker() {
  WalkerModel m;
  m.compliance_noise = 0.0;
  return m;
}

GuidanceOutput walk(double direction) {
  GuidanceOutput g;
  g.walk_direction = RelativeAngle(direction);
  g.cue = render_cue(g.walk_direction, false);
  return g;
}

GuidanceOutput stop(double bearing) {
  GuidanceOutput g;
  g.cue = Cue::Stop;
  g.subgoal_bearing = RelativeAngle(bearing);
  return g;
}

// 2 m hallway with a PoI at each end.
fixtures::Office short_office() {
  fixtures::Office o;
  o.name = "short";
  o.walks = {fixtures::sample_walk({{0, 0}, {2, 0}})};
  o.tags = {{"A", {0, 0}, std::nullopt}, {"B", {2, 0}, std::nullopt}};
  o.halls = {{-2, -0.6, 4, 0.6}};
  o.from = "A";
  o.to = "B";
  o.route_length = 2.0;
  return o;
}

}  // namespace

TEST_CASE("walker_step moves along the commanded direction") {
  const WalkerModel m = quiet_walker();
  WalkerState s;
  s.pose = Pose{Point2(1, 1), GlobalAngle(0.0)};
  const WalkerState next = walker_step(s, walk(0.0), m, 0, 1);
  CHECK(next.pose.position.isApprox(Point2(1 + m.speed * m.dt, 1)));
  CHECK(next.pose.heading.radians() == 0.0);

  const WalkerState turned = walker_step(s, walk(0.1), m, 0, 1);
  CHECK(turned.pose.heading.radians() == doctest::Approx(0.1));
  CHECK(turned.pose.position.isApprox(Point2(1 + m.speed * m.dt * std::cos(0.1), 1 + m.speed * m.dt * std::sin(0.1))));
}

TEST_CASE("walker turn rate is clamped") {
  const WalkerModel m = quiet_walker();
  WalkerState s;
  s.pose = Pose{Point2(0, 0), GlobalAngle(1.0)};
  const WalkerState behind = walker_step(s, walk(kPi), m, 0, 1);
  CHECK(behind.pose.heading.radians() - 1.0 == doctest::Approx(0.05 * kPi).epsilon(1e-12));
  const WalkerState right = walker_step(s, walk(-2.0), m, 0, 1);
  CHECK(1.0 - right.pose.heading.radians() == doctest::Approx(0.05 * kPi).epsilon(1e-12));
}

TEST_CASE("compliance noise bends the step, not the heading") {
  WalkerModel m;
  m.compliance_noise = 0.2;
  WalkerState s;
  s.pose = Pose{Point2(0, 0), GlobalAngle(0.0)};
  const WalkerState a = walker_step(s, walk(0.0), m, 5, 9);
  const WalkerState b = walker_step(s, walk(0.0), m, 5, 9);
  CHECK(a.pose.heading.radians() == 0.0);
  CHECK(a.pose.position == b.pose.position);
  CHECK(a.pose.position.norm() == doctest::Approx(m.speed * m.dt));
  CHECK(a.pose.position.y() != 0.0);
  CHECK(walker_step(s, walk(0.0), m, 6, 9).pose.position != a.pose.position);
}

TEST_CASE("stopped walker rotates in place toward the sub-goal side") {
  const WalkerModel m = quiet_walker();
  const double rot = m.scan_rate * m.dt;
  WalkerState s;
  s.pose = Pose{Point2(2, 3), GlobalAngle(1.0)};

  WalkerState left = walker_step(s, stop(0.4), m, 0, 1);
  CHECK(left.pose.position == s.pose.position);
  CHECK(left.pose.heading.radians() == doctest::Approx(1.0 + rot));
  // The side stays latched even when the bearing flips during the stop.
  left = walker_step(left, stop(-0.4), m, 1, 1);
  CHECK(left.pose.heading.radians() == doctest::Approx(1.0 + 2 * rot));

  const WalkerState right = walker_step(s, stop(-0.4), m, 0, 1);
  CHECK(right.pose.heading.radians() == doctest::Approx(1.0 - rot));

  // Walking again clears the latch.
  WalkerState resumed = walker_step(left, walk(0.0), m, 2, 1);
  CHECK(resumed.scan_dir == 0);
  resumed = walker_step(resumed, stop(-0.4), m, 3, 1);
  CHECK(resumed.scan_dir == -1);
}

TEST_CASE("stopped walker with the sub-goal dead ahead sweeps both ways") {
  const WalkerModel m = quiet_walker();
  WalkerState s;
  s.pose = Pose{Point2(0, 0), GlobalAngle(0.0)};
  double lo = 0.0, hi = 0.0;
  bool went_right_after_left = false;
  for (int t = 0; t < 200; ++t) {
    const int before = s.scan_dir;
    s = walker_step(s, stop(0.0), m, t, 1);
    CHECK(s.pose.position == Point2(0, 0));
    const double h = wrap_relative(s.pose.heading.radians());
    lo = std::min(lo, h);
    hi = std::max(hi, h);
    went_right_after_left = went_right_after_left || (before == 1 && s.scan_dir == -1);
  }
  CHECK(went_right_after_left);
  CHECK(hi >= kPi / 4 - 1e-9);
  CHECK(lo <= -kPi / 4 + 1e-9);
}

TEST_CASE("arrived walker stays put") {
  WalkerState s;
  s.pose = Pose{Point2(4, 4), GlobalAngle(2.0)};
  GuidanceOutput g;
  g.arrived = true;
  g.cue = Cue::Arrived;
  const WalkerState next = walker_step(s, g, WalkerModel{}, 0, 1);
  CHECK(next.pose.position == s.pose.position);
  CHECK(next.pose.heading == s.pose.heading);
}

TEST_CASE("deviation_stats examples") {
  const Polyline path({{0, 0}, {10, 0}});
  const std::vector<Point2> on{{0, 0}, {2.5, 0}, {10, 0}};
  const DeviationStats zero = deviation_stats(on, path);
  CHECK(zero.max_dev == 0.0);
  CHECK(zero.avg_dev == 0.0);
  CHECK(zero.variance == 0.0);

  const std::vector<Point2> offset{{1, 0.5}, {3.3, 0.5}, {7, -0.5}};
  const DeviationStats flat = deviation_stats(offset, path);
  CHECK(flat.max_dev == doctest::Approx(0.5));
  CHECK(flat.avg_dev == doctest::Approx(0.5));
  CHECK(flat.variance == doctest::Approx(0.0));

  const std::vector<Point2> two{{4, 0}, {4, 1}};
  const DeviationStats spread = deviation_stats(two, path);
  CHECK(spread.max_dev == doctest::Approx(1.0));
  CHECK(spread.avg_dev == doctest::Approx(0.5));
  CHECK(spread.variance == doctest::Approx(0.25));

  // Segment projection, not nearest vertex.
  const std::vector<Point2> mid{{5, 0.2}};
  CHECK(deviation_stats(mid, Polyline({{0, 0}, {10, 0}})).max_dev == doctest::Approx(0.2));

  CHECK_THROWS_AS(deviation_stats(std::vector<Point2>{}, path), std::invalid_argument);
}

TEST_CASE("short straight corridor arrives") {
  const fixtures::Office o = short_office();
  const MapData map = fixtures::build(o);
  const TrajectoryRecord r = run_scenario(fixtures::hallway_environment(o.halls), map, "A", "B", SimConfig{}, 1);
  CHECK(r.outcome == Outcome::Arrived);
  REQUIRE_FALSE(r.samples.empty());
  CHECK((r.samples.back().pose.position - Point2(2, 0)).norm() < 1.0);
  for (std::size_t i = 1; i < r.samples.size(); ++i) CHECK(r.samples[i].tick > r.samples[i - 1].tick);
  CHECK(r.route.node_ids == std::vector<std::string>{"A", "B"});
}

TEST_CASE("L route without obstacles stays close to the path") {
  const fixtures::Office o = fixtures::l_office();
  const MapData map = fixtures::build(o);
  const TrajectoryRecord r =
      run_scenario(fixtures::hallway_environment(o.halls), map, o.from, o.to, fixtures::experiment_config(), 1);
  CHECK(r.outcome == Outcome::Arrived);
  const DeviationStats st = deviation_stats(r, GlobalPath{Polyline(r.path)});
  CHECK(st.max_dev < 1.0);
  CHECK(st.avg_dev < 0.3);
  CHECK(st.max_dev >= st.avg_dev);
  CHECK(st.variance >= 0.0);
}

TEST_CASE("a walled-off corridor times out without collision") {
  const fixtures::Office o = fixtures::straight_office();
  const MapData map = fixtures::build(o);
  Environment env = fixtures::hallway_environment(o.halls);
  env.obstacles.push_back(Obstacle{RectShape{10.0, -3.0, 0.3, 6.0}, {}, 0.0});
  SimConfig cfg;
  cfg.timeout = 60.0;
  const TrajectoryRecord r = run_scenario(env, map, o.from, o.to, cfg, 3);
  CHECK(r.outcome == Outcome::Timeout);
  CHECK(r.samples.size() == 601);
  for (const auto& s : r.samples) CHECK(s.pose.position.x() < 10.0);
}

TEST_CASE("raising the timeout keeps an arrival") {
  const fixtures::Office o = fixtures::junction_office();
  const MapData map = fixtures::build(o);
  const Environment env = fixtures::obstacle_environment(o);
  SimConfig cfg;
  const TrajectoryRecord base = run_scenario(env, map, o.from, o.to, cfg, 4);
  REQUIRE(base.outcome == Outcome::Arrived);
  cfg.timeout = 400.0;
  const TrajectoryRecord longer = run_scenario(env, map, o.from, o.to, cfg, 4);
  CHECK(longer.outcome == Outcome::Arrived);
  CHECK(longer.samples.size() == base.samples.size());
}

TEST_CASE("runs are deterministic in the seed") {
  const fixtures::Office o = fixtures::straight_office();
  const MapData map = fixtures::build(o);
  const Environment env = fixtures::obstacle_environment(o);
  const TrajectoryRecord a = run_scenario(env, map, o.from, o.to, SimConfig{}, 11);
  const TrajectoryRecord b = run_scenario(env, map, o.from, o.to, SimConfig{}, 11);
  const TrajectoryRecord c = run_scenario(env, map, o.from, o.to, SimConfig{}, 12);
  REQUIRE(a.samples.size() == b.samples.size());
  bool identical = true;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    identical = identical && a.samples[i].pose.position == b.samples[i].pose.position &&
                a.samples[i].pose.heading == b.samples[i].pose.heading;
  CHECK(identical);
  CHECK((c.samples.size() != a.samples.size() || c.samples[5].pose.position != a.samples[5].pose.position));
}

TEST_CASE("scenario errors") {
  const fixtures::Office o = short_office();
  const MapData map = fixtures::build(o);
  const Environment env = fixtures::hallway_environment(o.halls);
  CHECK_THROWS_AS(run_scenario(env, map, "A", "Nowhere", SimConfig{}, 1), UnknownLabel);
  SimConfig bad;
  bad.walker.speed = 0.0;
  CHECK_THROWS_AS(run_scenario(env, map, "A", "B", bad, 1), std::invalid_argument);
}

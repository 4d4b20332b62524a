#include <cmath>
#include <variant>

#include "doctest.h"
#include "vlpslam/mapper.hpp"
#include "vlpslam/sim.hpp"
#include "vlpslam/world.hpp"

using namespace vlpslam;

namespace {

LidarScan perfect_scan(const WorldModel& world, const Pose2D& pose,
                       const LidarSpec& spec) {
  LidarScan scan;
  scan.angle_min = spec.angle_min;
  scan.angle_increment = spec.angle_increment;
  scan.max_range = spec.max_range;
  scan.ranges.resize(spec.beam_count);
  for (int i = 0; i < spec.beam_count; ++i) {
    const double angle = pose.theta + spec.angle_min + i * spec.angle_increment;
    const double r = cast_ray(world, {pose.x, pose.y}, angle, spec.max_range, 0.0);
    scan.ranges[i] = std::isinf(r) ? spec.max_range : r;
  }
  return scan;
}

// 6x6 m box room with a pillar, centered on the origin.
WorldModel box_room() {
  WorldModel world;
  const GridGeometry geom(120, 120, 0.05, Pose2D(-3.0, -3.0, 0.0));
  TrinaryGrid grid(geom, CellState::Free);
  for (int i = 0; i < 120; ++i) {
    grid.set({i, 0}, CellState::Occupied);
    grid.set({i, 119}, CellState::Occupied);
    grid.set({0, i}, CellState::Occupied);
    grid.set({119, i}, CellState::Occupied);
  }
  for (int iy = 70; iy < 76; ++iy) {
    for (int ix = 80; ix < 86; ++ix) {
      grid.set({ix, iy}, CellState::Occupied);
    }
  }
  world.grid = std::move(grid);
  world.bounds_x = 6.0;
  world.bounds_y = 6.0;
  return world;
}

OdometrySample exact_increment(const Pose2D& from, const Pose2D& to) {
  const Pose2D d = between(from, to);
  OdometrySample s;
  s.dx = d.x;
  s.dy = d.y;
  s.dtheta = d.theta;
  return s;
}

}  // namespace

TEST_CASE("odometry accumulates in the body frame") {
  GridMapper mapper(MapperConfig{}, 0.0);
  OdometrySample a;
  a.dx = 0.5;
  a.dtheta = kPi / 2.0;
  OdometrySample b;
  b.dx = 0.3;
  mapper.add_odometry(a);
  mapper.add_odometry(b);
  const Pose2D p = mapper.mapper_pose();
  // forward 0.5, turn left 90, forward 0.3
  CHECK(p.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(p.theta == doctest::Approx(kPi / 2.0));
}

TEST_CASE("declared start heading feeds the fused heading") {
  GridMapper mapper(MapperConfig{}, 0.6);
  CHECK(mapper.fused_heading() == doctest::Approx(0.6));
  OdometrySample turn;
  turn.dtheta = 0.5;
  mapper.add_odometry(turn);
  CHECK(mapper.fused_heading() == doctest::Approx(1.1));
}

TEST_CASE("first high-quality fix pins the private frame") {
  GridMapper mapper(MapperConfig{}, 0.3);
  OdometrySample move;
  move.dx = 1.0;
  move.dy = 0.2;
  move.dtheta = 0.4;
  mapper.add_odometry(move);
  const Pose2D mp = mapper.mapper_pose();
  CHECK(!mapper.anchored());

  VlpFix weak;
  weak.x = 4.0;
  weak.y = 2.0;
  weak.quality = 0.5;  // below the 0.8 bar
  mapper.add_vlp_fix(weak);
  CHECK(!mapper.anchored());

  VlpFix strong = weak;
  strong.quality = 0.95;
  mapper.add_vlp_fix(strong);
  REQUIRE(mapper.anchored());

  // the anchor maps the current private pose onto the fix with fused heading
  const Pose2D world_pose = mapper.anchor().apply(mp);
  CHECK(world_pose.x == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(world_pose.y == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(world_pose.theta == doctest::Approx(wrap_angle(0.3 + mp.theta)));

  // later fixes leave the anchor alone
  VlpFix other = strong;
  other.x = -2.0;
  mapper.add_vlp_fix(other);
  const Pose2D again = mapper.anchor().apply(mp);
  CHECK(again.x == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("export re-expresses the origin through the anchor") {
  MapperConfig cfg;
  GridMapper mapper(cfg, 0.0);
  const Pose2D raw_origin = mapper.raw_grid().geometry().origin();
  CHECK(raw_origin.x == doctest::Approx(-0.5 * cfg.width * cfg.resolution));

  // not anchored: identity
  CHECK(mapper.export_map().geometry().origin().x == doctest::Approx(raw_origin.x));

  VlpFix fix;
  fix.x = 3.0;
  fix.y = 2.0;
  fix.quality = 0.9;
  mapper.add_vlp_fix(fix);  // mapper pose still at the private origin
  const TrinaryGrid out = mapper.export_map();
  const Pose2D expect = mapper.anchor().apply(raw_origin);
  CHECK(out.geometry().origin().x == doctest::Approx(expect.x));
  CHECK(out.geometry().origin().y == doctest::Approx(expect.y));
  CHECK(out.geometry().origin().theta == doctest::Approx(expect.theta));
  // anchored at the origin with zero rotation: origin shifts by the fix
  CHECK(out.geometry().origin().x == doctest::Approx(raw_origin.x + 3.0));
  // cells are untouched by the export (all unknown, nothing inserted)
  CHECK(out.count(CellState::Unknown) == out.cells().size());
}

TEST_CASE("perfect data produces a faithful room map") {
  const WorldModel world = box_room();
  LidarSpec spec;
  spec.range_std = 0.0;

  MapperConfig cfg;
  GridMapper mapper(cfg, 0.0);

  // drive a straight 2 m line west-to-east through the room center
  const Pose2D start(-1.0, 0.0, 0.0);
  Pose2D truth = start;
  Pose2D prev = start;
  mapper.add_scan(perfect_scan(world, truth, spec));
  for (int step = 1; step <= 40; ++step) {
    truth = Pose2D(start.x + 0.05 * step, 0.0, 0.0);
    mapper.add_odometry(exact_increment(prev, truth));
    prev = truth;
    if (step % 4 == 0) {
      mapper.add_scan(perfect_scan(world, truth, spec));
    }
  }
  CHECK(mapper.scans_inserted() == 11);

  // the scan matcher must not have drifted off the exact odometry
  const Pose2D mp = mapper.mapper_pose();
  const Pose2D expect = between(start, truth);  // private frame = start frame
  CHECK(std::hypot(mp.x - expect.x, mp.y - expect.y) < 0.08);
  CHECK(std::abs(wrap_angle(mp.theta - expect.theta)) < 0.02);

  // compare the exported map against the real room, private frame = start at
  // (-1, 0): world point p maps to private p - start
  const TrinaryGrid built = mapper.export_map();
  int agree = 0, disagree = 0, occupied_seen = 0;
  const GridGeometry& tg = world.grid.geometry();
  for (int iy = 0; iy < tg.height(); ++iy) {
    for (int ix = 0; ix < tg.width(); ++ix) {
      const Vec2 w = tg.cell_center({ix, iy});
      const Vec2 priv{w.x - start.x, w.y - start.y};
      const GridIndex bc = built.geometry().world_to_cell(priv);
      if (!built.geometry().contains(bc)) continue;
      const CellState bs = built.at(bc);
      if (bs == CellState::Unknown) continue;
      const CellState ts = world.grid.at({ix, iy});
      if (bs == ts) {
        ++agree;
      } else {
        ++disagree;
      }
      if (bs == CellState::Occupied) ++occupied_seen;
    }
  }
  CHECK(agree > 2000);
  CHECK(occupied_seen > 100);
  CHECK(static_cast<double>(agree) / (agree + disagree) > 0.97);
}

TEST_CASE("replaying a recorded run anchors against the beacon map") {
  const WorldModel world = make_lab_world();
  SensorSuite suite;
  suite.odometry_noise = {0.0, 0.0, 0.0, 0.0};
  suite.lidar.range_std = 0.0;
  suite.camera.pixel_std = 0.0;
  suite.camera.diameter_std = 0.0;
  suite.camera.decode_prob = 1.0;

  ScenarioScript script;
  script.start = Pose2D(3.0, 2.0, 0.0);  // right under beacon 1
  script.waypoints = {{4.6, 2.0}};
  script.cruise_speed = 0.2;
  script.duration = 10.0;
  const SensorLog log = run_scenario(world, script, suite, 42, "mapper-unit");

  VlpConfig vlp;
  const MapBuildResult result = build_map(log, world.led_map, MapperConfig{}, vlp, 0.0);
  CHECK(result.anchored);
  CHECK(result.scans_inserted == 51);
  REQUIRE(!result.trajectory.empty());
  // zero noise, start under the beacon: the anchored trajectory must track
  // the true path closely
  CHECK(std::hypot(result.trajectory.front().x - 3.0,
                   result.trajectory.front().y - 2.0) < 0.05);
  const Pose2D& last = result.trajectory.back();
  CHECK(last.x > 3.5);  // actually drove east
  CHECK(std::abs(last.y - 2.0) < 0.1);

  // without a beacon map there is nothing to anchor to
  const MapBuildResult blind = build_map(log, LedFeatureMap{}, MapperConfig{}, vlp, 0.0);
  CHECK(!blind.anchored);
  CHECK(blind.anchor.is_identity());
}

#include <cmath>
#include <optional>

#include "doctest.h"
#include "vlpslam/rng.hpp"
#include "vlpslam/sim.hpp"
#include "vlpslam/vlp.hpp"
#include "vlpslam/world.hpp"

using namespace vlpslam;

namespace {

VlpConfig config_from(const CameraModel& cam) {
  VlpConfig cfg;
  cfg.focal_px = cam.focal_px;
  cfg.cx = cam.cx;
  cfg.cy = cam.cy;
  cfg.camera_height = cam.height;
  cfg.min_apparent_px = cam.min_apparent_px;
  return cfg;
}

}  // namespace

TEST_CASE("noise-free fix inverts the projection everywhere in coverage") {
  const WorldModel world = make_lab_world();
  CameraModel cam;
  const VlpConfig cfg = config_from(cam);
  Rng rng(2001);

  int solved = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Pose2D pose(rng.uniform(-0.5, 10.5), rng.uniform(-0.5, 9.3),
                      rng.uniform(-kPi, kPi));
    CameraFrame frame;
    frame.t = 0.5;
    for (const LedBeacon& b : world.led_map.beacons()) {
      if (!cam.in_fov(pose, b)) continue;
      frame.observations.push_back(cam.project(pose, b));
    }
    if (frame.observations.empty()) continue;

    const auto fix = solve_vlp_fix(frame, world.led_map, pose.theta, cfg);
    REQUIRE(fix.has_value());
    const double err = std::hypot(fix->x - pose.x, fix->y - pose.y);
    CHECK(err < 1e-6);
    CHECK(fix->z == doctest::Approx(cam.height).epsilon(1e-9));
    CHECK(fix->measured_distance ==
          doctest::Approx(2.7 - cam.height).epsilon(1e-9));
    CHECK(fix->quality > 0.0);
    CHECK(fix->quality <= 1.0);
    ++solved;
  }
  // coverage in the lab is partial but far from empty
  CHECK(solved > 200);
}

TEST_CASE("fix quality decays off axis") {
  const LedFeatureMap map({{1, 3.0, 2.0, 2.7, 0.175}});
  CameraModel cam;
  const VlpConfig cfg = config_from(cam);

  CameraFrame centered;
  centered.observations.push_back(cam.project(Pose2D(3.0, 2.0, 0.0), map.beacons()[0]));
  CameraFrame offset;
  offset.observations.push_back(cam.project(Pose2D(2.2, 2.0, 0.0), map.beacons()[0]));

  const auto fc = solve_vlp_fix(centered, map, 0.0, cfg);
  const auto fo = solve_vlp_fix(offset, map, 0.0, cfg);
  REQUIRE(fc.has_value());
  REQUIRE(fo.has_value());
  CHECK(fc->quality == doctest::Approx(1.0));
  CHECK(fo->quality < fc->quality);
}

TEST_CASE("small blobs and unknown ids are rejected") {
  const LedFeatureMap map({{1, 3.0, 2.0, 2.7, 0.175}});
  VlpConfig cfg;

  CameraFrame tiny;
  tiny.observations.push_back({1, 1024.0, 768.0, 3.0});  // below 4 px
  CHECK(!solve_vlp_fix(tiny, map, 0.0, cfg).has_value());

  CameraFrame unknown;
  unknown.observations.push_back({42, 1024.0, 768.0, 50.0});
  CHECK(!solve_vlp_fix(unknown, map, 0.0, cfg).has_value());

  CameraFrame empty;
  CHECK(!solve_vlp_fix(empty, map, 0.0, cfg).has_value());
}

TEST_CASE("the larger blob wins when several beacons decode") {
  const LedFeatureMap map({{1, 0.0, 0.0, 2.7, 0.175}, {2, 0.0, 0.0, 2.2, 0.175}});
  VlpConfig cfg;
  CameraFrame frame;
  frame.observations.push_back({1, 1024.0, 768.0, 100.0});
  frame.observations.push_back({2, 1024.0, 768.0, 130.0});  // closer, bigger
  const auto fix = solve_vlp_fix(frame, map, 0.0, cfg);
  REQUIRE(fix.has_value());
  CHECK(fix->beacon_id == 2);
}

TEST_CASE("heading error rotates the fix around the beacon") {
  const LedFeatureMap map({{1, 3.0, 2.0, 2.7, 0.175}});
  CameraModel cam;
  const VlpConfig cfg = config_from(cam);
  const Pose2D pose(2.5, 2.0, 0.0);  // half a meter west of the beacon

  CameraFrame frame;
  frame.observations.push_back(cam.project(pose, map.beacons()[0]));

  const auto good = solve_vlp_fix(frame, map, 0.0, cfg);
  const auto bad = solve_vlp_fix(frame, map, 0.5, cfg);
  REQUIRE(good.has_value());
  REQUIRE(bad.has_value());
  CHECK(std::hypot(good->x - pose.x, good->y - pose.y) < 1e-9);
  // wrong heading: same distance from the beacon, wrong bearing
  const double r_good = std::hypot(good->x - 3.0, good->y - 2.0);
  const double r_bad = std::hypot(bad->x - 3.0, bad->y - 2.0);
  CHECK(r_bad == doctest::Approx(r_good).epsilon(1e-9));
  CHECK(std::hypot(bad->x - pose.x, bad->y - pose.y) >
        0.9 * r_good * 0.5);  // a 0.5 rad error moves the fix noticeably
}

TEST_CASE("diameter-derived distance is used when the map height is not trusted") {
  const LedFeatureMap map({{1, 3.0, 2.0, 2.7, 0.175}});
  CameraModel cam;
  VlpConfig cfg = config_from(cam);
  const Pose2D pose(2.5, 2.0, 0.0);
  CameraFrame frame;
  LedObservation obs = cam.project(pose, map.beacons()[0]);
  obs.apparent_diameter_px *= 1.1;  // pretend the blob is larger = closer
  frame.observations.push_back(obs);

  cfg.trust_map_height = true;
  const auto trusting = solve_vlp_fix(frame, map, 0.0, cfg);
  cfg.trust_map_height = false;
  const auto raw = solve_vlp_fix(frame, map, 0.0, cfg);
  REQUIRE(trusting.has_value());
  REQUIRE(raw.has_value());
  // trusted height: horizontal solution unaffected by the diameter error
  CHECK(std::hypot(trusting->x - pose.x, trusting->y - pose.y) < 1e-9);
  CHECK(std::hypot(raw->x - pose.x, raw->y - pose.y) > 0.01);
  // both report the same (biased) vertical estimate
  CHECK(trusting->measured_distance == doctest::Approx(2.4 / 1.1));
  CHECK(raw->measured_distance == trusting->measured_distance);
}

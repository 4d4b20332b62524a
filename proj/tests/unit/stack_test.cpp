#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "vlpslam/harness.hpp"
#include "vlpslam/sim.hpp"
#include "vlpslam/stack.hpp"
#include "vlpslam/world.hpp"

using namespace vlpslam;

namespace {

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

bool same_pose_bits(const Pose2D& a, const Pose2D& b) {
  return same_bits(a.x, b.x) && same_bits(a.y, b.y) && same_bits(a.theta, b.theta);
}

SensorLog make_short_log(const WorldModel& world, const SensorSuite& suite,
                         std::uint64_t seed) {
  ScenarioScript script;
  script.start = Pose2D(3.0, 2.0, 0.0);  // under a beacon, in the corridor
  script.waypoints = {{4.5, 2.0}};
  script.cruise_speed = 0.2;
  script.duration = 8.0;
  return run_scenario(world, script, suite, seed, "short");
}

}  // namespace

TEST_CASE("ingest is insensitive to arrival order inside the reorder window") {
  const WorldModel world = make_lab_world();
  SensorSuite suite;
  const SensorLog log = make_short_log(world, suite, 42);
  REQUIRE(log.events.size() > 100);

  StackConfig cfg;
  const Pose2D init(3.0, 2.0, 0.0);

  FusionStack in_order(world.grid, world.led_map, cfg, 7);
  in_order.init_gaussian(init, 0.05, 0.02);
  for (const SensorEvent& e : log.events) in_order.ingest(e);
  in_order.finish();

  // Reverse arrival within 100 ms chunks; the 150 ms reorder delay means the
  // release order, and therefore every downstream number, must be unchanged.
  std::vector<SensorEvent> shuffled;
  std::size_t i = 0;
  while (i < log.events.size()) {
    const double chunk = std::floor(event_time(log.events[i]) / 0.1);
    std::size_t j = i;
    while (j < log.events.size() &&
           std::floor(event_time(log.events[j]) / 0.1) == chunk) {
      ++j;
    }
    for (std::size_t k = j; k > i; --k) shuffled.push_back(log.events[k - 1]);
    i = j;
  }
  REQUIRE(shuffled.size() == log.events.size());

  FusionStack scrambled(world.grid, world.led_map, cfg, 7);
  scrambled.init_gaussian(init, 0.05, 0.02);
  for (const SensorEvent& e : shuffled) scrambled.ingest(e);
  scrambled.finish();

  CHECK(same_pose_bits(in_order.fused_pose(), scrambled.fused_pose()));
  const Eigen::Matrix3d pa = in_order.ekf().covariance();
  const Eigen::Matrix3d pb = scrambled.ekf().covariance();
  CHECK(std::memcmp(pa.data(), pb.data(), 9 * sizeof(double)) == 0);

  REQUIRE(in_order.has_mcl());
  REQUIRE(scrambled.has_mcl());
  const auto& qa = in_order.mcl().particles();
  const auto& qb = scrambled.mcl().particles();
  REQUIRE(qa.size() == qb.size());
  for (std::size_t k = 0; k < qa.size(); ++k) {
    CHECK(same_pose_bits(qa[k].pose, qb[k].pose));
    CHECK(same_bits(qa[k].weight, qb[k].weight));
  }

  REQUIRE(in_order.fixes().size() == scrambled.fixes().size());
  for (std::size_t k = 0; k < in_order.fixes().size(); ++k) {
    CHECK(in_order.fixes()[k].accepted == scrambled.fixes()[k].accepted);
    CHECK(same_bits(in_order.fixes()[k].fix.x, scrambled.fixes()[k].fix.x));
    CHECK(same_bits(in_order.fixes()[k].fix.y, scrambled.fixes()[k].fix.y));
  }
  CHECK(in_order.reinits().size() == scrambled.reinits().size());
}

TEST_CASE("noise-free hold pins the fused estimate to the truth") {
  const WorldModel world = make_lab_world();
  SensorSuite suite;
  suite.odometry_noise = {0.0, 0.0, 0.0, 0.0};
  suite.lidar.range_std = 0.0;
  suite.camera.pixel_std = 0.0;
  suite.camera.diameter_std = 0.0;
  suite.camera.decode_prob = 1.0;

  ScenarioScript script;
  script.start = Pose2D(3.0, 2.0, 0.0);
  script.duration = 5.0;  // no waypoints: stand still
  const SensorLog log = run_scenario(world, script, suite, 11, "hold");

  StackConfig cfg;
  cfg.mcl.noise = {0.0, 0.0, 0.0, 0.0};
  cfg.mcl.roughen_pos_std = 0.0;
  cfg.mcl.roughen_theta_std = 0.0;
  const EstimatorRunResult res =
      replay_log(log, world.grid, world.led_map, cfg, Estimator::kFused,
                 script.start, 0.0, 0.0, 99);
  CHECK(res.final_pos_error < 1e-3);
  CHECK(res.final_heading_error < 1e-3);
  CHECK(res.fixes_emitted > 20);
}

TEST_CASE("noise-free drive stays locked on") {
  const WorldModel world = make_lab_world();
  SensorSuite suite;
  suite.odometry_noise = {0.0, 0.0, 0.0, 0.0};
  suite.lidar.range_std = 0.0;
  suite.camera.pixel_std = 0.0;
  suite.camera.diameter_std = 0.0;
  suite.camera.decode_prob = 1.0;

  ScenarioScript script;
  script.start = Pose2D(3.0, 2.0, 0.0);
  script.waypoints = {{5.0, 2.0}};
  script.duration = 12.0;
  const SensorLog log = run_scenario(world, script, suite, 12, "drive");

  StackConfig cfg;
  cfg.mcl.noise = {0.0, 0.0, 0.0, 0.0};
  cfg.mcl.roughen_pos_std = 0.0;
  cfg.mcl.roughen_theta_std = 0.0;
  const EstimatorRunResult res =
      replay_log(log, world.grid, world.led_map, cfg, Estimator::kFused,
                 script.start, 0.0, 0.0, 101);
  CHECK(res.final_pos_error < 1e-2);
  double worst = 0.0;
  for (const SeriesPoint& p : res.series) worst = std::max(worst, p.pos_error);
  CHECK(worst < 0.05);
}

TEST_CASE("watchdog jumps the filters onto a stream of contradicting fixes") {
  const WorldModel world = make_lab_world();
  StackConfig cfg;
  FusionStack stack(world.grid, world.led_map, cfg, 5);
  // convinced it is in the north corridor twin while actually under beacon 1
  stack.init_gaussian(Pose2D(3.0, 7.0, 0.0), 0.05, 0.02);

  const Pose2D truth(3.0, 2.0, 0.0);
  CameraModel cam;
  cam.decode_prob = 1.0;
  Rng cam_rng(900);
  for (int k = 0; k < 8; ++k) {
    stack.ingest(simulate_camera(world, truth, cam, k / 6.0, k, cam_rng));
  }
  stack.finish();

  REQUIRE(stack.fixes().size() == 8);
  CHECK(!stack.fixes().front().accepted);  // gated against the wrong prior
  REQUIRE(!stack.reinits().empty());
  CHECK(stack.reinits().size() <= 2);
  CHECK((stack.reinits().front().fix_position - Vec2{3.0, 2.0}).norm() < 0.05);
  CHECK((stack.fused_pose().position() - Vec2{3.0, 2.0}).norm() < 0.3);
  // the particle cloud moved too
  const PoseEstimate est = stack.mcl().estimate();
  CHECK((est.mean.position() - Vec2{3.0, 2.0}).norm() < 0.4);
}

TEST_CASE("estimator ablations strip exactly the right inputs") {
  const StackConfig base;
  const StackConfig fused = estimator_config(base, Estimator::kFused);
  const StackConfig vlp_only = estimator_config(base, Estimator::kVlpOnly);
  const StackConfig mcl_only = estimator_config(base, Estimator::kMclOnly);
  const StackConfig odom_only = estimator_config(base, Estimator::kOdomOnly);
  CHECK(fused.use_vlp);
  CHECK(fused.use_mcl);
  CHECK(vlp_only.use_vlp);
  CHECK(!vlp_only.use_mcl);
  CHECK(!mcl_only.use_vlp);
  CHECK(mcl_only.use_mcl);
  CHECK(!odom_only.use_vlp);
  CHECK(!odom_only.use_mcl);

  const WorldModel world = make_lab_world();
  const Pose2D truth(3.0, 2.0, 0.0);

  FusionStack odom_stack(world.grid, world.led_map, odom_only, 3);
  odom_stack.init_gaussian(truth, 0.0, 0.0);
  CHECK(!odom_stack.has_mcl());
  CameraModel cam;
  cam.decode_prob = 1.0;
  Rng cam_rng(31);
  odom_stack.ingest(simulate_camera(world, truth, cam, 0.0, 0, cam_rng));
  LidarSpec spec;
  Rng scan_rng(32);
  odom_stack.ingest(simulate_lidar(world, truth, spec, 0.1, 0, scan_rng));
  odom_stack.finish();
  CHECK(odom_stack.fixes().empty());
  CHECK((odom_stack.fused_pose().position() - truth.position()).norm() < 1e-9);

  FusionStack vlp_stack(world.grid, world.led_map, vlp_only, 3);
  vlp_stack.init_gaussian(truth, 0.0, 0.0);
  CHECK(!vlp_stack.has_mcl());
  Rng cam_rng2(31);
  vlp_stack.ingest(simulate_camera(world, truth, cam, 0.0, 0, cam_rng2));
  vlp_stack.finish();
  CHECK(vlp_stack.fixes().size() == 1);

  FusionStack mcl_stack(world.grid, world.led_map, mcl_only, 3);
  mcl_stack.init_gaussian(truth, 0.0, 0.0);
  CHECK(mcl_stack.has_mcl());
  Rng cam_rng3(31);
  mcl_stack.ingest(simulate_camera(world, truth, cam, 0.0, 0, cam_rng3));
  mcl_stack.finish();
  CHECK(mcl_stack.fixes().empty());
}

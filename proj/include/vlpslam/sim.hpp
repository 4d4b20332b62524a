#pragma once

#include <cstdint>
#include <vector>

#include "vlpslam/rng.hpp"
#include "vlpslam/sensors.hpp"
#include "vlpslam/world.hpp"

namespace vlpslam {

struct LidarSpec {
  int beam_count = 360;
  double angle_min = 0.0;  // beam i points at angle_min + i * angle_increment
  double angle_increment = 2.0 * kPi / 360.0;
  double max_range = 3.5;
  double range_std = 0.01;
  double rate_hz = 5.0;
};

// Upward-looking pinhole camera, optical axis vertical, pixel u axis along
// the robot x axis and v along robot y.
struct CameraModel {
  double focal_px = 1400.0;
  int image_width = 2048;
  int image_height = 1536;
  double cx = 1024.0;
  double cy = 768.0;
  double height = 0.3;           // optical center above the floor
  double decode_prob = 0.9;      // chance a visible beacon decodes per frame
  double pixel_std = 1.0;        // centroid noise
  double diameter_std = 1.0;     // apparent-diameter noise
  double min_apparent_px = 4.0;  // smaller blobs are discarded
  double rate_hz = 6.0;

  // Noise-free projection of a beacon for a robot at `pose`.
  LedObservation project(const Pose2D& pose, const LedBeacon& b) const;
  bool in_fov(const Pose2D& pose, const LedBeacon& b) const;
};

// Rotation-translation-rotation odometry noise, parameterized directly in
// standard deviations (not variances):
//   std_rot1  = a1*|drot1| + a2*dtrans
//   std_trans = a3*dtrans + a4*(|drot1| + |drot2|)
//   std_rot2  = a1*|drot2| + a2*dtrans
struct OdometryNoiseModel {
  double a1 = 0.05;
  double a2 = 0.05;
  double a3 = 0.01;
  double a4 = 0.01;
};

struct VelocityLimits {
  double max_v = 0.22;
  double max_w = 2.84;
};

struct RobotState {
  Pose2D pose;
  double v = 0.0;
  double w = 0.0;
};

// Exact unicycle step (circular arc when |w| is non-negligible). The robot
// stays put for the tick if the new footprint would collide.
void step_robot(RobotState& state, double dt, const WorldModel& world,
                double footprint_radius, double t);

// Body-frame true motion between two poses, decomposed as rot-trans-rot.
struct MotionDecomposition {
  double rot1 = 0.0;
  double trans = 0.0;
  double rot2 = 0.0;
};
MotionDecomposition decompose_motion(const Pose2D& from, const Pose2D& to);

// Corrupts a true inter-sample motion with the rot-trans-rot model and
// returns the reported body-frame increment. Always consumes exactly three
// gaussian draws from rng.
OdometrySample sample_odometry(const Pose2D& from, const Pose2D& to,
                               const OdometryNoiseModel& model, double t,
                               std::uint64_t seq, Rng& rng);

// Casts one ray through the world grid (entry-point ranges) plus any active
// disc obstacles; returns hit distance or +inf.
double cast_ray(const WorldModel& world, const Vec2& origin, double angle,
                double max_range, double t);

// Full scan at the given pose. Consumes exactly one gaussian per beam.
LidarScan simulate_lidar(const WorldModel& world, const Pose2D& pose,
                         const LidarSpec& spec, double t, std::uint64_t seq,
                         Rng& rng);

// One camera frame at the given pose. Consumes exactly one uniform and three
// gaussian draws per beacon in the map, whether or not the beacon is visible,
// so visibility changes never shift the random stream.
CameraFrame simulate_camera(const WorldModel& world, const Pose2D& pose,
                            const CameraModel& camera, double t,
                            std::uint64_t seq, Rng& rng);

struct SensorSuite {
  LidarSpec lidar;
  CameraModel camera;
  OdometryNoiseModel odometry_noise;
  VelocityLimits limits;
  double odom_rate_hz = 24.0;
  double footprint_radius = 0.105;
};

// Waypoint-chasing controller used to script ground-truth motion. Steers from
// the true pose; the localization stack under test never sees its output.
class WaypointFollower {
 public:
  WaypointFollower(std::vector<Vec2> waypoints, double cruise_speed,
                   const VelocityLimits& limits);

  // Picks (v, w) for the next control interval.
  void update(const Pose2D& pose, double& v, double& w);
  bool finished() const { return next_ >= waypoints_.size(); }

 private:
  std::vector<Vec2> waypoints_;
  double cruise_;
  VelocityLimits limits_;
  std::size_t next_ = 0;
};

struct ScenarioScript {
  Pose2D start;
  std::vector<Vec2> waypoints;  // empty: stand still for the whole run
  double cruise_speed = 0.2;
  double duration = 10.0;
};

double polyline_length(const Pose2D& start, const std::vector<Vec2>& waypoints);

// Simulates the scripted run and records every sensor event plus ground truth
// (at the odometry rate). Sensor streams use rng streams derived from `seed`,
// so the same (world, script, suite, seed) always yields an identical log.
SensorLog run_scenario(const WorldModel& world, const ScenarioScript& script,
                       const SensorSuite& suite, std::uint64_t seed,
                       const std::string& scenario_name);

}  // namespace vlpslam

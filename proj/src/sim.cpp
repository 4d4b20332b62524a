#include "vlpslam/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vlpslam {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LedObservation CameraModel::project(const Pose2D& pose, const LedBeacon& b) const {
  const double d = b.z - height;
  const Vec2 rel = rotate({b.x - pose.x, b.y - pose.y}, -pose.theta);
  LedObservation obs;
  obs.beacon_id = b.id;
  obs.u = cx + focal_px * rel.x / d;
  obs.v = cy + focal_px * rel.y / d;
  obs.apparent_diameter_px = focal_px * b.diameter / d;
  return obs;
}

bool CameraModel::in_fov(const Pose2D& pose, const LedBeacon& b) const {
  if (b.z <= height) return false;
  const LedObservation obs = project(pose, b);
  return obs.u >= 0.0 && obs.u < image_width && obs.v >= 0.0 &&
         obs.v < image_height;
}

void step_robot(RobotState& state, double dt, const WorldModel& world,
                double footprint_radius, double t) {
  if (dt <= 0.0) return;
  const Pose2D& p = state.pose;
  Pose2D next;
  if (std::abs(state.w) < 1e-9) {
    next = Pose2D(p.x + state.v * dt * std::cos(p.theta),
                  p.y + state.v * dt * std::sin(p.theta), p.theta);
  } else {
    const double th1 = p.theta + state.w * dt;
    const double r = state.v / state.w;
    next = Pose2D(p.x + r * (std::sin(th1) - std::sin(p.theta)),
                  p.y - r * (std::cos(th1) - std::cos(p.theta)), th1);
  }
  if (world.footprint_collides({next.x, next.y}, footprint_radius, t)) {
    // Blocked: the chassis stays put (heading included) for this interval.
    state.v = 0.0;
    state.w = 0.0;
    return;
  }
  state.pose = next;
}

MotionDecomposition decompose_motion(const Pose2D& from, const Pose2D& to) {
  const Pose2D d = between(from, to);
  MotionDecomposition m;
  m.trans = std::hypot(d.x, d.y);
  if (m.trans < 1e-9) {
    m.rot1 = 0.0;
    m.rot2 = d.theta;
  } else {
    m.rot1 = std::atan2(d.y, d.x);
    m.rot2 = wrap_angle(d.theta - m.rot1);
  }
  return m;
}

OdometrySample sample_odometry(const Pose2D& from, const Pose2D& to,
                               const OdometryNoiseModel& model, double t,
                               std::uint64_t seq, Rng& rng) {
  const MotionDecomposition m = decompose_motion(from, to);
  const double std_r1 = model.a1 * std::abs(m.rot1) + model.a2 * m.trans;
  const double std_tr = model.a3 * m.trans + model.a4 * (std::abs(m.rot1) + std::abs(m.rot2));
  const double std_r2 = model.a1 * std::abs(m.rot2) + model.a2 * m.trans;
  const double r1 = m.rot1 + std_r1 * rng.gaussian();
  const double tr = m.trans + std_tr * rng.gaussian();
  const double r2 = m.rot2 + std_r2 * rng.gaussian();
  OdometrySample s;
  s.t = t;
  s.seq = seq;
  s.dx = tr * std::cos(r1);
  s.dy = tr * std::sin(r1);
  s.dtheta = wrap_angle(r1 + r2);
  return s;
}

namespace {

// Amanatides & Woo grid traversal; returns the distance at which the ray
// enters the first occupied cell, or +inf.
double cast_ray_grid(const TrinaryGrid& grid, const Vec2& origin, double angle,
                     double max_range) {
  const GridGeometry& g = grid.geometry();
  assert(std::abs(g.origin().theta) < 1e-12);
  const double res = g.resolution();
  const double relx = origin.x - g.origin().x;
  const double rely = origin.y - g.origin().y;
  int ix = static_cast<int>(std::floor(relx / res));
  int iy = static_cast<int>(std::floor(rely / res));
  if (grid.at_or_unknown({ix, iy}) == CellState::Occupied) {
    return 0.0;
  }
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  double t_max_x = kInf, t_delta_x = kInf;
  double t_max_y = kInf, t_delta_y = kInf;
  if (step_x != 0) {
    const double next =
        (step_x > 0 ? (ix + 1) * res - relx : relx - ix * res);
    t_max_x = next / std::abs(dx);
    t_delta_x = res / std::abs(dx);
  }
  if (step_y != 0) {
    const double next =
        (step_y > 0 ? (iy + 1) * res - rely : rely - iy * res);
    t_max_y = next / std::abs(dy);
    t_delta_y = res / std::abs(dy);
  }
  while (true) {
    double t;
    if (t_max_x <= t_max_y) {
      t = t_max_x;
      ix += step_x;
      t_max_x += t_delta_x;
    } else {
      t = t_max_y;
      iy += step_y;
      t_max_y += t_delta_y;
    }
    if (t > max_range) {
      return kInf;
    }
    if (!g.contains({ix, iy})) {
      return kInf;
    }
    if (grid.at({ix, iy}) == CellState::Occupied) {
      return t;
    }
  }
}

double cast_ray_disc(const Vec2& origin, double angle, const Vec2& center,
                     double radius) {
  const Vec2 d{std::cos(angle), std::sin(angle)};
  const Vec2 oc{origin.x - center.x, origin.y - center.y};
  const double b = oc.x * d.x + oc.y * d.y;
  const double c = oc.x * oc.x + oc.y * oc.y - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return kInf;
  const double sq = std::sqrt(disc);
  const double t0 = -b - sq;
  if (t0 >= 0.0) return t0;
  const double t1 = -b + sq;
  return t1 >= 0.0 ? 0.0 : kInf;  // origin inside the disc counts as contact
}

}  // namespace

double cast_ray(const WorldModel& world, const Vec2& origin, double angle,
                double max_range, double t) {
  double best = cast_ray_grid(world.grid, origin, angle, max_range);
  for (const DiscObstacle& o : world.obstacles) {
    if (!o.active_at(t)) continue;
    best = std::min(best, cast_ray_disc(origin, angle, o.position_at(t), o.radius));
  }
  return best <= max_range ? best : kInf;
}

LidarScan simulate_lidar(const WorldModel& world, const Pose2D& pose,
                         const LidarSpec& spec, double t, std::uint64_t seq,
                         Rng& rng) {
  LidarScan scan;
  scan.t = t;
  scan.seq = seq;
  scan.angle_min = spec.angle_min;
  scan.angle_increment = spec.angle_increment;
  scan.max_range = spec.max_range;
  scan.ranges.resize(spec.beam_count);
  for (int i = 0; i < spec.beam_count; ++i) {
    const double angle = pose.theta + spec.angle_min + i * spec.angle_increment;
    const double true_range = cast_ray(world, {pose.x, pose.y}, angle,
                                       spec.max_range, t);
    const double noise = rng.gaussian();  // drawn for every beam, hit or not
    if (true_range == kInf) {
      scan.ranges[i] = spec.max_range;  // no-return marker
    } else {
      scan.ranges[i] = std::clamp(true_range + spec.range_std * noise, 1e-3,
                                  spec.max_range);
    }
  }
  return scan;
}

CameraFrame simulate_camera(const WorldModel& world, const Pose2D& pose,
                            const CameraModel& camera, double t,
                            std::uint64_t seq, Rng& rng) {
  CameraFrame frame;
  frame.t = t;
  frame.seq = seq;
  for (const LedBeacon& b : world.led_map.beacons()) {
    // Fixed per-beacon draw pattern keeps the stream independent of
    // visibility: a beacon entering the frame never reshuffles the noise of
    // the others.
    const double decode_draw = rng.uniform01();
    const double nu = rng.gaussian();
    const double nv = rng.gaussian();
    const double nd = rng.gaussian();
    if (!camera.in_fov(pose, b)) continue;
    if (decode_draw >= camera.decode_prob) continue;
    LedObservation obs = camera.project(pose, b);
    obs.u += camera.pixel_std * nu;
    obs.v += camera.pixel_std * nv;
    obs.apparent_diameter_px += camera.diameter_std * nd;
    if (obs.apparent_diameter_px < camera.min_apparent_px) continue;
    frame.observations.push_back(obs);
  }
  return frame;
}

WaypointFollower::WaypointFollower(std::vector<Vec2> waypoints,
                                   double cruise_speed,
                                   const VelocityLimits& limits)
    : waypoints_(std::move(waypoints)), cruise_(cruise_speed), limits_(limits) {}

void WaypointFollower::update(const Pose2D& pose, double& v, double& w) {
  while (next_ < waypoints_.size()) {
    const Vec2& target = waypoints_[next_];
    const double dist = std::hypot(target.x - pose.x, target.y - pose.y);
    const bool last = next_ + 1 == waypoints_.size();
    if (dist < (last ? 0.05 : 0.12)) {
      ++next_;
      continue;
    }
    const double heading = std::atan2(target.y - pose.y, target.x - pose.x);
    const double err = wrap_angle(heading - pose.theta);
    w = std::clamp(3.0 * err, -0.7 * limits_.max_w, 0.7 * limits_.max_w);
    v = std::clamp(cruise_ * std::max(0.0, std::cos(err)), 0.0, limits_.max_v);
    return;
  }
  v = 0.0;
  w = 0.0;
}

double polyline_length(const Pose2D& start, const std::vector<Vec2>& waypoints) {
  double len = 0.0;
  Vec2 prev{start.x, start.y};
  for (const Vec2& p : waypoints) {
    len += std::hypot(p.x - prev.x, p.y - prev.y);
    prev = p;
  }
  return len;
}

SensorLog run_scenario(const WorldModel& world, const ScenarioScript& script,
                       const SensorSuite& suite, std::uint64_t seed,
                       const std::string& scenario_name) {
  if (script.duration <= 0.0) {
    throw std::invalid_argument("scenario duration must be positive");
  }
  if (world.footprint_collides({script.start.x, script.start.y},
                               suite.footprint_radius, 0.0)) {
    throw std::invalid_argument("scenario start pose is in collision");
  }

  Rng odo_rng = Rng::derive(seed, 1);
  Rng lidar_rng = Rng::derive(seed, 2);
  Rng camera_rng = Rng::derive(seed, 3);

  SensorLog log;
  log.scenario = scenario_name;
  log.seed = seed;
  log.duration = script.duration;

  const double eps = 1e-9;
  const std::uint64_t n_odom =
      static_cast<std::uint64_t>(script.duration * suite.odom_rate_hz + eps);
  const std::uint64_t n_scan =
      static_cast<std::uint64_t>(script.duration * suite.lidar.rate_hz + eps);
  const std::uint64_t n_cam =
      static_cast<std::uint64_t>(script.duration * suite.camera.rate_hz + eps);

  RobotState state;
  state.pose = script.start;
  WaypointFollower follower(script.waypoints, script.cruise_speed, suite.limits);
  follower.update(state.pose, state.v, state.w);

  Pose2D pose_at_prev_odom = state.pose;
  double t_state = 0.0;
  std::uint64_t odom_seq = 0, scan_seq = 0, cam_seq = 0, truth_seq = 0;

  GroundTruthPose truth0;
  truth0.t = 0.0;
  truth0.seq = truth_seq++;
  truth0.pose = state.pose;
  log.events.push_back(truth0);

  // Merge the three periodic streams in (time, kind) order; kind priority at
  // equal times is odometry, then lidar, then camera.
  std::uint64_t k_odom = 1, k_scan = 0, k_cam = 0;
  while (true) {
    const double t_odom =
        k_odom <= n_odom ? k_odom / suite.odom_rate_hz : kInf;
    const double t_scan = k_scan <= n_scan ? k_scan / suite.lidar.rate_hz : kInf;
    const double t_cam = k_cam <= n_cam ? k_cam / suite.camera.rate_hz : kInf;
    const double t_next = std::min({t_odom, t_scan, t_cam});
    if (t_next == kInf) break;

    if (t_next > t_state) {
      step_robot(state, t_next - t_state, world, suite.footprint_radius, t_next);
      t_state = t_next;
    }

    if (t_odom == t_next) {
      log.events.push_back(sample_odometry(pose_at_prev_odom, state.pose,
                                           suite.odometry_noise, t_next,
                                           odom_seq++, odo_rng));
      pose_at_prev_odom = state.pose;
      GroundTruthPose truth;
      truth.t = t_next;
      truth.seq = truth_seq++;
      truth.pose = state.pose;
      log.events.push_back(truth);
      follower.update(state.pose, state.v, state.w);
      ++k_odom;
    } else if (t_scan == t_next) {
      log.events.push_back(simulate_lidar(world, state.pose, suite.lidar,
                                          t_next, scan_seq++, lidar_rng));
      ++k_scan;
    } else {
      log.events.push_back(simulate_camera(world, state.pose, suite.camera,
                                           t_next, cam_seq++, camera_rng));
      ++k_cam;
    }
  }

  log.sort_events();
  return log;
}

}  // namespace vlpslam

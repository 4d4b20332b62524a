#include "vlpslam/navigator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlpslam/sim.hpp"

namespace vlpslam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t nearest_path_index(const std::vector<Vec2>& path, const Vec2& p) {
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = (path[i] - p).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double truth_obstacle_distance(const LikelihoodField& dist_field,
                               const WorldModel& world, const Vec2& p,
                               double t) {
  double d = dist_field.distance_at(p);
  for (const DiscObstacle& o : world.obstacles) {
    if (!o.active_at(t)) continue;
    d = std::min(d, (p - o.position_at(t)).norm() - o.radius);
  }
  return d;
}

}  // namespace

NavigationResult navigate(const WorldModel& world, const TrinaryGrid& nav_map,
                          const Pose2D& truth_start, const Pose2D& goal,
                          const SensorSuite& suite, const StackConfig& stack_cfg,
                          const NavigatorConfig& cfg, std::uint64_t seed) {
  NavigationResult result;
  result.min_truth_clearance = kInf;

  const Costmap global = build_costmap(nav_map, cfg.costmap);
  // Distance field over the true floorplan, for safety scoring only.
  const LikelihoodField truth_dist(world.grid, 0.1, 4.0);

  FusionStack stack(nav_map, world.led_map, stack_cfg, seed);
  stack.init_gaussian(truth_start, cfg.init_pos_std, cfg.init_theta_std);

  PlanResult plan = plan_path(global, {truth_start.x, truth_start.y},
                              {goal.x, goal.y}, cfg.planner);
  if (!plan.success) {
    result.failure_reason = "unreachable";
    return result;
  }
  result.initial_path = plan.path;
  result.planned_length = path_length(plan.path);
  result.planned_cost = plan.cost;

  Rng odo_rng = Rng::derive(seed, 1);
  Rng lidar_rng = Rng::derive(seed, 2);
  Rng camera_rng = Rng::derive(seed, 3);

  RobotState state;
  state.pose = truth_start;
  Pose2D pose_at_prev_odom = state.pose;
  Pose2D prev_truth = state.pose;
  double t_state = 0.0;
  std::uint64_t odom_seq = 0, scan_seq = 0, cam_seq = 0, truth_seq = 0;
  LidarScan latest_scan;
  bool have_scan = false;

  std::vector<Vec2> path = plan.path;
  int fallback_ticks = 0;
  double cmd_v = 0.0, cmd_w = 0.0;

  GroundTruthPose t0ev;
  t0ev.t = 0.0;
  t0ev.seq = truth_seq++;
  t0ev.pose = state.pose;
  stack.ingest(t0ev);

  // Merged periodic schedule: odometry, lidar, camera, control; at equal
  // times earlier kinds run first so control always sees this tick's data.
  std::uint64_t k_odom = 1, k_scan = 0, k_cam = 0, k_ctl = 0;
  const double horizon = cfg.timeout;
  while (true) {
    const double t_odom = k_odom / suite.odom_rate_hz;
    const double t_scan = k_scan / suite.lidar.rate_hz;
    const double t_cam = k_cam / suite.camera.rate_hz;
    const double t_ctl = k_ctl / cfg.control_rate_hz;
    const double t_next = std::min({t_odom, t_scan, t_cam, t_ctl});
    if (t_next > horizon) {
      result.failure_reason = "timeout";
      break;
    }

    if (t_next > t_state) {
      state.v = cmd_v;
      state.w = cmd_w;
      step_robot(state, t_next - t_state, world, suite.footprint_radius, t_next);
      t_state = t_next;
    }

    if (t_odom == t_next) {
      stack.ingest(sample_odometry(pose_at_prev_odom, state.pose,
                                   suite.odometry_noise, t_next, odom_seq++,
                                   odo_rng));
      pose_at_prev_odom = state.pose;
      GroundTruthPose truth;
      truth.t = t_next;
      truth.seq = truth_seq++;
      truth.pose = state.pose;
      stack.ingest(truth);
      result.executed_length +=
          (state.pose.position() - prev_truth.position()).norm();
      prev_truth = state.pose;
      if (world.footprint_collides(state.pose.position(),
                                   suite.footprint_radius, t_next)) {
        ++result.collision_ticks;
      }
      result.min_truth_clearance = std::min(
          result.min_truth_clearance,
          truth_obstacle_distance(truth_dist, world, state.pose.position(),
                                  t_next) -
              suite.footprint_radius);
      ++k_odom;
    } else if (t_scan == t_next) {
      latest_scan = simulate_lidar(world, state.pose, suite.lidar, t_next,
                                   scan_seq++, lidar_rng);
      have_scan = true;
      stack.ingest(latest_scan);
      ++k_scan;
    } else if (t_cam == t_next) {
      stack.ingest(simulate_camera(world, state.pose, suite.camera, t_next,
                                   cam_seq++, camera_rng));
      ++k_cam;
    } else {
      const Pose2D est = stack.fused_pose();
      NavTick tick;
      tick.t = t_next;
      tick.truth = state.pose;
      tick.estimate = est;
      tick.truth_clearance =
          truth_obstacle_distance(truth_dist, world, state.pose.position(),
                                  t_next) -
          suite.footprint_radius;

      const double goal_d = (est.position() - Vec2{goal.x, goal.y}).norm();
      const double goal_h = std::abs(wrap_angle(est.theta - goal.theta));
      if (goal_d <= cfg.goal_pos_tol && goal_h <= cfg.goal_heading_tol) {
        result.success = true;
        result.arrival_time = t_next;
        cmd_v = cmd_w = 0.0;
        tick.v = tick.w = 0.0;
        result.ticks.push_back(tick);
        break;
      }

      if (have_scan) {
        const Costmap local = build_local_costmap(
            est, latest_scan, cfg.costmap, cfg.local_window,
            nav_map.geometry().resolution());
        const std::size_t near = nearest_path_index(path, est.position());
        const std::vector<Vec2> remaining(path.begin() + near, path.end());
        const std::size_t carrot_steps = static_cast<std::size_t>(
            cfg.carrot_distance / nav_map.geometry().resolution());
        const Vec2 carrot =
            path[std::min(near + carrot_steps, path.size() - 1)];

        DwaResult dwa = dwa_choose(est, cmd_v, cmd_w, remaining, carrot,
                                   local, cfg.dwa);
        if (goal_d <= cfg.goal_pos_tol) {
          // In position but misaligned: rotate toward the goal heading.
          const double err = wrap_angle(goal.theta - est.theta);
          dwa.v = 0.0;
          dwa.w = std::clamp(2.0 * err, -cfg.dwa.limits.max_w,
                             cfg.dwa.limits.max_w);
          dwa.admissible = true;
        }
        cmd_v = dwa.v;
        cmd_w = dwa.w;
        tick.fallback = !dwa.admissible;
        fallback_ticks = dwa.admissible ? 0 : fallback_ticks + 1;

        if (fallback_ticks > cfg.replan_after_fallback) {
          // Merge the latest returns into the static map and replan.
          std::vector<Vec2> extra;
          const double c = std::cos(est.theta);
          const double s = std::sin(est.theta);
          for (std::size_t i = 0; i < latest_scan.ranges.size(); ++i) {
            if (!latest_scan.valid_range(i)) continue;
            const double beam =
                latest_scan.angle_min + i * latest_scan.angle_increment;
            const double bx = std::cos(beam) * latest_scan.ranges[i];
            const double by = std::sin(beam) * latest_scan.ranges[i];
            extra.push_back(
                {est.x + c * bx - s * by, est.y + s * bx + c * by});
          }
          const Costmap merged = build_costmap(nav_map, cfg.costmap, extra);
          const PlanResult replan =
              plan_path(merged, est.position(), {goal.x, goal.y}, cfg.planner);
          if (replan.success) {
            path = replan.path;
            ++result.replans;
          }
          fallback_ticks = 0;
        }
      }
      tick.v = cmd_v;
      tick.w = cmd_w;
      result.ticks.push_back(tick);
      ++k_ctl;
    }
  }

  stack.finish();
  result.truth_goal_pos_error =
      (state.pose.position() - Vec2{goal.x, goal.y}).norm();
  result.truth_goal_heading_error = std::abs(wrap_angle(state.pose.theta - goal.theta));
  return result;
}

}  // namespace vlpslam

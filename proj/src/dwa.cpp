#include "vlpslam/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vlpslam {

namespace {

Pose2D arc_step(const Pose2D& p, double v, double w, double dt) {
  if (std::abs(w) < 1e-9) {
    return {p.x + v * dt * std::cos(p.theta), p.y + v * dt * std::sin(p.theta),
            p.theta};
  }
  const double th1 = p.theta + w * dt;
  const double r = v / w;
  return {p.x + r * (std::sin(th1) - std::sin(p.theta)),
          p.y - r * (std::cos(th1) - std::cos(p.theta)), th1};
}

double nearest_path_distance(const Vec2& p, const std::vector<Vec2>& path) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& q : path) {
    best = std::min(best, (p - q).norm());
  }
  return best;
}

}  // namespace

DwaResult dwa_choose(const Pose2D& pose, double v0, double w0,
                     const std::vector<Vec2>& path, const Vec2& goal,
                     const Costmap& local, const DwaConfig& cfg) {
  const double v_lo = std::max(0.0, v0 - cfg.accel_v * cfg.control_dt);
  const double v_hi = std::min(cfg.limits.max_v, v0 + cfg.accel_v * cfg.control_dt);
  const double w_lo = std::max(-cfg.limits.max_w, w0 - cfg.accel_w * cfg.control_dt);
  const double w_hi = std::min(cfg.limits.max_w, w0 + cfg.accel_w * cfg.control_dt);
  const int steps = std::max(1, static_cast<int>(std::round(cfg.horizon / cfg.sim_dt)));
  const double d_goal_0 = (pose.position() - goal).norm();

  DwaResult best;
  bool have_best = false;

  for (int i = 0; i < cfg.v_samples; ++i) {
    const double v = cfg.v_samples > 1
        ? v_lo + (v_hi - v_lo) * i / (cfg.v_samples - 1)
        : v_lo;
    for (int j = 0; j < cfg.w_samples; ++j) {
      const double w = cfg.w_samples > 1
          ? w_lo + (w_hi - w_lo) * j / (cfg.w_samples - 1)
          : w_lo;

      Pose2D sim = pose;
      double min_clear = std::numeric_limits<double>::infinity();
      bool collided = false;
      for (int s = 0; s < steps; ++s) {
        sim = arc_step(sim, v, w, cfg.sim_dt);
        const double clear = local.clearance_at(sim.position());
        min_clear = std::min(min_clear, clear);
        if (clear <= cfg.footprint_radius) {
          collided = true;
          break;
        }
      }
      if (collided) continue;

      const double d_path = nearest_path_distance(sim.position(), path);
      const double path_score =
          1.0 - std::clamp(d_path / cfg.path_score_cap, 0.0, 1.0);
      const double d_goal_1 = (sim.position() - goal).norm();
      const double goal_score = std::clamp(
          (d_goal_0 - d_goal_1) / (cfg.limits.max_v * cfg.horizon), 0.0, 1.0);
      const double clear_score = std::clamp(
          (min_clear - cfg.footprint_radius) / cfg.clearance_cap, 0.0, 1.0);
      const double vel_score = cfg.limits.max_v > 0.0 ? v / cfg.limits.max_v : 0.0;

      const double score = cfg.weight_path * path_score +
                           cfg.weight_goal * goal_score +
                           cfg.weight_clearance * clear_score +
                           cfg.weight_velocity * vel_score;
      if (!have_best || score > best.score) {
        best.v = v;
        best.w = w;
        best.score = score;
        best.admissible = true;
        have_best = true;
      }
    }
  }

  if (have_best) {
    return best;
  }

  // Everything collides within the horizon: stop and rotate toward the path
  // (or the goal when no path is in reach) until a window opens up.
  Vec2 target = goal;
  for (const Vec2& q : path) {
    if ((q - pose.position()).norm() > 0.3) {
      target = q;
      break;
    }
  }
  const double desired = std::atan2(target.y - pose.y, target.x - pose.x);
  const double err = wrap_angle(desired - pose.theta);
  DwaResult fallback;
  fallback.v = 0.0;
  fallback.w = err >= 0.0 ? cfg.fallback_rotation : -cfg.fallback_rotation;
  fallback.admissible = false;
  return fallback;
}

}  // namespace vlpslam

#pragma once

#include <vector>

#include "vlpslam/costmap.hpp"
#include "vlpslam/sim.hpp"

namespace vlpslam {

struct DwaConfig {
  double horizon = 1.5;     // rollout length, seconds
  double control_dt = 0.1;  // control period; also the accel window
  double sim_dt = 0.1;      // rollout integration step
  int v_samples = 6;
  int w_samples = 11;
  double accel_v = 0.5;
  double accel_w = 3.2;
  VelocityLimits limits;
  double footprint_radius = 0.105;

  double weight_path = 0.75;
  double weight_goal = 0.25;
  double weight_clearance = 1.0;
  double weight_velocity = 0.3;
  double path_score_cap = 0.5;      // meters; beyond this the path score is 0
  double clearance_cap = 0.5;       // meters; clearance saturates here
  double fallback_rotation = 0.8;   // rad/s spin when nothing is admissible
};

struct DwaResult {
  double v = 0.0;
  double w = 0.0;
  bool admissible = false;  // false: every rollout collided, spin in place
  double score = 0.0;
};

// Samples the reachable (v, w) window around the current command, rolls each
// candidate out over the horizon against the local costmap's clearance layer,
// and picks the best weighted sum of normalized path / goal / clearance /
// velocity scores. Candidates whose rollout comes within the footprint radius
// of an obstacle are discarded; if none survive, the result is an in-place
// rotation toward the local path.
DwaResult dwa_choose(const Pose2D& pose, double v0, double w0,
                     const std::vector<Vec2>& path, const Vec2& goal,
                     const Costmap& local, const DwaConfig& cfg);

}  // namespace vlpslam

#pragma once

#include <string>
#include <vector>

#include "vlpslam/dwa.hpp"
#include "vlpslam/planner.hpp"
#include "vlpslam/stack.hpp"

namespace vlpslam {

struct NavigatorConfig {
  CostmapConfig costmap;
  PlannerConfig planner;
  DwaConfig dwa;
  double control_rate_hz = 10.0;
  double goal_pos_tol = 0.05;
  double goal_heading_tol = 10.0 * kPi / 180.0;
  int replan_after_fallback = 10;  // consecutive fallback ticks before replan
  double timeout = 180.0;
  double local_window = 4.0;
  double carrot_distance = 1.0;  // lookahead point fed to the local scorer
  double init_pos_std = 0.03;
  double init_theta_std = 0.02;
};

struct NavTick {
  double t = 0.0;
  Pose2D truth;
  Pose2D estimate;
  double v = 0.0;
  double w = 0.0;
  bool fallback = false;
  double truth_clearance = 0.0;  // obstacle distance minus footprint radius
};

struct NavigationResult {
  bool success = false;
  std::string failure_reason;  // empty on success: "unreachable" | "timeout"
  double arrival_time = 0.0;
  double truth_goal_pos_error = 0.0;
  double truth_goal_heading_error = 0.0;
  double executed_length = 0.0;  // ground-truth path length actually driven
  double planned_length = 0.0;   // initial global plan, geometric length
  double planned_cost = 0.0;     // initial global plan, weighted cost
  int replans = 0;
  int collision_ticks = 0;  // ticks with the true footprint on an obstacle
  double min_truth_clearance = 0.0;
  std::vector<NavTick> ticks;
  std::vector<Vec2> initial_path;
};

// Full closed loop: simulated robot + sensors feeding the localization stack,
// global plan on the supplied navigation map, windowed local planner at the
// control rate, global replan after sustained fallback. The navigation map is
// whatever map the stack localizes against (typically the mapper's export);
// ground truth is used only to move the simulated robot and to score safety.
NavigationResult navigate(const WorldModel& world, const TrinaryGrid& nav_map,
                          const Pose2D& truth_start, const Pose2D& goal,
                          const SensorSuite& suite, const StackConfig& stack_cfg,
                          const NavigatorConfig& cfg, std::uint64_t seed);

}  // namespace vlpslam

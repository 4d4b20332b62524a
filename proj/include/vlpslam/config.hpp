#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlpslam/mapper.hpp"
#include "vlpslam/navigator.hpp"
#include "vlpslam/sim.hpp"
#include "vlpslam/stack.hpp"

namespace vlpslam {

struct StaticAccuracyScenario {
  int poses = 400;
  int seeds = 5;
  double hold_duration = 3.0;
  double init_pos_std = 0.05;
  double init_theta_std = 2.0 * kPi / 180.0;
  double clearance = 0.2;          // min obstacle distance for sampled poses
  std::uint64_t sample_seed = 9999;  // pose sampling, independent of run seeds
};

struct TrajectoryScenario {
  Pose2D start;
  std::vector<Vec2> waypoints;
  double cruise_speed = 0.2;
  double duration = 236.0;
  int seeds = 3;
  double init_pos_std = 0.05;
  double init_theta_std = 2.0 * kPi / 180.0;
  double min_outage_duration = 10.0;
};

struct MappingScenario {
  Pose2D start;
  std::vector<Vec2> waypoints;
  double cruise_speed = 0.2;
  double duration = 78.0;
  double theta0 = 0.0;  // declared start heading in the beacon frame
};

struct RecoveryScenario {
  Pose2D truth_start;
  Vec2 wrong_offset;  // belief = truth + offset (the look-alike corridor)
  std::vector<Vec2> waypoints;
  double duration = 40.0;
  int seeds = 3;
  double init_pos_std = 0.08;
  double init_theta_std = 2.0 * kPi / 180.0;
};

struct NavScenarioSpec {
  std::string name;
  Pose2D start;
  Pose2D goal;
  std::vector<DiscObstacle> obstacles;  // added to the world for this run
};

struct ExperimentConfig {
  std::string world_file = "data/lab.world.yaml";
  SensorSuite suite;
  StackConfig stack;
  MapperConfig mapper;
  bool mapper_anchor_enabled = true;
  NavigatorConfig nav;

  StaticAccuracyScenario static_accuracy;
  TrajectoryScenario trajectory;
  MappingScenario mapping;
  RecoveryScenario recovery;
  std::vector<NavScenarioSpec> navigation;
};

// Built-in defaults, including the bundled scenario scripts.
ExperimentConfig default_experiment();

// Defaults overlaid with a YAML file and then dotted-path overrides of the
// form "section.key=value". Unknown keys and invalid values throw.
ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides = {});
ExperimentConfig load_experiment_overrides(const std::vector<std::string>& overrides);

// Cross-field consistency (camera intrinsics shared with the fix solver,
// filter noise matching the simulator, footprint propagated to planners) and
// fail-fast range checks. Called by the loaders; call directly after editing
// a config in code.
void finalize_config(ExperimentConfig& cfg);

}  // namespace vlpslam

// Command line front end: scenario simulation, mapping, the accuracy and
// robustness experiments, and full navigation runs. Every subcommand takes a
// mandatory --seed plus an optional config file and dotted-path overrides;
// it exits 0 only when the run's internal assertions all pass.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vlpslam/harness.hpp"
#include "vlpslam/sim.hpp"

namespace {

using namespace vlpslam;

struct CommonArgs {
  std::uint64_t seed = 0;
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  bool timing = false;
  bool dump_particles = false;
};

void add_common(CLI::App* sub, CommonArgs& args, const std::string& out_default) {
  sub->add_option("--seed", args.seed, "base seed for this run")->required();
  sub->add_option("--config", args.config, "config file overlaying the defaults");
  sub->add_option("--set", args.overrides,
                  "override one config value, e.g. --set mcl.particle_count=200");
  args.out = out_default;
  sub->add_option("--out", args.out, "output location")->capture_default_str();
}

ExperimentConfig load_config(const CommonArgs& args) {
  return args.config.empty() ? load_experiment_overrides(args.overrides)
                             : load_experiment_config(args.config, args.overrides);
}

WorldModel load_configured_world(const ExperimentConfig& cfg) {
  WorldModel world = load_world(cfg.world_file);
  world.validate(cfg.suite.camera.height);
  return world;
}

int report_checks(const std::vector<ScenarioCheck>& checks) {
  for (const ScenarioCheck& c : checks) {
    std::printf("[%s] %s — %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
  }
  const bool ok = all_pass(checks);
  std::printf("%s (%zu checks)\n", ok ? "OK" : "FAILED", checks.size());
  return ok ? 0 : 1;
}

ScenarioScript script_by_name(const ExperimentConfig& cfg,
                              const std::string& name) {
  ScenarioScript s;
  if (name == "trajectory") {
    s.start = cfg.trajectory.start;
    s.waypoints = cfg.trajectory.waypoints;
    s.cruise_speed = cfg.trajectory.cruise_speed;
    s.duration = cfg.trajectory.duration;
  } else if (name == "mapping") {
    s.start = cfg.mapping.start;
    s.waypoints = cfg.mapping.waypoints;
    s.cruise_speed = cfg.mapping.cruise_speed;
    s.duration = cfg.mapping.duration;
  } else if (name == "recovery") {
    s.start = cfg.recovery.truth_start;
    s.waypoints = cfg.recovery.waypoints;
    s.cruise_speed = 0.2;
    s.duration = cfg.recovery.duration;
  } else {
    throw CLI::ValidationError(
        "--scenario must be trajectory, mapping, or recovery");
  }
  return s;
}

int cmd_simulate(const CommonArgs& args, const std::string& scenario) {
  const ExperimentConfig cfg = load_config(args);
  const WorldModel world = load_configured_world(cfg);
  const SensorLog log = run_scenario(world, script_by_name(cfg, scenario),
                                     cfg.suite, args.seed, scenario);
  const auto parent = std::filesystem::path(args.out).parent_path();
  if (!parent.empty()) ensure_directory(parent.string());
  write_sensor_log(log, args.out);
  std::printf("wrote %zu events (%s, %.1f s) to %s\n", log.events.size(),
              scenario.c_str(), log.duration, args.out.c_str());
  return log.events.empty() ? 1 : 0;
}

int cmd_map(const CommonArgs& args, const std::string& log_path) {
  ExperimentConfig cfg = load_config(args);
  const WorldModel world = load_configured_world(cfg);

  MappingReport report;
  if (log_path.empty()) {
    report = run_mapping_alignment(cfg, world, args.seed);
  } else {
    // Replay a previously recorded log instead of simulating a fresh one.
    const SensorLog log = read_sensor_log(log_path);
    report.seed = args.seed;
    report.with_anchor = build_map(log, world.led_map, cfg.mapper,
                                   cfg.stack.vlp, cfg.mapping.theta0);
    report.without_anchor = build_map(log, LedFeatureMap{}, cfg.mapper,
                                      cfg.stack.vlp, cfg.mapping.theta0);
    const Vec2 start = cfg.mapping.start.position();
    report.offset_with =
        (report.with_anchor.anchor.apply(Vec2{0, 0}) - start).norm();
    report.offset_without =
        (report.without_anchor.anchor.apply(Vec2{0, 0}) - start).norm();
    report.expected_without = start.norm();
    report.iou_with = occupied_iou(world.grid, report.with_anchor.map);
    report.iou_without = occupied_iou(world.grid, report.without_anchor.map);
    report.checks.push_back({"anchored_with_constraint",
                             report.with_anchor.anchored,
                             "replayed log produced an anchor fix"});
  }
  emit_mapping_reports(report, world, {args.out, args.timing});
  return report_checks(report.checks);
}

int cmd_static(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const WorldModel world = load_configured_world(cfg);
  const StaticAccuracyReport report =
      run_static_accuracy(cfg, world, args.seed);
  emit_static_reports(report, {args.out, args.timing});
  return report_checks(report.checks);
}

int cmd_trajectory(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const WorldModel world = load_configured_world(cfg);
  ensure_directory(args.out);

  std::ofstream estimates(
      (std::filesystem::path(args.out) / "estimates.jsonl").string(),
      std::ios::binary);
  std::ofstream particles;
  ReplayOptions opts;
  opts.estimate_stream = &estimates;
  if (args.dump_particles) {
    particles.open(
        (std::filesystem::path(args.out) / "particles.jsonl").string(),
        std::ios::binary);
    opts.particle_stream = &particles;
  }
  const TrajectoryReport report =
      run_trajectory(cfg, world, args.seed, opts);
  emit_trajectory_reports(report, world, {args.out, args.timing});
  return report_checks(report.checks);
}

int cmd_recovery(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const WorldModel world = load_configured_world(cfg);
  ensure_directory(args.out);

  std::ofstream estimates(
      (std::filesystem::path(args.out) / "estimates.jsonl").string(),
      std::ios::binary);
  std::ofstream particles;
  ReplayOptions opts;
  opts.estimate_stream = &estimates;
  if (args.dump_particles) {
    particles.open(
        (std::filesystem::path(args.out) / "particles.jsonl").string(),
        std::ios::binary);
    opts.particle_stream = &particles;
  }
  const RecoveryReport report = run_recovery(cfg, world, args.seed, opts);
  emit_recovery_reports(report, {args.out, args.timing});
  return report_checks(report.checks);
}

int cmd_navigate(const CommonArgs& args, const std::string& only) {
  const ExperimentConfig cfg = load_config(args);
  const WorldModel world = load_configured_world(cfg);
  const NavigationReport report =
      run_navigation(cfg, world, args.seed, only);
  emit_navigation_reports(report, world, {args.out, args.timing});
  return report_checks(report.checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indoor localization and navigation testbed: LED-beacon "
               "positioning fused with particle-filter lidar localization"};
  app.require_subcommand(1);

  int rc = 1;

  CommonArgs sim_args;
  std::string sim_scenario = "trajectory";
  auto* sim = app.add_subcommand("simulate",
                                 "record one scripted run as a sensor log");
  add_common(sim, sim_args, "out/sensor_log.jsonl");
  sim->add_option("--scenario", sim_scenario,
                  "trajectory | mapping | recovery")
      ->capture_default_str();
  sim->callback([&] { rc = cmd_simulate(sim_args, sim_scenario); });

  CommonArgs map_args;
  std::string map_log;
  auto* map = app.add_subcommand(
      "map", "build the occupancy map with and without the beacon anchor");
  add_common(map, map_args, "out/map");
  map->add_option("--log", map_log, "replay this sensor log instead of simulating");
  map->callback([&] { rc = cmd_map(map_args, map_log); });

  CommonArgs sta_args;
  auto* sta = app.add_subcommand(
      "static-accuracy", "stationary estimator comparison over sampled poses");
  add_common(sta, sta_args, "out/static");
  sta->add_flag("--timing", sta_args.timing,
                "also write wall-clock tables (not byte-reproducible)");
  sta->callback([&] { rc = cmd_static(sta_args); });

  CommonArgs tra_args;
  auto* tra = app.add_subcommand(
      "trajectory", "moving-robot estimator comparison on the loop course");
  add_common(tra, tra_args, "out/trajectory");
  tra->add_flag("--timing", tra_args.timing,
                "also write wall-clock tables (not byte-reproducible)");
  tra->add_flag("--dump-particles", tra_args.dump_particles,
                "dump the particle cloud after every scan update");
  tra->callback([&] { rc = cmd_trajectory(tra_args); });

  CommonArgs rec_args;
  auto* rec = app.add_subcommand(
      "recovery", "wrong-initialization run with and without beacon fixes");
  add_common(rec, rec_args, "out/recovery");
  rec->add_flag("--dump-particles", rec_args.dump_particles,
                "dump the particle cloud after every scan update");
  rec->callback([&] { rc = cmd_recovery(rec_args); });

  CommonArgs nav_args;
  std::string nav_only;
  auto* nav = app.add_subcommand("navigate", "closed-loop goal runs");
  add_common(nav, nav_args, "out/nav");
  nav->add_option("--scenario", nav_only,
                  "run only the named scenario (default: all)");
  nav->callback([&] { rc = cmd_navigate(nav_args, nav_only); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}

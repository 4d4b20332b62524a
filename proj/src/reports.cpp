#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "vlpslam/harness.hpp"
#include "vlpslam/render.hpp"

namespace vlpslam {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + path + ": " +
                             ec.message());
  }
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // byte-stable: no newline translation
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

ordered_json checks_json(const std::vector<ScenarioCheck>& checks) {
  ordered_json arr = ordered_json::array();
  for (const ScenarioCheck& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return arr;
}

ordered_json stats_json(const ErrorStats& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"rms", s.rms},
          {"max", s.max},     {"p50", s.p50},   {"p90", s.p90},
          {"p99", s.p99}};
}

void write_json(const std::string& path, const ordered_json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

// Full empirical CDF: one row per sample, cumulative ending at exactly 1.
void write_full_cdf(std::ofstream& out, const std::string& estimator,
                    std::vector<double> errors) {
  std::sort(errors.begin(), errors.end());
  const double n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    out << estimator << "," << format_double(errors[i]) << ","
        << format_double(static_cast<double>(i + 1) / n) << "\n";
  }
}

std::vector<Vec2> beacon_positions(const WorldModel& world) {
  std::vector<Vec2> out;
  for (const LedBeacon& b : world.led_map.beacons()) {
    out.push_back({b.x, b.y});
  }
  return out;
}

void paint_world(MapCanvas& canvas, const WorldModel& world) {
  canvas.paint_grid(world.grid);
  for (const Vec2& p : beacon_positions(world)) {
    canvas.disc(p, 0.09, kOrange);
  }
}

}  // namespace

void emit_static_reports(const StaticAccuracyReport& report,
                         const EmitOptions& opts) {
  ensure_directory(opts.out_dir);

  std::ofstream errors = open_out(join(opts.out_dir, "static_errors.csv"));
  errors << "estimator,pose_index,seed,truth_x,truth_y,truth_theta,"
            "pos_error,heading_error\n";
  for (int e = 0; e < kEstimatorCount; ++e) {
    const char* name = estimator_name(static_cast<Estimator>(e));
    for (const auto& row : report.rows) {
      errors << name << "," << row.pose_index << "," << row.seed << ","
             << format_double(row.truth.x) << "," << format_double(row.truth.y)
             << "," << format_double(row.truth.theta) << ","
             << format_double(row.pos_error[e]) << ","
             << format_double(row.heading_error[e]) << "\n";
    }
  }

  std::ofstream cdf = open_out(join(opts.out_dir, "static_cdf.csv"));
  cdf << "estimator,error,cumulative\n";
  for (int e = 0; e < kEstimatorCount; ++e) {
    write_full_cdf(cdf, estimator_name(static_cast<Estimator>(e)),
                   report.errors[e]);
  }

  ordered_json summary;
  summary["scenario"] = "static-accuracy";
  int poses = 0;
  for (const auto& row : report.rows) {
    poses = std::max(poses, row.pose_index + 1);
  }
  summary["poses"] = poses;
  summary["seeds"] = poses ? static_cast<int>(report.rows.size()) / poses : 0;
  summary["samples"] = static_cast<int>(report.rows.size());
  ordered_json stats;
  for (int e = 0; e < kEstimatorCount; ++e) {
    stats[estimator_name(static_cast<Estimator>(e))] =
        stats_json(report.stats[e]);
  }
  summary["position_error_m"] = stats;
  summary["checks"] = checks_json(report.checks);
  summary["pass"] = all_pass(report.checks);
  write_json(join(opts.out_dir, "static_summary.json"), summary);

  if (opts.timing) {
    std::ofstream wall = open_out(join(opts.out_dir, "static_wall_time.csv"));
    wall << "wall_time_s\n" << format_double(report.wall_time_s) << "\n";
  }
}

void emit_trajectory_reports(const TrajectoryReport& report,
                             const WorldModel& world,
                             const EmitOptions& opts) {
  ensure_directory(opts.out_dir);

  std::ofstream series = open_out(join(opts.out_dir, "trajectory_series.csv"));
  series << "estimator,seed,t,pos_error,heading_error\n";
  for (int e = 0; e < kEstimatorCount; ++e) {
    const char* name = estimator_name(static_cast<Estimator>(e));
    for (const auto& run : report.seeds) {
      for (const SeriesPoint& pt : run.runs[e].series) {
        series << name << "," << run.seed << "," << format_double(pt.t) << ","
               << format_double(pt.pos_error) << ","
               << format_double(pt.heading_error) << "\n";
      }
    }
  }

  std::ofstream cdf = open_out(join(opts.out_dir, "trajectory_cdf.csv"));
  cdf << "estimator,error,cumulative\n";
  for (int e = 0; e < kEstimatorCount; ++e) {
    std::vector<double> pooled;
    for (const auto& run : report.seeds) {
      for (const SeriesPoint& pt : run.runs[e].series) {
        pooled.push_back(pt.pos_error);
      }
    }
    write_full_cdf(cdf, estimator_name(static_cast<Estimator>(e)), pooled);
  }

  std::ofstream outages = open_out(join(opts.out_dir, "trajectory_outages.csv"));
  outages << "seed,start,end,duration\n";
  for (const auto& run : report.seeds) {
    for (const OutageZone& z : run.outages) {
      outages << run.seed << "," << format_double(z.start) << ","
              << format_double(z.end) << "," << format_double(z.duration())
              << "\n";
    }
  }

  ordered_json summary;
  summary["scenario"] = "trajectory";
  ordered_json seeds = ordered_json::array();
  for (const auto& run : report.seeds) {
    ordered_json j;
    j["seed"] = run.seed;
    j["route_length_m"] = run.route_length;
    j["main_outage"] = {{"start", run.main_outage.start},
                        {"end", run.main_outage.end},
                        {"duration", run.main_outage.duration()}};
    j["fused_max_error_in_outage_m"] = run.fused_max_error_in_outage;
    j["vlp_gap_covers_outage"] = run.vlp_gap_covers_outage;
    ordered_json est = ordered_json::array();
    for (int e = 0; e < kEstimatorCount; ++e) {
      const EstimatorRunResult& r = run.runs[e];
      est.push_back({{"name", estimator_name(static_cast<Estimator>(e))},
                     {"final_error_m", r.final_pos_error},
                     {"fixes", r.fixes_emitted},
                     {"fixes_accepted", r.fixes_accepted},
                     {"updates_rejected", r.ekf_rejected},
                     {"reinits", r.reinit_count}});
    }
    j["estimators"] = est;
    seeds.push_back(j);
  }
  summary["seeds"] = seeds;
  ordered_json stats;
  for (int e = 0; e < kEstimatorCount; ++e) {
    stats[estimator_name(static_cast<Estimator>(e))] =
        stats_json(report.stats[e]);
  }
  summary["position_error_m"] = stats;
  summary["checks"] = checks_json(report.checks);
  summary["pass"] = all_pass(report.checks);
  write_json(join(opts.out_dir, "trajectory_summary.json"), summary);

  if (!report.seeds.empty()) {
    const auto& fused = report.seeds.front().runs[0];
    MapCanvas canvas(world.grid.geometry(), 3);
    paint_world(canvas, world);
    canvas.polyline(fused.truth_path, kGreen);
    canvas.polyline(fused.estimate_path, kRed);
    canvas.save(join(opts.out_dir, "trajectory_map.ppm"));
  }

  if (opts.timing) {
    std::ofstream timing = open_out(join(opts.out_dir, "trajectory_timing.csv"));
    timing << "seed,t,kind,ms\n";
    for (const auto& run : report.seeds) {
      for (const TimingSample& s : run.runs[0].timing_series) {
        timing << run.seed << "," << format_double(s.t) << "," << s.kind << ","
               << format_double(s.ms) << "\n";
      }
    }
    ordered_json tj;
    tj["scenario"] = "trajectory-timing";
    ordered_json per_seed = ordered_json::array();
    for (const auto& run : report.seeds) {
      const TimingStats& tm = run.runs[0].timing;
      per_seed.push_back({{"seed", run.seed},
                          {"mean_predict_ms", tm.mean_predict_ms()},
                          {"mean_scan_update_ms", tm.mean_scan_ms()},
                          {"predict_count", tm.predict_count},
                          {"scan_count", tm.scan_count},
                          {"camera_count", tm.camera_count}});
    }
    tj["seeds"] = per_seed;
    write_json(join(opts.out_dir, "trajectory_timing_summary.json"), tj);
  }
}

void emit_mapping_reports(const MappingReport& report, const WorldModel& world,
                          const EmitOptions& opts) {
  ensure_directory(opts.out_dir);

  auto save_build = [&](const MapBuildResult& build, const std::string& stem) {
    MapMetadata meta;
    meta.anchored = build.anchored;
    meta.anchor_transform = build.anchor;
    save_trinary_map(build.map, join(opts.out_dir, stem + ".pgm"),
                     join(opts.out_dir, stem + ".yaml"), &meta);
    MapCanvas canvas(build.map.geometry(), 3);
    canvas.paint_grid(build.map);
    std::vector<Vec2> traj;
    for (const Pose2D& p : build.trajectory) traj.push_back(p.position());
    canvas.polyline(traj, kBlue);
    for (const LedBeacon& b : world.led_map.beacons()) {
      canvas.disc({b.x, b.y}, 0.09, kOrange);
    }
    canvas.cross({0.0, 0.0}, 0.2, kRed);
    canvas.save(join(opts.out_dir, stem + ".ppm"));
  };
  save_build(report.with_anchor, "map_anchored");
  save_build(report.without_anchor, "map_unanchored");

  auto build_json = [](const MapBuildResult& b, double offset, double iou) {
    return ordered_json{{"anchored", b.anchored},
                        {"anchor",
                         {{"tx", b.anchor.tx()},
                          {"ty", b.anchor.ty()},
                          {"rotation", b.anchor.rotation()}}},
                        {"origin_offset_m", offset},
                        {"occupied_iou", iou},
                        {"scans_inserted", b.scans_inserted}};
  };
  ordered_json summary;
  summary["scenario"] = "mapping-alignment";
  summary["seed"] = report.seed;
  summary["with_constraint"] =
      build_json(report.with_anchor, report.offset_with, report.iou_with);
  summary["without_constraint"] = build_json(
      report.without_anchor, report.offset_without, report.iou_without);
  summary["without_constraint"]["expected_offset_m"] = report.expected_without;
  summary["checks"] = checks_json(report.checks);
  summary["pass"] = all_pass(report.checks);
  write_json(join(opts.out_dir, "mapping_summary.json"), summary);
}

void emit_recovery_reports(const RecoveryReport& report,
                           const EmitOptions& opts) {
  ensure_directory(opts.out_dir);

  std::ofstream series = open_out(join(opts.out_dir, "recovery_series.csv"));
  series << "mode,seed,t,pos_error,heading_error\n";
  auto write_mode = [&](const std::vector<RecoveryRun>& runs,
                        const std::string& mode) {
    for (const RecoveryRun& run : runs) {
      for (const SeriesPoint& pt : run.series) {
        series << mode << "," << run.seed << "," << format_double(pt.t) << ","
               << format_double(pt.pos_error) << ","
               << format_double(pt.heading_error) << "\n";
      }
    }
  };
  write_mode(report.with_vlp, "with_vlp");
  write_mode(report.without_vlp, "without_vlp");

  auto run_json = [](const RecoveryRun& r) {
    return ordered_json{{"seed", r.seed},
                        {"first_fix_t", r.first_fix_time},
                        {"first_accepted_fix_t", r.first_accepted_fix_time},
                        {"recovery_t", r.recovery_time},
                        {"recovery_delay_s", r.recovery_delay},
                        {"reinits", r.reinit_count},
                        {"min_error_m", r.min_error},
                        {"max_error_after_recovery_m",
                         r.max_error_after_recovery}};
  };
  ordered_json summary;
  summary["scenario"] = "recovery";
  ordered_json with = ordered_json::array();
  for (const RecoveryRun& r : report.with_vlp) with.push_back(run_json(r));
  ordered_json without = ordered_json::array();
  for (const RecoveryRun& r : report.without_vlp) {
    without.push_back(run_json(r));
  }
  summary["with_vlp"] = with;
  summary["without_vlp"] = without;
  summary["checks"] = checks_json(report.checks);
  summary["pass"] = all_pass(report.checks);
  write_json(join(opts.out_dir, "recovery_summary.json"), summary);
}

void emit_navigation_reports(const NavigationReport& report,
                             const WorldModel& world,
                             const EmitOptions& opts) {
  ensure_directory(opts.out_dir);

  for (const NavRunReport& run : report.runs) {
    std::ofstream ticks =
        open_out(join(opts.out_dir, "nav_ticks_" + run.name + ".jsonl"));
    for (const NavTick& t : run.result.ticks) {
      ticks << "{\"t\":" << format_double(t.t) << ",\"v\":"
            << format_double(t.v) << ",\"w\":" << format_double(t.w)
            << ",\"fallback\":" << (t.fallback ? "true" : "false")
            << ",\"truth\":[" << format_double(t.truth.x) << ","
            << format_double(t.truth.y) << "," << format_double(t.truth.theta)
            << "],\"estimate\":[" << format_double(t.estimate.x) << ","
            << format_double(t.estimate.y) << ","
            << format_double(t.estimate.theta) << "],\"clearance\":"
            << format_double(t.truth_clearance) << "}\n";
    }

    MapCanvas canvas(world.grid.geometry(), 3);
    paint_world(canvas, world);
    canvas.polyline(run.result.initial_path, kBlue);
    std::vector<Vec2> truth, est;
    for (const NavTick& t : run.result.ticks) {
      truth.push_back(t.truth.position());
      est.push_back(t.estimate.position());
    }
    canvas.polyline(truth, kGreen);
    canvas.polyline(est, kRed);
    canvas.disc(run.start.position(), 0.08, kGreen);
    canvas.cross(run.goal.position(), 0.15, kPurple);
    canvas.save(join(opts.out_dir, "nav_" + run.name + ".ppm"));
  }

  ordered_json summary;
  summary["scenario"] = "navigation";
  ordered_json runs = ordered_json::array();
  for (const NavRunReport& run : report.runs) {
    const NavigationResult& r = run.result;
    runs.push_back({{"name", run.name},
                    {"seed", run.seed},
                    {"success", r.success},
                    {"failure_reason", r.failure_reason},
                    {"arrival_time_s", r.arrival_time},
                    {"executed_length_m", r.executed_length},
                    {"planned_length_m", r.planned_length},
                    {"length_ratio", run.length_ratio},
                    {"replans", r.replans},
                    {"collision_ticks", r.collision_ticks},
                    {"min_clearance_m", r.min_truth_clearance},
                    {"goal_pos_error_m", r.truth_goal_pos_error},
                    {"goal_heading_error_rad", r.truth_goal_heading_error},
                    {"checks", checks_json(run.checks)}});
  }
  summary["runs"] = runs;
  summary["checks"] = checks_json(report.checks);
  summary["pass"] = all_pass(report.checks);
  write_json(join(opts.out_dir, "nav_summary.json"), summary);
}

}  // namespace vlpslam

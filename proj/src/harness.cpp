#include "vlpslam/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vlpslam/sim.hpp"

namespace vlpslam {

namespace {

// Stream tags for seed derivation; arbitrary but fixed.
constexpr std::uint64_t kLogStream = 0x10C5;
constexpr std::uint64_t kGuessStream = 0x6E55;
constexpr std::uint64_t kStackStream = 0x57AC;
constexpr std::uint64_t kPoseSampleStream = 0x5A3B;
constexpr std::uint64_t kNavStream = 0x9A40;

double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace

bool all_pass(const std::vector<ScenarioCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ScenarioCheck& c) { return c.pass; });
}

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::kFused:
      return "fused";
    case Estimator::kVlpOnly:
      return "vlp_only";
    case Estimator::kMclOnly:
      return "mcl_only";
    case Estimator::kOdomOnly:
      return "odom_only";
  }
  return "unknown";
}

StackConfig estimator_config(const StackConfig& base, Estimator e) {
  StackConfig cfg = base;
  cfg.use_vlp = (e == Estimator::kFused || e == Estimator::kVlpOnly);
  cfg.use_mcl = (e == Estimator::kFused || e == Estimator::kMclOnly);
  return cfg;
}

ErrorStats compute_stats(std::vector<double> values) {
  ErrorStats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double sum2 = 0.0;
  for (double v : values) {
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(values.size());
  s.mean = sum / n;
  s.rms = std::sqrt(sum2 / n);
  s.max = values.back();
  auto quantile = [&](double q) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * n));
    return values[std::min(values.size() - 1, rank > 0 ? rank - 1 : 0)];
  };
  s.p50 = quantile(0.50);
  s.p90 = quantile(0.90);
  s.p99 = quantile(0.99);
  return s;
}

void write_estimate_record(std::ostream& out, const FusionStack& stack) {
  const Pose2D& p = stack.fused_pose();
  const Eigen::Matrix3d& P = stack.ekf().covariance();
  out << "{\"t\":" << format_double(stack.last_processed_time())
      << ",\"x\":" << format_double(p.x) << ",\"y\":" << format_double(p.y)
      << ",\"theta\":" << format_double(p.theta) << ",\"cov\":["
      << format_double(P(0, 0)) << "," << format_double(P(0, 1)) << ","
      << format_double(P(0, 2)) << "," << format_double(P(1, 1)) << ","
      << format_double(P(1, 2)) << "," << format_double(P(2, 2))
      << "],\"source\":\"" << stack.last_update_tag() << "\"}\n";
}

namespace {

void write_particle_record(std::ostream& out, const FusionStack& stack) {
  out << "{\"t\":" << format_double(stack.last_processed_time())
      << ",\"particles\":[";
  const auto& ps = stack.mcl().particles();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out << ",";
    out << "[" << format_double(ps[i].pose.x) << ","
        << format_double(ps[i].pose.y) << "," << format_double(ps[i].pose.theta)
        << "," << format_double(ps[i].weight) << "]";
  }
  out << "]}\n";
}

}  // namespace

EstimatorRunResult replay_log(const SensorLog& log, const TrinaryGrid& map,
                              const LedFeatureMap& leds, const StackConfig& cfg,
                              Estimator estimator, const Pose2D& init_guess,
                              double init_pos_std, double init_theta_std,
                              std::uint64_t stack_seed,
                              const ReplayOptions& opts) {
  EstimatorRunResult res;
  res.estimator = estimator;

  FusionStack stack(map, leds, cfg, stack_seed);
  stack.init_gaussian(init_guess, init_pos_std, init_theta_std);

  double timed_total = 0.0;
  stack.on_event = [&](const SensorEvent& e, const FusionStack& st) {
    if (opts.observer) opts.observer(e, st);
    const bool touched =
        std::holds_alternative<OdometrySample>(e) ||
        (std::holds_alternative<LidarScan>(e) && st.has_mcl()) ||
        (std::holds_alternative<CameraFrame>(e) && st.config().use_vlp);
    if (touched && opts.estimate_stream) {
      write_estimate_record(*opts.estimate_stream, st);
    }
    if (touched && opts.collect_timing) {
      const TimingStats& tm = st.timing();
      const double total =
          tm.predict_total_s + tm.scan_total_s + tm.camera_total_s;
      TimingSample sample;
      sample.t = event_time(e);
      sample.ms = 1e3 * (total - timed_total);
      timed_total = total;
      if (std::holds_alternative<OdometrySample>(e)) {
        sample.kind = "predict";
      } else if (std::holds_alternative<LidarScan>(e)) {
        sample.kind = "mcl";
      } else {
        sample.kind = "vlp";
      }
      res.timing_series.push_back(std::move(sample));
    }
    if (opts.particle_stream && st.has_mcl() &&
        std::holds_alternative<LidarScan>(e)) {
      write_particle_record(*opts.particle_stream, st);
    }
    if (const auto* truth = std::get_if<GroundTruthPose>(&e)) {
      const Pose2D est = st.fused_pose();
      SeriesPoint pt;
      pt.t = truth->t;
      pt.pos_error = distance(est.position(), truth->pose.position());
      pt.heading_error = std::abs(wrap_angle(est.theta - truth->pose.theta));
      res.series.push_back(pt);
      res.truth_path.push_back(truth->pose.position());
      res.estimate_path.push_back(est.position());
    }
  };

  for (const SensorEvent& e : log.events) {
    stack.ingest(e);
  }
  stack.finish();

  for (const FixEvent& f : stack.fixes()) {
    res.fix_times.push_back(f.t);
    if (f.accepted) res.accepted_fix_times.push_back(f.t);
  }
  res.fixes_emitted = static_cast<int>(stack.fixes().size());
  res.fixes_accepted = static_cast<int>(res.accepted_fix_times.size());
  res.reinit_count = static_cast<int>(stack.reinits().size());
  res.ekf_rejected = stack.ekf().rejected_count();
  res.timing = stack.timing();
  if (!res.series.empty()) {
    res.final_pos_error = res.series.back().pos_error;
    res.final_heading_error = res.series.back().heading_error;
  }
  return res;
}

// ---------------------------------------------------------------------------

bool beacon_coverage(const LedFeatureMap& leds, const CameraModel& camera,
                     const Pose2D& pose, double margin_px) {
  for (const LedBeacon& b : leds.beacons()) {
    if (b.z <= camera.height) continue;
    const LedObservation obs = camera.project(pose, b);
    if (obs.u >= margin_px && obs.u <= camera.image_width - margin_px &&
        obs.v >= margin_px && obs.v <= camera.image_height - margin_px &&
        obs.apparent_diameter_px >= camera.min_apparent_px) {
      return true;
    }
  }
  return false;
}

std::vector<Pose2D> sample_coverage_poses(const WorldModel& world,
                                          const CameraModel& camera, int count,
                                          double clearance,
                                          std::uint64_t sample_seed) {
  // Margin keeps fixes decodable under pixel noise and away from the image
  // border, where one-beacon geometry is weakest.
  constexpr double kEdgeMarginPx = 60.0;
  const GridGeometry& geom = world.grid.geometry();
  const double x0 = geom.origin().x;
  const double y0 = geom.origin().y;
  const double x1 = x0 + geom.width() * geom.resolution();
  const double y1 = y0 + geom.height() * geom.resolution();

  const LikelihoodField field(world.grid, 1.0, clearance + 1.0);

  Rng rng = Rng::derive(sample_seed, kPoseSampleStream);
  std::vector<Pose2D> poses;
  poses.reserve(count);
  const long max_attempts = 20000L * std::max(count, 1);
  for (long attempt = 0; attempt < max_attempts &&
                         poses.size() < static_cast<std::size_t>(count);
       ++attempt) {
    const double x = rng.uniform(x0, x1);
    const double y = rng.uniform(y0, y1);
    const double theta = rng.uniform(-kPi, kPi);
    const Pose2D pose(x, y, theta);
    if (field.distance_at({x, y}) < clearance) continue;
    if (!beacon_coverage(world.led_map, camera, pose, kEdgeMarginPx)) continue;
    poses.push_back(pose);
  }
  if (poses.size() < static_cast<std::size_t>(count)) {
    throw std::runtime_error(
        "cannot sample enough in-coverage poses; free space under the "
        "beacons is too small");
  }
  return poses;
}

StaticAccuracyReport run_static_accuracy(const ExperimentConfig& cfg,
                                         const WorldModel& world,
                                         std::uint64_t base_seed) {
  const auto t_begin = std::chrono::steady_clock::now();
  const StaticAccuracyScenario& sc = cfg.static_accuracy;

  StaticAccuracyReport report;
  const std::vector<Pose2D> poses = sample_coverage_poses(
      world, cfg.suite.camera, sc.poses, sc.clearance, sc.sample_seed);

  ScenarioScript script;
  script.cruise_speed = 0.0;
  script.duration = sc.hold_duration;

  for (int s = 0; s < sc.seeds; ++s) {
    const std::uint64_t run_seed = base_seed + static_cast<std::uint64_t>(s);
    for (std::size_t i = 0; i < poses.size(); ++i) {
      const std::uint64_t log_seed = Rng::mix(run_seed, kLogStream + i);
      script.start = poses[i];
      const SensorLog log =
          run_scenario(world, script, cfg.suite, log_seed, "static");

      Rng guess_rng = Rng::derive(log_seed, kGuessStream);
      const Pose2D guess(poses[i].x + guess_rng.gaussian(0.0, sc.init_pos_std),
                         poses[i].y + guess_rng.gaussian(0.0, sc.init_pos_std),
                         poses[i].theta +
                             guess_rng.gaussian(0.0, sc.init_theta_std));

      StaticAccuracyReport::Row row;
      row.pose_index = static_cast<int>(i);
      row.seed = run_seed;
      row.truth = poses[i];
      for (int e = 0; e < kEstimatorCount; ++e) {
        const auto est = static_cast<Estimator>(e);
        const EstimatorRunResult res = replay_log(
            log, world.grid, world.led_map, estimator_config(cfg.stack, est),
            est, guess, sc.init_pos_std, sc.init_theta_std,
            Rng::mix(log_seed, kStackStream + e));
        row.pos_error[e] = res.final_pos_error;
        row.heading_error[e] = res.final_heading_error;
        report.errors[e].push_back(res.final_pos_error);
      }
      report.rows.push_back(row);
    }
  }

  for (int e = 0; e < kEstimatorCount; ++e) {
    report.stats[e] = compute_stats(report.errors[e]);
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();

  const double fused = report.stats[0].mean;
  const double vlp = report.stats[1].mean;
  const double mcl = report.stats[2].mean;
  std::ostringstream means;
  means << "mean error fused=" << format_double(fused)
        << " vlp_only=" << format_double(vlp)
        << " mcl_only=" << format_double(mcl);
  report.checks.push_back({"estimator_ordering", fused < vlp && vlp < mcl,
                           means.str()});
  report.checks.push_back(
      {"fused_mean_under_5cm", fused <= 0.05,
       "fused mean " + format_double(fused) + " m, bound 0.05 m"});
  return report;
}

// ---------------------------------------------------------------------------

std::vector<OutageZone> find_outage_zones(const SensorLog& log,
                                          const LedFeatureMap& leds,
                                          const CameraModel& camera) {
  std::vector<double> truth_t;
  std::vector<Pose2D> truth_pose;
  for (const SensorEvent& e : log.events) {
    if (const auto* g = std::get_if<GroundTruthPose>(&e)) {
      truth_t.push_back(g->t);
      truth_pose.push_back(g->pose);
    }
  }
  auto truth_at = [&](double t) -> const Pose2D& {
    auto it = std::lower_bound(truth_t.begin(), truth_t.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - truth_t.begin());
    if (idx == truth_t.size()) {
      idx = truth_t.size() - 1;
    } else if (idx > 0 && t - truth_t[idx - 1] < truth_t[idx] - t) {
      idx -= 1;
    }
    return truth_pose[idx];
  };

  std::vector<OutageZone> zones;
  bool in_zone = false;
  OutageZone current;
  for (const SensorEvent& e : log.events) {
    const auto* frame = std::get_if<CameraFrame>(&e);
    if (!frame) continue;
    const Pose2D& pose = truth_at(frame->t);
    bool covered = false;
    for (const LedBeacon& b : leds.beacons()) {
      if (camera.in_fov(pose, b)) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      if (!in_zone) {
        in_zone = true;
        current.start = frame->t;
      }
      current.end = frame->t;
    } else if (in_zone) {
      in_zone = false;
      zones.push_back(current);
    }
  }
  if (in_zone) zones.push_back(current);
  return zones;
}

TrajectoryReport run_trajectory(const ExperimentConfig& cfg,
                                const WorldModel& world,
                                std::uint64_t base_seed,
                                const ReplayOptions& fused_opts) {
  const TrajectoryScenario& sc = cfg.trajectory;
  TrajectoryReport report;

  ScenarioScript script;
  script.start = sc.start;
  script.waypoints = sc.waypoints;
  script.cruise_speed = sc.cruise_speed;
  script.duration = sc.duration;

  std::array<std::vector<double>, kEstimatorCount> pooled;
  for (int s = 0; s < sc.seeds; ++s) {
    const std::uint64_t run_seed = base_seed + static_cast<std::uint64_t>(s);
    const std::uint64_t log_seed = Rng::mix(run_seed, kLogStream);
    const SensorLog log =
        run_scenario(world, script, cfg.suite, log_seed, "trajectory");

    Rng guess_rng = Rng::derive(log_seed, kGuessStream);
    const Pose2D guess(
        sc.start.x + guess_rng.gaussian(0.0, sc.init_pos_std),
        sc.start.y + guess_rng.gaussian(0.0, sc.init_pos_std),
        sc.start.theta + guess_rng.gaussian(0.0, sc.init_theta_std));

    TrajectoryReport::SeedRun run;
    run.seed = run_seed;
    run.route_length = polyline_length(sc.start, sc.waypoints);
    for (int e = 0; e < kEstimatorCount; ++e) {
      const auto est = static_cast<Estimator>(e);
      ReplayOptions opts;
      if (est == Estimator::kFused) {
        opts = (s == 0) ? fused_opts : ReplayOptions{};
        opts.collect_timing = true;
      }
      run.runs[e] = replay_log(log, world.grid, world.led_map,
                               estimator_config(cfg.stack, est), est, guess,
                               sc.init_pos_std, sc.init_theta_std,
                               Rng::mix(log_seed, kStackStream + e), opts);
      for (const SeriesPoint& pt : run.runs[e].series) {
        pooled[e].push_back(pt.pos_error);
      }
    }

    run.outages = find_outage_zones(log, world.led_map, cfg.suite.camera);
    for (const OutageZone& z : run.outages) {
      if (z.duration() > run.main_outage.duration()) run.main_outage = z;
    }
    const auto& fused = run.runs[0];
    for (const SeriesPoint& pt : fused.series) {
      if (pt.t >= run.main_outage.start && pt.t <= run.main_outage.end) {
        run.fused_max_error_in_outage =
            std::max(run.fused_max_error_in_outage, pt.pos_error);
      }
    }
    run.vlp_gap_covers_outage = true;
    for (double t : run.runs[1].fix_times) {
      if (t >= run.main_outage.start && t <= run.main_outage.end) {
        run.vlp_gap_covers_outage = false;
        break;
      }
    }
    report.seeds.push_back(std::move(run));
  }

  for (int e = 0; e < kEstimatorCount; ++e) {
    report.stats[e] = compute_stats(pooled[e]);
  }

  for (const auto& run : report.seeds) {
    const std::string tag = " (seed " + std::to_string(run.seed) + ")";
    report.checks.push_back(
        {"outage_long_enough" + tag,
         run.main_outage.duration() >= sc.min_outage_duration,
         "zone " + format_double(run.main_outage.start) + ".." +
             format_double(run.main_outage.end) + " s, need >= " +
             format_double(sc.min_outage_duration) + " s"});
    report.checks.push_back(
        {"fused_outage_error" + tag, run.fused_max_error_in_outage <= 0.15,
         "max fused error in zone " +
             format_double(run.fused_max_error_in_outage) + " m, bound 0.15"});
    report.checks.push_back({"vlp_gap_covers_outage" + tag,
                             run.vlp_gap_covers_outage,
                             "no beacon fix timestamps inside the zone"});
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

CellState state_at_world(const TrinaryGrid& g, const Vec2& p) {
  const GridGeometry& geom = g.geometry();
  const Pose2D& origin = geom.origin();
  const Vec2 local = rotate(p - origin.position(), -origin.theta);
  const GridIndex c{static_cast<int>(std::floor(local.x / geom.resolution())),
                    static_cast<int>(std::floor(local.y / geom.resolution()))};
  return g.at_or_unknown(c);
}

}  // namespace

double occupied_iou(const TrinaryGrid& truth, const TrinaryGrid& built) {
  const GridGeometry& geom = truth.geometry();
  long inter = 0;
  long uni = 0;
  for (int iy = 0; iy < geom.height(); ++iy) {
    for (int ix = 0; ix < geom.width(); ++ix) {
      const Vec2 p = geom.cell_center({ix, iy});
      const CellState b = state_at_world(built, p);
      if (b == CellState::Unknown) continue;
      const bool t_occ = truth.at({ix, iy}) == CellState::Occupied;
      const bool b_occ = b == CellState::Occupied;
      inter += (t_occ && b_occ) ? 1 : 0;
      uni += (t_occ || b_occ) ? 1 : 0;
    }
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

MappingReport run_mapping_alignment(const ExperimentConfig& cfg,
                                    const WorldModel& world,
                                    std::uint64_t seed) {
  const MappingScenario& sc = cfg.mapping;
  MappingReport report;
  report.seed = seed;

  ScenarioScript script;
  script.start = sc.start;
  script.waypoints = sc.waypoints;
  script.cruise_speed = sc.cruise_speed;
  script.duration = sc.duration;
  const SensorLog log = run_scenario(world, script, cfg.suite,
                                     Rng::mix(seed, kLogStream), "mapping");

  report.with_anchor =
      build_map(log, world.led_map, cfg.mapper, cfg.stack.vlp, sc.theta0);
  // Constraint off: no beacon map, so no fix can ever anchor the frame.
  report.without_anchor =
      build_map(log, LedFeatureMap{}, cfg.mapper, cfg.stack.vlp, sc.theta0);

  const Vec2 start = sc.start.position();
  report.offset_with =
      distance(report.with_anchor.anchor.apply(Vec2{0.0, 0.0}), start);
  report.offset_without =
      distance(report.without_anchor.anchor.apply(Vec2{0.0, 0.0}), start);
  report.expected_without = start.norm();
  report.iou_with = occupied_iou(world.grid, report.with_anchor.map);
  report.iou_without = occupied_iou(world.grid, report.without_anchor.map);

  report.checks.push_back({"anchored_with_constraint",
                           report.with_anchor.anchored,
                           "a qualifying beacon fix pinned the map frame"});
  report.checks.push_back(
      {"origin_error_with_constraint", report.offset_with < 0.05,
       "exported origin off by " + format_double(report.offset_with) +
           " m, bound 0.05"});
  report.checks.push_back(
      {"origin_error_without_constraint",
       !report.without_anchor.anchored &&
           std::abs(report.offset_without - report.expected_without) < 0.05,
       "offset " + format_double(report.offset_without) + " m vs |start| " +
           format_double(report.expected_without)});
  return report;
}

// ---------------------------------------------------------------------------

namespace {

RecoveryRun score_recovery(const EstimatorRunResult& res, std::uint64_t seed,
                           bool vlp_enabled) {
  RecoveryRun run;
  run.seed = seed;
  run.vlp_enabled = vlp_enabled;
  run.series = res.series;
  run.truth_path = res.truth_path;
  run.estimate_path = res.estimate_path;
  run.reinit_count = res.reinit_count;
  if (!res.fix_times.empty()) run.first_fix_time = res.fix_times.front();
  if (!res.accepted_fix_times.empty()) {
    run.first_accepted_fix_time = res.accepted_fix_times.front();
  }
  run.min_error = std::numeric_limits<double>::infinity();
  for (const SeriesPoint& pt : run.series) {
    run.min_error = std::min(run.min_error, pt.pos_error);
    if (run.recovery_time < 0.0 && run.first_accepted_fix_time >= 0.0 &&
        pt.t >= run.first_accepted_fix_time && pt.pos_error < 0.10) {
      run.recovery_time = pt.t;
      run.recovery_delay = pt.t - run.first_accepted_fix_time;
    }
    if (run.recovery_time >= 0.0 && pt.t >= run.recovery_time) {
      run.max_error_after_recovery =
          std::max(run.max_error_after_recovery, pt.pos_error);
    }
  }
  if (run.series.empty()) run.min_error = 0.0;
  return run;
}

}  // namespace

RecoveryReport run_recovery(const ExperimentConfig& cfg,
                            const WorldModel& world, std::uint64_t base_seed,
                            const ReplayOptions& fused_opts) {
  const RecoveryScenario& sc = cfg.recovery;
  RecoveryReport report;

  ScenarioScript script;
  script.start = sc.truth_start;
  script.waypoints = sc.waypoints;
  script.cruise_speed = 0.2;
  script.duration = sc.duration;

  for (int s = 0; s < sc.seeds; ++s) {
    const std::uint64_t run_seed = base_seed + static_cast<std::uint64_t>(s);
    const std::uint64_t log_seed = Rng::mix(run_seed, kLogStream);
    const SensorLog log =
        run_scenario(world, script, cfg.suite, log_seed, "recovery");

    // The stack is initialized in the look-alike region, not at the truth.
    const Pose2D belief(sc.truth_start.x + sc.wrong_offset.x,
                        sc.truth_start.y + sc.wrong_offset.y,
                        sc.truth_start.theta);
    Rng guess_rng = Rng::derive(log_seed, kGuessStream);
    const Pose2D guess(belief.x + guess_rng.gaussian(0.0, sc.init_pos_std),
                       belief.y + guess_rng.gaussian(0.0, sc.init_pos_std),
                       belief.theta +
                           guess_rng.gaussian(0.0, sc.init_theta_std));

    for (const bool vlp : {true, false}) {
      StackConfig stack_cfg = cfg.stack;
      stack_cfg.use_vlp = vlp;
      stack_cfg.use_mcl = true;
      const ReplayOptions opts =
          (vlp && s == 0) ? fused_opts : ReplayOptions{};
      const EstimatorRunResult res = replay_log(
          log, world.grid, world.led_map, stack_cfg,
          vlp ? Estimator::kFused : Estimator::kMclOnly, guess,
          sc.init_pos_std, sc.init_theta_std,
          Rng::mix(log_seed, kStackStream + (vlp ? 0 : 1)), opts);
      (vlp ? report.with_vlp : report.without_vlp)
          .push_back(score_recovery(res, run_seed, vlp));
    }
  }

  for (const RecoveryRun& run : report.with_vlp) {
    const std::string tag = " (seed " + std::to_string(run.seed) + ")";
    report.checks.push_back({"reinit_fired" + tag, run.reinit_count >= 1,
                             std::to_string(run.reinit_count) +
                                 " particle re-initializations"});
    report.checks.push_back(
        {"recovered_within_2s" + tag,
         run.recovery_delay >= 0.0 && run.recovery_delay <= 2.0,
         "error < 10 cm " + format_double(run.recovery_delay) +
             " s after the first accepted fix"});
  }
  for (const RecoveryRun& run : report.without_vlp) {
    const std::string tag = " (seed " + std::to_string(run.seed) + ")";
    report.checks.push_back(
        {"stays_lost_without_vlp" + tag, run.min_error > 1.0,
         "min error " + format_double(run.min_error) + " m, must stay > 1"});
  }
  return report;
}

// ---------------------------------------------------------------------------

NavigationReport run_navigation(const ExperimentConfig& cfg,
                                const WorldModel& base_world,
                                std::uint64_t base_seed,
                                const std::string& only) {
  NavigationReport report;
  for (std::size_t i = 0; i < cfg.navigation.size(); ++i) {
    const NavScenarioSpec& spec = cfg.navigation[i];
    if (!only.empty() && spec.name != only) continue;

    WorldModel world = base_world;
    for (const DiscObstacle& o : spec.obstacles) {
      world.obstacles.push_back(o);
    }

    NavRunReport run;
    run.name = spec.name;
    run.start = spec.start;
    run.goal = spec.goal;
    run.seed = base_seed + static_cast<std::uint64_t>(i);
    run.result = navigate(world, world.grid, spec.start, spec.goal, cfg.suite,
                          cfg.stack, cfg.nav, Rng::mix(run.seed, kNavStream));
    const NavigationResult& r = run.result;
    run.length_ratio =
        r.planned_length > 0.0 ? r.executed_length / r.planned_length : 0.0;

    run.checks.push_back(
        {"reached_goal", r.success,
         r.success ? "arrived at t=" + format_double(r.arrival_time) + " s"
                   : "failed: " + r.failure_reason});
    run.checks.push_back(
        {"no_collision", r.collision_ticks == 0,
         std::to_string(r.collision_ticks) + " footprint-on-obstacle ticks"});
    run.checks.push_back(
        {"path_efficiency", r.success && run.length_ratio <= 1.3,
         "executed/planned = " + format_double(run.length_ratio) +
             ", bound 1.3"});
    for (const ScenarioCheck& c : run.checks) {
      report.checks.push_back({spec.name + ":" + c.name, c.pass, c.detail});
    }
    report.runs.push_back(std::move(run));
  }
  if (report.runs.empty()) {
    throw std::invalid_argument("no navigation scenario matches '" + only +
                                "'");
  }
  return report;
}

}  // namespace vlpslam

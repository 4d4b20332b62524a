#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlpslam/config.hpp"
#include "vlpslam/mapper.hpp"
#include "vlpslam/navigator.hpp"
#include "vlpslam/stack.hpp"
#include "vlpslam/world.hpp"

namespace vlpslam {

// One pass/fail assertion internal to a scenario run; the CLI exit code is
// the conjunction of these.
struct ScenarioCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

bool all_pass(const std::vector<ScenarioCheck>& checks);

// Estimator ablations compared by the experiments, in report order.
enum class Estimator { kFused = 0, kVlpOnly, kMclOnly, kOdomOnly };
inline constexpr int kEstimatorCount = 4;
const char* estimator_name(Estimator e);
StackConfig estimator_config(const StackConfig& base, Estimator e);

struct SeriesPoint {
  double t = 0.0;
  double pos_error = 0.0;
  double heading_error = 0.0;  // |wrapped|, radians
};

struct ErrorStats {
  int count = 0;
  double mean = 0.0;
  double rms = 0.0;
  double max = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
};
ErrorStats compute_stats(std::vector<double> values);

struct TimingSample {
  double t = 0.0;
  std::string kind;  // predict | mcl | vlp
  double ms = 0.0;
};

// Sinks for the optional per-event streams. Timing and particle output are
// wall-clock / volume heavy and intentionally kept out of the default report
// set, which must be byte-reproducible.
struct ReplayOptions {
  std::ostream* estimate_stream = nullptr;  // newline-delimited records
  std::ostream* particle_stream = nullptr;  // per-scan particle cloud dump
  bool collect_timing = false;
  // Invoked after every processed event; lets callers audit filter internals
  // (covariance health, particle weights) during a scenario replay.
  std::function<void(const SensorEvent&, const FusionStack&)> observer;
};

struct EstimatorRunResult {
  Estimator estimator = Estimator::kFused;
  std::vector<SeriesPoint> series;  // sampled at ground-truth events
  std::vector<Vec2> truth_path;
  std::vector<Vec2> estimate_path;
  std::vector<double> fix_times;
  std::vector<double> accepted_fix_times;
  double final_pos_error = 0.0;
  double final_heading_error = 0.0;
  int fixes_emitted = 0;
  int fixes_accepted = 0;
  int reinit_count = 0;
  int ekf_rejected = 0;
  TimingStats timing;
  std::vector<TimingSample> timing_series;
};

// Feeds one recorded log through one stack configuration and scores it
// against the embedded ground truth.
EstimatorRunResult replay_log(const SensorLog& log, const TrinaryGrid& map,
                              const LedFeatureMap& leds, const StackConfig& cfg,
                              Estimator estimator, const Pose2D& init_guess,
                              double init_pos_std, double init_theta_std,
                              std::uint64_t stack_seed,
                              const ReplayOptions& opts = {});

// Writes one estimate-stream record (timestamp, pose, the 6 unique
// covariance entries, tag of the last update) as a JSON line.
void write_estimate_record(std::ostream& out, const FusionStack& stack);

// ---------------------------------------------------------------------------

struct StaticAccuracyReport {
  struct Row {
    int pose_index = 0;
    std::uint64_t seed = 0;
    Pose2D truth;
    std::array<double, kEstimatorCount> pos_error{};
    std::array<double, kEstimatorCount> heading_error{};
  };
  std::vector<Row> rows;
  std::array<ErrorStats, kEstimatorCount> stats{};
  std::array<std::vector<double>, kEstimatorCount> errors{};  // stats input
  double wall_time_s = 0.0;  // not part of the byte-stable report set
  std::vector<ScenarioCheck> checks;
};

StaticAccuracyReport run_static_accuracy(const ExperimentConfig& cfg,
                                         const WorldModel& world,
                                         std::uint64_t base_seed);

// Poses with free-space clearance and a decodable beacon overhead, drawn
// uniformly by rejection. Throws if the demand cannot be met.
std::vector<Pose2D> sample_coverage_poses(const WorldModel& world,
                                          const CameraModel& camera, int count,
                                          double clearance,
                                          std::uint64_t sample_seed);
bool beacon_coverage(const LedFeatureMap& leds, const CameraModel& camera,
                     const Pose2D& pose, double margin_px);

// ---------------------------------------------------------------------------

struct OutageZone {
  double start = 0.0;
  double end = 0.0;
  double duration() const { return end - start; }
};

struct TrajectoryReport {
  struct SeedRun {
    std::uint64_t seed = 0;
    std::array<EstimatorRunResult, kEstimatorCount> runs;
    std::vector<OutageZone> outages;
    OutageZone main_outage;  // longest geometric zero-coverage interval
    double fused_max_error_in_outage = 0.0;
    bool vlp_gap_covers_outage = false;
    double route_length = 0.0;
  };
  std::vector<SeedRun> seeds;
  std::array<ErrorStats, kEstimatorCount> stats{};  // pooled over seeds
  std::vector<ScenarioCheck> checks;
};

TrajectoryReport run_trajectory(const ExperimentConfig& cfg,
                                const WorldModel& world, std::uint64_t base_seed,
                                const ReplayOptions& fused_opts = {});

// Geometric beacon-visibility gaps along the truth trajectory, evaluated at
// camera ticks.
std::vector<OutageZone> find_outage_zones(const SensorLog& log,
                                          const LedFeatureMap& leds,
                                          const CameraModel& camera);

// ---------------------------------------------------------------------------

struct MappingReport {
  std::uint64_t seed = 0;
  MapBuildResult with_anchor;
  MapBuildResult without_anchor;
  double offset_with = 0.0;     // exported-origin error in the beacon frame
  double offset_without = 0.0;
  double expected_without = 0.0;  // |start position|
  double iou_with = 0.0;
  double iou_without = 0.0;
  std::vector<ScenarioCheck> checks;
};

MappingReport run_mapping_alignment(const ExperimentConfig& cfg,
                                    const WorldModel& world,
                                    std::uint64_t seed);

// Fraction of agreeing occupied cells over the union, sampled on the truth
// lattice and restricted to cells the built map observed.
double occupied_iou(const TrinaryGrid& truth, const TrinaryGrid& built);

// ---------------------------------------------------------------------------

struct RecoveryRun {
  std::uint64_t seed = 0;
  bool vlp_enabled = true;
  std::vector<SeriesPoint> series;
  std::vector<Vec2> truth_path;
  std::vector<Vec2> estimate_path;
  double first_fix_time = -1.0;
  double first_accepted_fix_time = -1.0;
  double recovery_time = -1.0;  // first t with error < 10 cm after acceptance
  double recovery_delay = -1.0;
  int reinit_count = 0;
  double min_error = 0.0;
  double max_error_after_recovery = 0.0;
};

struct RecoveryReport {
  std::vector<RecoveryRun> with_vlp;
  std::vector<RecoveryRun> without_vlp;
  std::vector<ScenarioCheck> checks;
};

RecoveryReport run_recovery(const ExperimentConfig& cfg, const WorldModel& world,
                            std::uint64_t base_seed,
                            const ReplayOptions& fused_opts = {});

// ---------------------------------------------------------------------------

struct NavRunReport {
  std::string name;
  std::uint64_t seed = 0;
  Pose2D start;
  Pose2D goal;
  NavigationResult result;
  double length_ratio = 0.0;  // executed / planned, 0 when no plan
  std::vector<ScenarioCheck> checks;
};

struct NavigationReport {
  std::vector<NavRunReport> runs;
  std::vector<ScenarioCheck> checks;
};

// Runs every configured scenario, or only `only` when non-empty.
NavigationReport run_navigation(const ExperimentConfig& cfg,
                                const WorldModel& base_world,
                                std::uint64_t base_seed,
                                const std::string& only = "");

// ---------------------------------------------------------------------------
// Report emission. Field ordering is fixed; identical inputs produce
// identical bytes.

struct EmitOptions {
  std::string out_dir;
  bool timing = false;  // adds wall-clock tables, which are not reproducible
};

void emit_static_reports(const StaticAccuracyReport& report,
                         const EmitOptions& opts);
void emit_trajectory_reports(const TrajectoryReport& report,
                             const WorldModel& world, const EmitOptions& opts);
void emit_mapping_reports(const MappingReport& report, const WorldModel& world,
                          const EmitOptions& opts);
void emit_recovery_reports(const RecoveryReport& report,
                           const EmitOptions& opts);
void emit_navigation_reports(const NavigationReport& report,
                             const WorldModel& world, const EmitOptions& opts);

// Shared formatting/file helpers (stable across runs by construction).
std::string format_double(double v);  // shortest round-trip decimal
void ensure_directory(const std::string& path);
std::string read_file_bytes(const std::string& path);

}  // namespace vlpslam

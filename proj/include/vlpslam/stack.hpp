#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vlpslam/ekf.hpp"
#include "vlpslam/mcl.hpp"
#include "vlpslam/reorder.hpp"
#include "vlpslam/vlp.hpp"

namespace vlpslam {

struct StackConfig {
  VlpConfig vlp;
  MclConfig mcl;
  EkfConfig ekf;

  // Beacon-fix measurement noise: std scales inversely with fix quality.
  double vlp_base_std = 0.01;
  // Floor on the particle-posterior covariance fed to the filter, so a
  // collapsed cloud cannot claim millimeter certainty.
  double mcl_meas_pos_std_floor = 0.01;
  double reorder_delay = 0.150;

  // Divergence watchdog: this many consecutive beacon fixes outside the
  // chi-square gate against the particle posterior trigger a jump.
  int watchdog_consecutive = 3;
  double watchdog_gate = kChi2Gate2d;
  double reinit_pos_std = 0.10;  // particle spread after the jump
  double reset_pos_std = 0.20;   // filter covariance after the jump

  // Estimator ablations for the comparison harness.
  bool use_vlp = true;
  bool use_mcl = true;
};

struct ReinitEvent {
  double t = 0.0;
  Vec2 fix_position;
};

struct FixEvent {
  double t = 0.0;
  VlpFix fix;
  bool accepted = false;  // passed the filter's innovation gate
};

struct TimingStats {
  double predict_total_s = 0.0;
  int predict_count = 0;
  double scan_total_s = 0.0;  // particle correction + pose update
  int scan_count = 0;
  double camera_total_s = 0.0;
  int camera_count = 0;

  double mean_predict_ms() const {
    return predict_count ? 1e3 * predict_total_s / predict_count : 0.0;
  }
  double mean_scan_ms() const {
    return scan_count ? 1e3 * scan_total_s / scan_count : 0.0;
  }
};

// The online localization pipeline: particle localizer and beacon fixes
// fused by the planar filter, fed through the ingest reorder buffer, with
// the wrong-convergence watchdog on top.
class FusionStack {
 public:
  FusionStack(const TrinaryGrid& map, const LedFeatureMap& leds,
              const StackConfig& cfg, std::uint64_t seed);

  void init_gaussian(const Pose2D& mean, double pos_std, double theta_std);
  // Coarse start: particles over the boxes, filter at the given guess.
  void init_boxes(const std::vector<PoseBox>& boxes, const Pose2D& guess,
                  const Eigen::Matrix3d& guess_cov);

  // Feed one event (any arrival order within the reorder window).
  void ingest(const SensorEvent& e);
  // Drain the buffer at end of stream.
  void finish();

  Pose2D fused_pose() const { return ekf_.pose(); }
  const EkfFusion& ekf() const { return ekf_; }
  bool has_mcl() const { return mcl_.has_value(); }
  const MclFilter& mcl() const { return *mcl_; }
  const StackConfig& config() const { return cfg_; }

  const std::optional<Pose2D>& latest_truth() const { return latest_truth_; }
  const std::vector<ReinitEvent>& reinits() const { return reinits_; }
  const std::vector<FixEvent>& fixes() const { return fixes_; }
  const TimingStats& timing() const { return timing_; }
  const std::string& last_update_tag() const { return last_update_tag_; }
  double last_processed_time() const { return last_processed_time_; }

  // Called after each event is processed (in processing order).
  std::function<void(const SensorEvent&, const FusionStack&)> on_event;

 private:
  void process(const SensorEvent& e);

  StackConfig cfg_;
  LedFeatureMap leds_;
  std::optional<MclFilter> mcl_;
  EkfFusion ekf_;
  ReorderBuffer buffer_;
  bool initialized_ = false;

  int consecutive_divergent_ = 0;
  std::vector<ReinitEvent> reinits_;
  std::vector<FixEvent> fixes_;
  std::optional<Pose2D> latest_truth_;
  TimingStats timing_;
  std::string last_update_tag_ = "none";
  double last_processed_time_ = 0.0;
};

}  // namespace vlpslam

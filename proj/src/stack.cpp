#include "vlpslam/stack.hpp"

#include <chrono>
#include <stdexcept>
#include <variant>

namespace vlpslam {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace

FusionStack::FusionStack(const TrinaryGrid& map, const LedFeatureMap& leds,
                         const StackConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), leds_(leds), buffer_(cfg.reorder_delay) {
  if (cfg.use_mcl) {
    mcl_.emplace(map, cfg.mcl, seed);
  }
  ekf_ = EkfFusion(cfg.ekf);
}

void FusionStack::init_gaussian(const Pose2D& mean, double pos_std,
                                double theta_std) {
  if (mcl_) {
    mcl_->init_gaussian(mean, pos_std, theta_std);
  }
  Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
  P(0, 0) = P(1, 1) = pos_std * pos_std;
  P(2, 2) = theta_std * theta_std;
  ekf_.init(mean, P);
  initialized_ = true;
}

void FusionStack::init_boxes(const std::vector<PoseBox>& boxes,
                             const Pose2D& guess,
                             const Eigen::Matrix3d& guess_cov) {
  if (mcl_) {
    mcl_->init_boxes(boxes);
  }
  ekf_.init(guess, guess_cov);
  initialized_ = true;
}

void FusionStack::ingest(const SensorEvent& e) {
  if (!initialized_) {
    throw std::logic_error("FusionStack used before initialization");
  }
  buffer_.push(e);
  for (const SensorEvent& ready : buffer_.release()) {
    process(ready);
  }
}

void FusionStack::finish() {
  for (const SensorEvent& ready : buffer_.flush()) {
    process(ready);
  }
}

void FusionStack::process(const SensorEvent& e) {
  last_processed_time_ = event_time(e);
  if (const auto* odo = std::get_if<OdometrySample>(&e)) {
    const auto t0 = std::chrono::steady_clock::now();
    if (mcl_) {
      mcl_->predict(*odo);
    }
    ekf_.predict(*odo);
    timing_.predict_total_s += seconds_since(t0);
    ++timing_.predict_count;
    last_update_tag_ = "predict";
  } else if (const auto* scan = std::get_if<LidarScan>(&e)) {
    if (mcl_) {
      const auto t0 = std::chrono::steady_clock::now();
      mcl_->correct(*scan);
      const PoseEstimate est = mcl_->estimate();
      Eigen::Matrix3d R = est.cov;
      const double var_floor =
          cfg_.mcl_meas_pos_std_floor * cfg_.mcl_meas_pos_std_floor;
      R(0, 0) = std::max(R(0, 0), var_floor);
      R(1, 1) = std::max(R(1, 1), var_floor);
      ekf_.update_pose(est.mean, R);
      timing_.scan_total_s += seconds_since(t0);
      ++timing_.scan_count;
      last_update_tag_ = "mcl";
    }
  } else if (const auto* frame = std::get_if<CameraFrame>(&e)) {
    if (cfg_.use_vlp) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto fix =
          solve_vlp_fix(*frame, leds_, ekf_.pose().theta, cfg_.vlp);
      if (fix) {
        const double std = cfg_.vlp_base_std / fix->quality;
        const Eigen::Matrix2d R = std * std * Eigen::Matrix2d::Identity();
        FixEvent record;
        record.t = fix->t;
        record.fix = *fix;
        record.accepted = ekf_.update_position({fix->x, fix->y}, R);
        if (record.accepted) {
          last_update_tag_ = "vlp";
        }
        fixes_.push_back(record);

        if (mcl_) {
          const PoseEstimate est = mcl_->estimate();
          const Eigen::Vector2d d(est.mean.x - fix->x, est.mean.y - fix->y);
          const Eigen::Matrix2d S = est.cov.topLeftCorner<2, 2>() + R;
          const double m2 = d.dot(S.inverse() * d);
          if (m2 > cfg_.watchdog_gate) {
            if (++consecutive_divergent_ >= cfg_.watchdog_consecutive) {
              mcl_->reinit_position({fix->x, fix->y}, cfg_.reinit_pos_std);
              ekf_.reset_position({fix->x, fix->y},
                                  cfg_.reset_pos_std * cfg_.reset_pos_std *
                                      Eigen::Matrix2d::Identity());
              reinits_.push_back({fix->t, {fix->x, fix->y}});
              consecutive_divergent_ = 0;
              last_update_tag_ = "reinit";
            }
          } else {
            consecutive_divergent_ = 0;
          }
        }
      }
      timing_.camera_total_s += seconds_since(t0);
      ++timing_.camera_count;
    }
  } else if (const auto* truth = std::get_if<GroundTruthPose>(&e)) {
    latest_truth_ = truth->pose;
  }
  if (on_event) {
    on_event(e, *this);
  }
}

}  // namespace vlpslam

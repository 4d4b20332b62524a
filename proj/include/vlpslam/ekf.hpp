#pragma once

#include <Eigen/Dense>

#include "vlpslam/sensors.hpp"
#include "vlpslam/sim.hpp"

namespace vlpslam {

// 99th-percentile chi-square thresholds used for innovation gating.
inline constexpr double kChi2Gate2d = 9.210340371976182;
inline constexpr double kChi2Gate3d = 11.344866730144373;

struct EkfConfig {
  OdometryNoiseModel noise;     // process noise, same form as the odometry
  double gate_2d = kChi2Gate2d;
  double gate_3d = kChi2Gate3d;
  double min_increment_std = 1e-5;  // keeps Q positive while crawling
};

// Loose-coupled planar EKF over (x, y, theta). Prediction composes body-frame
// odometry increments; absolute position (beacon fixes) and full pose
// (particle-filter output) arrive as direct measurements.
class EkfFusion {
 public:
  explicit EkfFusion(const EkfConfig& cfg = {});

  void init(const Pose2D& pose, const Eigen::Matrix3d& cov);
  bool initialized() const { return initialized_; }

  void predict(const OdometrySample& odo);

  // Returns false when the innovation fails its chi-square gate (measurement
  // dropped). R is the measurement covariance.
  bool update_position(const Vec2& z, const Eigen::Matrix2d& R);
  bool update_pose(const Pose2D& z, const Eigen::Matrix3d& R);

  // Recovery path: overwrite the position estimate, keep the heading, and
  // inflate the covariance so later measurements are accepted again.
  void reset_position(const Vec2& p, const Eigen::Matrix2d& cov);

  const Pose2D& pose() const { return pose_; }
  const Eigen::Matrix3d& covariance() const { return P_; }
  int rejected_count() const { return rejected_; }

 private:
  void finalize_covariance();

  EkfConfig cfg_;
  Pose2D pose_;
  Eigen::Matrix3d P_ = Eigen::Matrix3d::Identity();
  bool initialized_ = false;
  int rejected_ = 0;
};

}  // namespace vlpslam

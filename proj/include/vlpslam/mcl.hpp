#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vlpslam/likelihood_field.hpp"
#include "vlpslam/rng.hpp"
#include "vlpslam/sim.hpp"

namespace vlpslam {

struct PoseEstimate {
  Pose2D mean;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();  // (x, y, theta)
};

struct MclConfig {
  int particle_count = 500;
  double sigma_hit = 0.10;
  double max_dist = 2.0;
  double z_rand = 0.05;
  int beam_stride = 4;
  double resample_fraction = 0.5;  // resample when ESS < fraction * N
  OdometryNoiseModel noise;        // propagation noise, same form as the sim
  double heading_var_floor = 1e-6;
  // Exploration jitter added to every particle on each prediction. Without it
  // a resampled cloud can only ever revisit its initial draws, so a stationary
  // robot would never refine past the luckiest first sample.
  double roughen_pos_std = 0.006;
  double roughen_theta_std = 0.004;
};

struct Particle {
  Pose2D pose;
  double weight = 0.0;
};

// Axis-aligned pose region for coarse (re)initialization.
struct PoseBox {
  double x0 = 0.0, x1 = 0.0;
  double y0 = 0.0, y1 = 0.0;
  double theta0 = 0.0, theta1 = 0.0;
};

// Systematic (low-variance) resampling. u01 is a single uniform draw in
// [0, 1); returns n_out source indices in nondecreasing order.
std::vector<int> systematic_resample(const std::vector<double>& weights,
                                     int n_out, double u01);

// Particle filter against a fixed floorplan using the likelihood-field
// measurement model.
class MclFilter {
 public:
  MclFilter(const TrinaryGrid& map, const MclConfig& cfg, std::uint64_t seed);

  void init_gaussian(const Pose2D& mean, double pos_std, double theta_std);
  // Uniform over the union of boxes, weighted by box volume; positions landing
  // on occupied cells are rejected and redrawn.
  void init_boxes(const std::vector<PoseBox>& boxes);
  // Recovery jump: every particle keeps its heading but its position is
  // redrawn around p.
  void reinit_position(const Vec2& p, double pos_std);

  void predict(const OdometrySample& odo);
  void correct(const LidarScan& scan);

  PoseEstimate estimate() const;
  double ess() const;
  const std::vector<Particle>& particles() const { return particles_; }
  const LikelihoodField& field() const { return field_; }
  int resample_count() const { return resample_count_; }
  const MclConfig& config() const { return cfg_; }

 private:
  void normalize();

  TrinaryGrid map_;
  LikelihoodField field_;
  MclConfig cfg_;
  Rng rng_;
  std::vector<Particle> particles_;
  int resample_count_ = 0;
};

}  // namespace vlpslam

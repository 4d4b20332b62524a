#pragma once

#include <vector>

#include "vlpslam/grid.hpp"
#include "vlpslam/sensors.hpp"

namespace vlpslam {

// Precomputed endpoint-likelihood lookup over a map: each cell holds
// exp(-d^2 / (2 sigma^2)) where d is the distance to the nearest occupied
// cell, clamped to max_dist. Queries outside the grid return the clamped
// (far-away) value.
class LikelihoodField {
 public:
  LikelihoodField() = default;
  LikelihoodField(const TrinaryGrid& map, double sigma, double max_dist);
  LikelihoodField(const GridGeometry& geom, const std::vector<bool>& occupied,
                  double sigma, double max_dist);

  const GridGeometry& geometry() const { return geom_; }
  bool empty() const { return values_.empty(); }

  double value_at(const Vec2& p) const;
  double distance_at(const Vec2& p) const;  // clamped to max_dist
  double far_value() const { return far_value_; }

 private:
  void build(const std::vector<bool>& occupied, double sigma, double max_dist);

  GridGeometry geom_;
  std::vector<double> values_;
  std::vector<double> distances_;
  double far_value_ = 0.0;
  double max_dist_ = 0.0;
};

// Measurement likelihood of a scan from `pose`, sampling every `stride`-th
// beam, as a product of per-beam mixtures
//   (1 - z_rand) * field(endpoint) + z_rand.
// Beams with no return are skipped. The z_rand floor keeps the product within
// double range: 0.05^90 ~ 1e-117, far above the smallest normal double, so
// linear space is safe here.
double scan_likelihood(const LikelihoodField& field, const Pose2D& pose,
                       const LidarScan& scan, int stride, double z_rand);

// Mean field value over the sampled endpoints; the scan matcher's score.
double endpoint_score(const LikelihoodField& field, const Pose2D& pose,
                      const LidarScan& scan, int stride);

}  // namespace vlpslam

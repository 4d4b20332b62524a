#include "vlpslam/likelihood_field.hpp"

#include <cmath>
#include <stdexcept>

#include "vlpslam/distance_transform.hpp"

namespace vlpslam {

LikelihoodField::LikelihoodField(const TrinaryGrid& map, double sigma,
                                 double max_dist) {
  geom_ = map.geometry();
  std::vector<bool> occ(map.cells().size());
  for (std::size_t i = 0; i < occ.size(); ++i) {
    occ[i] = map.cells()[i] == CellState::Occupied;
  }
  build(occ, sigma, max_dist);
}

LikelihoodField::LikelihoodField(const GridGeometry& geom,
                                 const std::vector<bool>& occupied,
                                 double sigma, double max_dist) {
  geom_ = geom;
  build(occupied, sigma, max_dist);
}

void LikelihoodField::build(const std::vector<bool>& occupied, double sigma,
                            double max_dist) {
  if (sigma <= 0.0 || max_dist <= 0.0) {
    throw std::invalid_argument("likelihood field needs positive sigma and max_dist");
  }
  max_dist_ = max_dist;
  const std::vector<int> sq =
      squared_distance_transform(geom_.width(), geom_.height(), occupied);
  const double res = geom_.resolution();
  distances_.resize(sq.size());
  values_.resize(sq.size());
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = std::min(std::sqrt(static_cast<double>(sq[i])) * res, max_dist);
    distances_[i] = d;
    values_[i] = std::exp(-d * d * inv);
  }
  far_value_ = std::exp(-max_dist * max_dist * inv);
}

double LikelihoodField::value_at(const Vec2& p) const {
  const GridIndex c = geom_.world_to_cell(p);
  return geom_.contains(c) ? values_[geom_.flat(c)] : far_value_;
}

double LikelihoodField::distance_at(const Vec2& p) const {
  const GridIndex c = geom_.world_to_cell(p);
  return geom_.contains(c) ? distances_[geom_.flat(c)] : max_dist_;
}

double scan_likelihood(const LikelihoodField& field, const Pose2D& pose,
                       const LidarScan& scan, int stride, double z_rand) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  double product = 1.0;
  for (std::size_t i = 0; i < scan.ranges.size(); i += stride) {
    if (!scan.valid_range(i)) continue;
    const double beam = scan.angle_min + i * scan.angle_increment;
    const double bx = std::cos(beam) * scan.ranges[i];
    const double by = std::sin(beam) * scan.ranges[i];
    const Vec2 endpoint{pose.x + c * bx - s * by, pose.y + s * bx + c * by};
    product *= (1.0 - z_rand) * field.value_at(endpoint) + z_rand;
  }
  return product;
}

double endpoint_score(const LikelihoodField& field, const Pose2D& pose,
                      const LidarScan& scan, int stride) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < scan.ranges.size(); i += stride) {
    if (!scan.valid_range(i)) continue;
    const double beam = scan.angle_min + i * scan.angle_increment;
    const double bx = std::cos(beam) * scan.ranges[i];
    const double by = std::sin(beam) * scan.ranges[i];
    sum += field.value_at(
        {pose.x + c * bx - s * by, pose.y + s * bx + c * by});
    ++n;
  }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace vlpslam

#pragma once

#include <cstdint>
#include <vector>

#include "vlpslam/grid.hpp"
#include "vlpslam/sensors.hpp"

namespace vlpslam {

struct CostmapConfig {
  double inscribed_radius = 0.105;  // robot disc; cells this close are no-go
  double inflation_radius = 0.25;
  double decay_rate = 5.0;          // exponential falloff per meter
  bool unknown_is_lethal = true;
};

// Inflated cost layer over a grid: 255 marks an actual obstacle (or unknown,
// for global maps), 254 anything within the robot radius of one, then an
// exponentially decaying penalty out to the inflation radius. A clearance
// distance (meters to the nearest obstacle, saturated) is kept alongside.
class Costmap {
 public:
  static constexpr std::uint8_t kLethal = 255;
  static constexpr std::uint8_t kInscribed = 254;

  Costmap() = default;
  Costmap(const GridGeometry& geom, std::vector<std::uint8_t> costs,
          std::vector<float> clearance);

  const GridGeometry& geometry() const { return geom_; }
  std::uint8_t at(const GridIndex& c) const { return costs_[geom_.flat(c)]; }
  std::uint8_t at_or_lethal(const Vec2& p) const;
  double clearance(const GridIndex& c) const { return clearance_[geom_.flat(c)]; }
  double clearance_at(const Vec2& p) const;  // outside the grid: 0
  bool traversable(const GridIndex& c) const { return at(c) < kInscribed; }
  bool empty() const { return costs_.empty(); }

 private:
  GridGeometry geom_;
  std::vector<std::uint8_t> costs_;
  std::vector<float> clearance_;
};

// Costmap over a floorplan; extra point obstacles (e.g. scan returns) can be
// stamped in before inflation.
Costmap build_costmap(const TrinaryGrid& map, const CostmapConfig& cfg,
                      const std::vector<Vec2>& extra_obstacles = {});

// Rolling window fed only by the latest scan, centered on the robot. Cells
// without a return stay free: the window adds constraints, never removes the
// global map's.
Costmap build_local_costmap(const Pose2D& robot, const LidarScan& scan,
                            const CostmapConfig& cfg, double window = 4.0,
                            double resolution = 0.05);

}  // namespace vlpslam

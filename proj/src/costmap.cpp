#include "vlpslam/costmap.hpp"

#include <algorithm>
#include <cmath>

#include "vlpslam/distance_transform.hpp"

namespace vlpslam {

Costmap::Costmap(const GridGeometry& geom, std::vector<std::uint8_t> costs,
                 std::vector<float> clearance)
    : geom_(geom), costs_(std::move(costs)), clearance_(std::move(clearance)) {}

std::uint8_t Costmap::at_or_lethal(const Vec2& p) const {
  const GridIndex c = geom_.world_to_cell(p);
  return geom_.contains(c) ? at(c) : kLethal;
}

double Costmap::clearance_at(const Vec2& p) const {
  const GridIndex c = geom_.world_to_cell(p);
  return geom_.contains(c) ? clearance(c) : 0.0;
}

namespace {

Costmap inflate(const GridGeometry& geom, const std::vector<bool>& obstacle,
                const std::vector<bool>& lethal_mask, const CostmapConfig& cfg) {
  const int n = geom.width() * geom.height();
  const std::vector<int> sq =
      squared_distance_transform(geom.width(), geom.height(), obstacle);
  std::vector<std::uint8_t> costs(n, 0);
  std::vector<float> clearance(n, 0.0f);
  const double res = geom.resolution();
  for (int i = 0; i < n; ++i) {
    const double d = std::sqrt(static_cast<double>(sq[i])) * res;
    clearance[i] = static_cast<float>(d);
    if (lethal_mask[i]) {
      costs[i] = Costmap::kLethal;
    } else if (d <= cfg.inscribed_radius) {
      costs[i] = Costmap::kInscribed;
    } else if (d <= cfg.inflation_radius) {
      const double c = 253.0 * std::exp(-cfg.decay_rate * (d - cfg.inscribed_radius));
      costs[i] = static_cast<std::uint8_t>(std::clamp(c, 1.0, 253.0));
    }
  }
  return Costmap(geom, std::move(costs), std::move(clearance));
}

}  // namespace

Costmap build_costmap(const TrinaryGrid& map, const CostmapConfig& cfg,
                      const std::vector<Vec2>& extra_obstacles) {
  const GridGeometry& geom = map.geometry();
  const int n = geom.width() * geom.height();
  std::vector<bool> obstacle(n, false);
  std::vector<bool> lethal(n, false);
  for (int iy = 0; iy < geom.height(); ++iy) {
    for (int ix = 0; ix < geom.width(); ++ix) {
      const std::size_t f = geom.flat({ix, iy});
      const CellState s = map.at({ix, iy});
      if (s == CellState::Occupied) {
        obstacle[f] = true;
        lethal[f] = true;
      } else if (s == CellState::Unknown && cfg.unknown_is_lethal) {
        obstacle[f] = true;
        lethal[f] = true;
      }
    }
  }
  for (const Vec2& p : extra_obstacles) {
    const GridIndex c = geom.world_to_cell(p);
    if (geom.contains(c)) {
      obstacle[geom.flat(c)] = true;
      lethal[geom.flat(c)] = true;
    }
  }
  return inflate(geom, obstacle, lethal, cfg);
}

Costmap build_local_costmap(const Pose2D& robot, const LidarScan& scan,
                            const CostmapConfig& cfg, double window,
                            double resolution) {
  const int cells = std::max(1, static_cast<int>(std::round(window / resolution)));
  const GridGeometry geom(cells, cells, resolution,
                          Pose2D(robot.x - 0.5 * window, robot.y - 0.5 * window, 0.0));
  const int n = cells * cells;
  std::vector<bool> obstacle(n, false);
  std::vector<bool> lethal(n, false);
  const double c = std::cos(robot.theta);
  const double s = std::sin(robot.theta);
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    if (!scan.valid_range(i)) continue;
    const double beam = scan.angle_min + i * scan.angle_increment;
    const double bx = std::cos(beam) * scan.ranges[i];
    const double by = std::sin(beam) * scan.ranges[i];
    const Vec2 endpoint{robot.x + c * bx - s * by, robot.y + s * bx + c * by};
    const GridIndex cell = geom.world_to_cell(endpoint);
    if (geom.contains(cell)) {
      obstacle[geom.flat(cell)] = true;
      lethal[geom.flat(cell)] = true;
    }
  }
  return inflate(geom, obstacle, lethal, cfg);
}

}  // namespace vlpslam

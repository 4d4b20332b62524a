#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "vlpslam/geometry.hpp"
#include "vlpslam/grid.hpp"

namespace vlpslam {

// Ceiling-mounted circular beacon with a known world position.
struct LedBeacon {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double z = 2.7;
  double diameter = 0.175;
};

// The fixed prior map of beacons. Its frame origin is the world origin and
// never moves; everything downstream is ultimately expressed in this frame.
class LedFeatureMap {
 public:
  LedFeatureMap() = default;
  explicit LedFeatureMap(std::vector<LedBeacon> beacons);

  const std::vector<LedBeacon>& beacons() const { return beacons_; }
  const LedBeacon* find(int id) const;
  std::size_t size() const { return beacons_.size(); }

 private:
  std::vector<LedBeacon> beacons_;  // sorted by id, ids unique
};

// Disc obstacle with a piecewise-linear position schedule. Used for the
// dynamic-obstacle navigation scenarios; inactive outside [spawn, despawn].
struct DiscObstacle {
  double radius = 0.15;
  std::vector<std::pair<double, Vec2>> schedule;  // (time, position), sorted
  double spawn_time = 0.0;
  double despawn_time = std::numeric_limits<double>::infinity();

  bool active_at(double t) const { return t >= spawn_time && t < despawn_time; }
  Vec2 position_at(double t) const;
};

// Ground-truth world: binary floorplan grid, beacon map, physical bounds,
// and any scripted dynamic obstacles.
struct WorldModel {
  TrinaryGrid grid;
  LedFeatureMap led_map;
  double bounds_x = 12.0;
  double bounds_y = 10.8;
  std::vector<DiscObstacle> obstacles;

  // Throws if a beacon lies outside bounds or at/below the camera height,
  // or if the ground-truth grid contains unknown cells.
  void validate(double camera_height) const;

  // Occupancy at p, including dynamic obstacles active at time t.
  bool occupied(const Vec2& p, double t) const;
  // True iff a disc footprint at p with the given radius touches any occupied
  // cell or active obstacle.
  bool footprint_collides(const Vec2& p, double radius, double t) const;
};

WorldModel load_world(const std::string& path);
void save_world(const WorldModel& world, const std::string& world_path,
                const std::string& map_pgm_path,
                const std::string& map_metadata_path);

// The bundled 12.0 x 10.8 m lab floorplan: outer walls, two geometrically
// identical dead-end corridors (south and north, offset by 5 m in y), a few
// distinctive blocks in the east half, and 4 ceiling beacons.
WorldModel make_lab_world();

// Displacement between the two look-alike corridors (south -> north).
Vec2 lab_corridor_displacement();

}  // namespace vlpslam

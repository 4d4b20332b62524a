#include "vlpslam/world.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace vlpslam {

LedFeatureMap::LedFeatureMap(std::vector<LedBeacon> beacons)
    : beacons_(std::move(beacons)) {
  std::sort(beacons_.begin(), beacons_.end(),
            [](const LedBeacon& a, const LedBeacon& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < beacons_.size(); ++i) {
    if (beacons_[i].diameter <= 0.0) {
      throw std::invalid_argument("beacon diameter must be positive");
    }
    if (i > 0 && beacons_[i].id == beacons_[i - 1].id) {
      throw std::invalid_argument("duplicate beacon id " + std::to_string(beacons_[i].id));
    }
  }
}

const LedBeacon* LedFeatureMap::find(int id) const {
  auto it = std::lower_bound(
      beacons_.begin(), beacons_.end(), id,
      [](const LedBeacon& b, int key) { return b.id < key; });
  return (it != beacons_.end() && it->id == id) ? &*it : nullptr;
}

Vec2 DiscObstacle::position_at(double t) const {
  if (schedule.empty()) {
    return {};
  }
  if (t <= schedule.front().first) {
    return schedule.front().second;
  }
  if (t >= schedule.back().first) {
    return schedule.back().second;
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (t <= schedule[i].first) {
      const auto& [t0, p0] = schedule[i - 1];
      const auto& [t1, p1] = schedule[i];
      const double a = (t - t0) / (t1 - t0);
      return {p0.x + a * (p1.x - p0.x), p0.y + a * (p1.y - p0.y)};
    }
  }
  return schedule.back().second;
}

void WorldModel::validate(double camera_height) const {
  const GridGeometry& g = grid.geometry();
  const double x0 = g.origin().x;
  const double y0 = g.origin().y;
  const double x1 = x0 + g.width() * g.resolution();
  const double y1 = y0 + g.height() * g.resolution();
  for (const LedBeacon& b : led_map.beacons()) {
    if (b.x < x0 || b.x > x1 || b.y < y0 || b.y > y1) {
      throw std::invalid_argument("beacon " + std::to_string(b.id) + " outside bounds");
    }
    if (b.z <= camera_height) {
      throw std::invalid_argument("beacon " + std::to_string(b.id) +
                                  " not above the camera height");
    }
  }
  if (!grid.binary()) {
    throw std::invalid_argument("ground-truth grid must not contain unknown cells");
  }
}

bool WorldModel::occupied(const Vec2& p, double t) const {
  if (grid.occupied_at(p)) {
    return true;
  }
  for (const DiscObstacle& o : obstacles) {
    if (o.active_at(t) && (p - o.position_at(t)).norm() <= o.radius) {
      return true;
    }
  }
  return false;
}

bool WorldModel::footprint_collides(const Vec2& p, double radius, double t) const {
  const GridGeometry& g = grid.geometry();
  const double res = g.resolution();
  const GridIndex lo = g.world_to_cell({p.x - radius, p.y - radius});
  const GridIndex hi = g.world_to_cell({p.x + radius, p.y + radius});
  for (int iy = lo.iy; iy <= hi.iy; ++iy) {
    for (int ix = lo.ix; ix <= hi.ix; ++ix) {
      if (grid.at_or_unknown({ix, iy}) != CellState::Occupied) {
        continue;
      }
      // Distance from p to the cell rectangle.
      const Vec2 corner = g.cell_corner({ix, iy});
      const double dx = std::max({corner.x - p.x, 0.0, p.x - (corner.x + res)});
      const double dy = std::max({corner.y - p.y, 0.0, p.y - (corner.y + res)});
      if (dx * dx + dy * dy <= radius * radius) {
        return true;
      }
    }
  }
  for (const DiscObstacle& o : obstacles) {
    if (o.active_at(t) && (p - o.position_at(t)).norm() <= radius + o.radius) {
      return true;
    }
  }
  return false;
}

WorldModel load_world(const std::string& path) {
  YAML::Node doc = YAML::LoadFile(path);
  WorldModel world;
  world.bounds_x = doc["bounds"]["x"].as<double>();
  world.bounds_y = doc["bounds"]["y"].as<double>();
  const auto dir = std::filesystem::path(path).parent_path();
  world.grid = load_trinary_map((dir / doc["map"].as<std::string>()).string());
  std::vector<LedBeacon> beacons;
  for (const auto& n : doc["leds"]) {
    beacons.push_back({n["id"].as<int>(), n["x"].as<double>(), n["y"].as<double>(),
                       n["z"].as<double>(), n["diameter"].as<double>()});
  }
  world.led_map = LedFeatureMap(std::move(beacons));
  return world;
}

void save_world(const WorldModel& world, const std::string& world_path,
                const std::string& map_pgm_path,
                const std::string& map_metadata_path) {
  save_trinary_map(world.grid, map_pgm_path, map_metadata_path);
  YAML::Emitter y;
  y << YAML::BeginMap;
  y << YAML::Key << "bounds" << YAML::Value << YAML::Flow << YAML::BeginMap
    << YAML::Key << "x" << YAML::Value << world.bounds_x
    << YAML::Key << "y" << YAML::Value << world.bounds_y << YAML::EndMap;
  y << YAML::Key << "map" << YAML::Value
    << std::filesystem::path(map_metadata_path).filename().string();
  y << YAML::Key << "leds" << YAML::Value << YAML::BeginSeq;
  for (const LedBeacon& b : world.led_map.beacons()) {
    y << YAML::Flow << YAML::BeginMap;
    y << YAML::Key << "id" << YAML::Value << b.id;
    y << YAML::Key << "x" << YAML::Value << b.x;
    y << YAML::Key << "y" << YAML::Value << b.y;
    y << YAML::Key << "z" << YAML::Value << b.z;
    y << YAML::Key << "diameter" << YAML::Value << b.diameter;
    y << YAML::EndMap;
  }
  y << YAML::EndSeq << YAML::EndMap;
  std::ofstream out(world_path);
  if (!out) {
    throw std::runtime_error("cannot write " + world_path);
  }
  out << y.c_str() << "\n";
}

namespace {

struct Rect {
  double x0, y0, x1, y1;
};

// Frame convention: the beacon-map origin (Point A of the prior map) is the
// world origin; the floor extends [-1.0, 11.0] x [-1.0, 9.8].
const Rect kLabWalls[] = {
    // outer walls
    {-1.0, -1.0, 11.0, -0.9},
    {-1.0, 9.7, 11.0, 9.8},
    {-1.0, -1.0, -0.9, 9.8},
    {10.9, -1.0, 11.0, 9.8},
    // south corridor (dead end to the west, mouth to the east)
    {0.5, 1.45, 5.5, 1.55},
    {0.5, 2.45, 5.5, 2.55},
    {0.4, 1.45, 0.5, 2.55},
    // north corridor, an exact +5.0 m copy of the south one
    {0.5, 6.45, 5.5, 6.55},
    {0.5, 7.45, 5.5, 7.55},
    {0.4, 6.45, 0.5, 7.55},
    // furniture blocks breaking the symmetry of the open halls
    {9.2, 1.2, 9.8, 1.8},
    {8.7, 7.2, 9.5, 7.7},
    {6.2, 4.0, 6.6, 4.4},
    {1.6, 3.8, 2.2, 4.2},
};

}  // namespace

WorldModel make_lab_world() {
  const double res = 0.05;
  const GridGeometry geom(240, 216, res, Pose2D(-1.0, -1.0, 0.0));
  TrinaryGrid grid(geom, CellState::Free);
  for (const Rect& r : kLabWalls) {
    for (int iy = 0; iy < geom.height(); ++iy) {
      for (int ix = 0; ix < geom.width(); ++ix) {
        const Vec2 c = geom.cell_center({ix, iy});
        if (c.x >= r.x0 && c.x < r.x1 && c.y >= r.y0 && c.y < r.y1) {
          grid.set({ix, iy}, CellState::Occupied);
        }
      }
    }
  }

  WorldModel world;
  world.grid = std::move(grid);
  world.bounds_x = 12.0;
  world.bounds_y = 10.8;
  world.led_map = LedFeatureMap({
      {1, 3.0, 2.0, 2.7, 0.175},
      {2, 7.0, 7.4, 2.7, 0.175},
      {3, 9.0, 2.6, 2.7, 0.175},
      {4, 4.8, 4.6, 2.7, 0.175},
  });
  return world;
}

Vec2 lab_corridor_displacement() { return {0.0, 5.0}; }

}  // namespace vlpslam

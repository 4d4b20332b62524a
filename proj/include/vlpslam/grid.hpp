#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlpslam/geometry.hpp"

namespace vlpslam {

struct GridIndex {
  int ix = 0;
  int iy = 0;
  bool operator==(const GridIndex&) const = default;
};

enum class CellState : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

// Shared cell lattice geometry. origin is the world pose of the corner of
// cell (0, 0); cell (0, 0) sits at the lower-left of the lattice.
class GridGeometry {
 public:
  GridGeometry() = default;
  GridGeometry(int width, int height, double resolution, const Pose2D& origin);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Pose2D& origin() const { return origin_; }
  void set_origin(const Pose2D& origin) { origin_ = origin; }

  bool contains(const GridIndex& c) const {
    return c.ix >= 0 && c.ix < width_ && c.iy >= 0 && c.iy < height_;
  }
  GridIndex world_to_cell(const Vec2& p) const;
  Vec2 cell_center(const GridIndex& c) const;
  // World position of the cell-corner lattice point (ix, iy).
  Vec2 cell_corner(const GridIndex& c) const;
  std::size_t flat(const GridIndex& c) const {
    return static_cast<std::size_t>(c.iy) * width_ + c.ix;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.05;
  Pose2D origin_;
};

// Trinary occupancy map (occupied / free / unknown).
class TrinaryGrid {
 public:
  TrinaryGrid() = default;
  TrinaryGrid(const GridGeometry& geom, CellState fill = CellState::Unknown);

  const GridGeometry& geometry() const { return geom_; }
  void set_origin(const Pose2D& origin) { geom_.set_origin(origin); }

  CellState at(const GridIndex& c) const { return cells_[geom_.flat(c)]; }
  void set(const GridIndex& c, CellState s) { cells_[geom_.flat(c)] = s; }
  // Out-of-bounds reads as Unknown.
  CellState at_or_unknown(const GridIndex& c) const {
    return geom_.contains(c) ? at(c) : CellState::Unknown;
  }
  bool occupied_at(const Vec2& p) const {
    return at_or_unknown(geom_.world_to_cell(p)) == CellState::Occupied;
  }

  std::size_t count(CellState s) const;
  bool binary() const { return count(CellState::Unknown) == 0; }
  const std::vector<CellState>& cells() const { return cells_; }

 private:
  GridGeometry geom_;
  std::vector<CellState> cells_;
};

// Log-odds occupancy grid; probability = logistic(log_odds).
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(const GridGeometry& geom, double log_odds_min = -4.0,
                double log_odds_max = 4.0);

  const GridGeometry& geometry() const { return geom_; }
  void set_origin(const Pose2D& origin) { geom_.set_origin(origin); }

  double log_odds(const GridIndex& c) const { return cells_[geom_.flat(c)]; }
  double probability(const GridIndex& c) const {
    return 1.0 / (1.0 + std::exp(-log_odds(c)));
  }
  void add_log_odds(const GridIndex& c, double delta);

  double log_odds_min() const { return log_odds_min_; }
  double log_odds_max() const { return log_odds_max_; }
  const std::vector<float>& cells() const { return cells_; }

 private:
  GridGeometry geom_;
  double log_odds_min_ = -4.0;
  double log_odds_max_ = 4.0;
  std::vector<float> cells_;
};

// Thresholds probabilities into a trinary map. Throws unless
// 0 < free_threshold < occ_threshold < 1.
TrinaryGrid binarize(const OccupancyGrid& grid, double occ_threshold = 0.65,
                     double free_threshold = 0.25);

// PGM + YAML sidecar in the common map-server convention: pixel 0 = occupied,
// 254 = free, 205 = unknown, image row 0 at max y.
struct MapMetadata {
  std::string image;
  double resolution = 0.05;
  Pose2D origin;
  // Strict thresholds on p(occupied); the 205 "unknown" shade maps to
  // p = 0.19608, just above the free cut, so it survives a round trip.
  double occupied_thresh = 0.65;
  double free_thresh = 0.196;
  // Present only for mapper exports anchored to the beacon-map frame.
  bool anchored = false;
  Transform2D anchor_transform;
};

void save_trinary_map(const TrinaryGrid& grid, const std::string& pgm_path,
                      const std::string& metadata_path,
                      const MapMetadata* extra = nullptr);
TrinaryGrid load_trinary_map(const std::string& metadata_path,
                             MapMetadata* meta_out = nullptr);

}  // namespace vlpslam

#pragma once

#include <optional>
#include <vector>

#include "vlpslam/grid.hpp"
#include "vlpslam/likelihood_field.hpp"
#include "vlpslam/sensors.hpp"
#include "vlpslam/vlp.hpp"

namespace vlpslam {

struct MapperConfig {
  double resolution = 0.05;
  int width = 400;   // mapper-frame grid, start pose at the center
  int height = 400;
  double l_occ = 0.85;
  double l_free = -0.4;
  double l_clamp = 4.0;

  // Scan matcher: greedy hill climbing seeded at the dead-reckoned prior.
  double match_sigma = 0.10;
  double match_max_dist = 2.0;
  int match_stride = 2;
  double step_linear = 0.05;                 // one cell
  double step_angular = 0.5 * kPi / 180.0;   // half a degree
  int step_halvings = 4;
  int max_iterations = 100;
  // Matching needs structure: fall back to the odometry prior when fewer
  // occupied cells than this lie near it.
  int min_occupied_nearby = 30;
  double nearby_radius = 4.0;
  int field_rebuild_every = 5;

  double anchor_quality_min = 0.8;
  double occupied_thresh = 0.65;
  double free_thresh = 0.25;
};

// Occupancy mapper that tracks its own pose in a private frame seeded at the
// start pose, then pins that frame to the beacon map with a single rigid
// transform the first time a high-quality beacon fix arrives.
class GridMapper {
 public:
  // theta0: declared initial heading of the robot in the beacon-map frame.
  GridMapper(const MapperConfig& cfg, double theta0);

  void add_odometry(const OdometrySample& odo);
  void add_scan(const LidarScan& scan);
  // Candidate anchor; only the first fix passing the quality bar is used.
  void add_vlp_fix(const VlpFix& fix);

  // Pose tracked in the private mapper frame (starts at the origin).
  Pose2D mapper_pose() const;
  // Heading in the beacon-map frame: theta0 composed with the mapper heading.
  double fused_heading() const;

  bool anchored() const { return anchored_; }
  const Transform2D& anchor() const { return anchor_; }
  const OccupancyGrid& raw_grid() const { return grid_; }
  int scans_inserted() const { return scans_inserted_; }
  int matches_skipped() const { return matches_skipped_; }

  // Thresholded map with its origin re-expressed through the anchor (cell
  // contents are untouched). Identity transform when never anchored.
  TrinaryGrid export_map() const;

 private:
  Pose2D match_scan(const Pose2D& prior, const LidarScan& scan);
  void insert_scan(const Pose2D& pose, const LidarScan& scan);
  void rebuild_field();
  int occupied_near(const Pose2D& pose) const;

  MapperConfig cfg_;
  double theta0_;
  OccupancyGrid grid_;
  LikelihoodField field_;
  bool field_valid_ = false;
  int inserts_since_rebuild_ = 0;

  Pose2D last_matched_;       // mapper frame, pose of the last inserted scan
  Pose2D pending_delta_;      // odometry accumulated since then
  bool anchored_ = false;
  Transform2D anchor_;        // mapper frame -> beacon-map frame
  int scans_inserted_ = 0;
  int matches_skipped_ = 0;
};

struct MapBuildResult {
  TrinaryGrid map;            // beacon-map frame when anchored
  bool anchored = false;
  Transform2D anchor;
  std::vector<Pose2D> trajectory;  // matched poses, beacon-map frame
  int scans_inserted = 0;
};

// Replays a recorded run through the mapper: odometry dead-reckons, scans are
// matched and inserted, camera frames are solved against the beacon map using
// the current fused heading.
MapBuildResult build_map(const SensorLog& log, const LedFeatureMap& led_map,
                         const MapperConfig& cfg, const VlpConfig& vlp_cfg,
                         double theta0);

}  // namespace vlpslam

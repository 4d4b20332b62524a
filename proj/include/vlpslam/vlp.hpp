#pragma once

#include <optional>

#include "vlpslam/sensors.hpp"
#include "vlpslam/world.hpp"

namespace vlpslam {

struct VlpConfig {
  double focal_px = 1400.0;
  double cx = 1024.0;
  double cy = 768.0;
  double camera_height = 0.3;
  double min_apparent_px = 4.0;
  // When set, the horizontal back-projection uses the mapped beacon height
  // instead of the diameter-derived distance, which is noisier.
  bool trust_map_height = true;
};

struct VlpFix {
  double t = 0.0;
  int beacon_id = 0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;                  // estimated camera height above the floor
  double measured_distance = 0.0;  // vertical distance from apparent diameter
  // Radial confidence in [0, 1]: 1 when the blob sits on the principal point,
  // decaying as it moves off-axis.
  double quality = 0.0;
};

// Position from a single identified beacon. The caller supplies its current
// heading estimate; returns nothing when no usable blob is present.
std::optional<VlpFix> solve_vlp_fix(const CameraFrame& frame,
                                    const LedFeatureMap& map, double heading,
                                    const VlpConfig& cfg);

}  // namespace vlpslam

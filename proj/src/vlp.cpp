#include "vlpslam/vlp.hpp"

#include <cmath>

namespace vlpslam {

std::optional<VlpFix> solve_vlp_fix(const CameraFrame& frame,
                                    const LedFeatureMap& map, double heading,
                                    const VlpConfig& cfg) {
  const LedObservation* best = nullptr;
  const LedBeacon* beacon = nullptr;
  for (const LedObservation& obs : frame.observations) {
    if (obs.apparent_diameter_px < cfg.min_apparent_px) continue;
    const LedBeacon* b = map.find(obs.beacon_id);
    if (b == nullptr) continue;  // decoded an id we have no map entry for
    if (best == nullptr ||
        obs.apparent_diameter_px > best->apparent_diameter_px) {
      best = &obs;
      beacon = b;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }

  const double d_measured =
      cfg.focal_px * beacon->diameter / best->apparent_diameter_px;
  const double d_map = beacon->z - cfg.camera_height;
  const double d_xy = cfg.trust_map_height ? d_map : d_measured;

  // Horizontal beacon offset in the body frame, from the pinhole model.
  const Vec2 offset_body{(best->u - cfg.cx) * d_xy / cfg.focal_px,
                         (best->v - cfg.cy) * d_xy / cfg.focal_px};
  const Vec2 offset_world = rotate(offset_body, heading);

  VlpFix fix;
  fix.t = frame.t;
  fix.beacon_id = beacon->id;
  fix.x = beacon->x - offset_world.x;
  fix.y = beacon->y - offset_world.y;
  fix.z = beacon->z - d_measured;
  fix.measured_distance = d_measured;
  const double r = std::hypot(best->u - cfg.cx, best->v - cfg.cy);
  fix.quality = 1.0 / (1.0 + r / cfg.focal_px);
  return fix;
}

}  // namespace vlpslam
